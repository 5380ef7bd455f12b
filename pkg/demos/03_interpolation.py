# %% [markdown]
# # Fractal interpolation
#
# Two constructions produce continuous interpolants: the affine one on a
# binary partition with free vertical scalings and midpoint values, and
# one on an arbitrary partition whose scalings are B-splines vanishing at
# the subset endpoints.

# %%
import numpy as np

from fractalfn import Interval, InterpolationData, bspline
from fractalfn.rb import build_affine_fif, build_property_S_system, check_property_J, solve_fixed_point

data = InterpolationData([0.0, 0.5, 1.0], [0.0, 1.0, -0.5])
sys_ = build_affine_fif(data, [0.5, -0.3, 0.4, 0.2], midpoints=[0.8, 0.1])
f, _ = solve_fixed_point(sys_)
print("affine construction, join-up residual:", check_property_J(sys_, data).max_residual)
print("values at the sites:", f(data.sites), "target:", data.y)
print(f"rough: total variation on the grid = {np.sum(np.abs(np.diff(f.values))):.3f}")

# %% [markdown]
# With the default midpoints (the average of neighbouring data) the fixed
# point collapses to the broken line through the data, whatever the
# scalings are.

# %%
flat, _ = solve_fixed_point(build_affine_fif(data, [0.5, -0.3, 0.4, 0.2]))
print(f"default midpoints: max deviation from broken line = {np.max(np.abs(flat.values - np.interp(flat.x, data.sites, data.y))):.2e}")

# %%
knots = [0.0, 0.3, 0.55, 1.0]
subsets = [Interval(0.0, 0.6), Interval(0.2, 0.9), Interval(0.4, 1.0)]
scale = [bspline(4, X, a) for X, a in zip(subsets, (0.7, -0.6, 0.8))]
data = InterpolationData(knots, [0.0, 0.6, -0.2, 0.4])
sys_ = build_property_S_system(knots, subsets, data, scale)
f, _ = solve_fixed_point(sys_)
print(f"B-spline construction on grid M = {f.M}: knot error = {np.max(np.abs(f(knots) - data.y)):.1e}")
