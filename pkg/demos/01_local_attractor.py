# %% [markdown]
# # Local attractors on a pixel grid
#
# Two homotheties of ratio 1/2 act on the unit square, but each one only
# sees its own corner rectangle.  Iterating the local operator from the
# full square shrinks to a small set near the origin, while the ordinary
# (global) IFS fills the segment joining the two fixed points.

# %%
import math

from fractalfn import GridSet, corner_contraction_ifs
from fractalfn.local_ifs import check_local_subset_global, iterate_global_attractor, iterate_local_attractor

h = 2.0**-9
F = corner_contraction_ifs()
K0 = GridSet.full(F.bounds, h)

# %%
local, trace, empty = iterate_local_attractor(F, K0, tol=0.0)
print(f"local attractor: {len(local)} cells after {len(trace)} steps (empty: {empty})")
for x, y in local.centers.tolist():
    print(f"  ({x:.5f}, {y:.5f})")

# %% [markdown]
# The cells sit at (0.4, 0.3) / 2^k together with the origin: the point
# (0.4, 0.3) lies in the first rectangle, so the first map keeps halving
# it.  The set is therefore more than the two fixed points alone.

# %%
glob, gtrace = iterate_global_attractor(F.maps, K0, tol=0.0)
xs = glob.centers[:, 0]
print(f"global attractor: {len(glob)} cells, x from {xs.min():.4f} to {xs.max():.4f}")
d, holds = check_local_subset_global(F, h)
print(f"local-in-global directed distance = {d:.3g} (holds: {holds}), two pixels = {2 * h:.3g}")
print(f"Hausdorff tolerance 2h*sqrt(2) = {2 * h * math.sqrt(2):.5f}")
