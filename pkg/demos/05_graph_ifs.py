# %% [markdown]
# # The graph as a local attractor
#
# A local fractal function induces maps (x, y) -> (u_i(x), lam_i(x) + S_i(x) y)
# on strips of the plane.  Under a reweighted metric these are
# contractions, and the graph is invariant under the local operator.

# %%
import math

import numpy as np

from fractalfn import InterpolationData, hausdorff_distance
from fractalfn.local_ifs import apply_local_operator, graph_ifs_from_rb, pixelize_graph
from fractalfn.rb import build_affine_fif, solve_fixed_point

h = 2.0**-9
sys_ = build_affine_fif(InterpolationData([0.0, 0.5, 1.0], [0.0, 0.7, 0.2]), [0.35, -0.3, 0.25, 0.4], [0.9, -0.1])
f, _ = solve_fixed_point(sys_)
F, theta, q = graph_ifs_from_rb(sys_, f, h)
G = pixelize_graph(f, F.bounds, h)
W = apply_local_operator(F, G)
print(f"theta = {theta:.4f}, contraction q = {q:.4f}")
print(f"graph cells = {len(G)}, image cells = {len(W)}")
print(f"d_H(image, graph) = {hausdorff_distance(W, G):.5f} <= {2 * h * math.sqrt(2):.5f}")
