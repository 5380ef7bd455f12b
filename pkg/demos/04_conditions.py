# %% [markdown]
# # Which function space does the fixed point live in?
#
# Each checker evaluates a closed-form sufficient condition from the
# scalings and the partition.  Larger spaces accept larger scalings.

# %%
import math

from fractalfn import InterpolationData
from fractalfn.analysis import (
    check_Cn,
    check_holder,
    check_Lp,
    check_sobolev,
    estimate_norm,
    holder_bound,
    knot_jumps,
)
from fractalfn.rb import build_affine_fif, solve_fixed_point

data = InterpolationData([0.0, 0.5, 1.0], [0.0, 0.6, 0.3])
for s in (0.3, 0.6, 0.9):
    sys_ = build_affine_fif(data, [s] * 4, midpoints=[0.5, 0.2])
    part = sys_.partition
    rows = {
        "L^inf": check_Lp(sys_, math.inf),
        "L^2": check_Lp(sys_, 2),
        "C^0.5": check_holder(sys_, 0.5),
        "C^1": check_Cn(sys_, 1),
        "W^1,2": check_sobolev(part, [s] * 4, 1, 2),
    }
    print(f"s = {s}: " + ", ".join(f"{k} {'ok' if r.passed else 'no'} ({r.lhs:.3g})" for k, r in rows.items()))

# %% [markdown]
# When the Hölder condition holds and the fixed point is continuous, the
# a priori seminorm bound can be compared with a sampled estimate.

# %%
sys_ = build_affine_fif(data, [0.3] * 4, midpoints=[0.5, 0.2])
print(f"largest jump at a knot: {knot_jumps(sys_).max():.1e}")
f, _ = solve_fixed_point(sys_, M=4096)
print(f"empirical C^0.5 seminorm {estimate_norm(f, 'holder', s=0.5):.4f} <= bound {holder_bound(sys_, 0.5):.4f}")
print(f"L^2 norm {estimate_norm(f, 'Lp', p=2):.4f}, W^1,2 norm {estimate_norm(f, 'sobolev', m=1, p=2):.4f}")
