# %% [markdown]
# # Fractal surfaces from two curves
#
# The tensor product of two operators has the outer product of their
# fixed points as its fixed point, so the surface matrix has rank one.

# %%
import tempfile
from pathlib import Path

import numpy as np

from fractalfn import InterpolationData, io
from fractalfn.rb import build_affine_fif
from fractalfn.tensor import cross_ratio_defect, tensor_fixed_point

A = build_affine_fif(InterpolationData([0.0, 0.5, 1.0], [0.0, 1.0, 0.0]), [0.5, -0.4, 0.3, 0.45], [0.9, 0.7])
B = build_affine_fif(InterpolationData([0.0, 0.5, 1.0], [0.2, 0.6, 1.0]), [-0.3, 0.3, 0.4, -0.2], [0.1, 0.9])
surf = tensor_fixed_point(A, B, M=64)
print(f"surface {surf.values.shape}, {len(surf.residuals)} iterations")
print(f"rank-one defect = {cross_ratio_defect(surf.values):.1e}")
print("singular values:", np.round(np.linalg.svd(surf.values, compute_uv=False)[:3], 12))

# %%
out = Path(tempfile.mkdtemp())
paths = io.write_surface(out, surf)
print("wrote", ", ".join(p.name for p in paths.values()), "in", out)
print(paths["sidecar"].read_text())
