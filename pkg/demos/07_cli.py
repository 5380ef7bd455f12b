# %% [markdown]
# # Running jobs from the command line
#
# Every capability is also a CLI mode driven by a small job file.  This
# script runs each bundled config and shows the report and exit status.

# %%
import tempfile
from pathlib import Path

from fractalfn.cli import main

configs = Path(__file__).resolve().parent / "configs"
jobs = [
    ("attract", "corner_attract.cfg"),
    ("global-attract", "corner_global.cfg"),
    ("solve", "solve_binary.cfg"),
    ("interp", "interp_affine.cfg"),
    ("interp", "interp_bspline.cfg"),
    ("check", "check_c1_fail.cfg"),
    ("graph-ifs", "graph_ifs.cfg"),
    ("tensor", "tensor.cfg"),
]
root = Path(tempfile.mkdtemp())
for mode, cfg in jobs:
    print(f"$ fractalfn {mode} --config {cfg}")
    status = main([mode, "--config", str(configs / cfg), "--out", str(root / cfg[:-4])])
    print(f"[exit {status}]\n")
