"""Command line entry point.

Usage::

    fractalfn <mode> --config <path> [--out <dir>] [--grid M] [--tol t] [--seed n]

Every run writes ``report.txt`` plus mode-specific CSV/PGM artifacts into
the output directory.  Exit status: 0 success, 2 a condition check
failed, 1 error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, io
from .config import MODES, ConfigError, JobConfig, build_local_ifs, build_system, load_config, with_overrides
from .geometry import GridSet, Rect, hausdorff_distance
from .local_ifs import (
    apply_local_operator,
    graph_ifs_from_rb,
    iterate_global_attractor,
    iterate_local_attractor,
    pixelize_graph,
)
from .rb import check_property_J, solve_fixed_point, verify_self_referential
from .tensor import tensor_fixed_point

__all__ = ["run", "main"]

EXIT_OK, EXIT_ERROR, EXIT_CHECK_FAILED = 0, 1, 2


class _Report:
    def __init__(self, mode):
        self.lines = [f"mode = {mode}"]

    def add(self, key, value):
        if isinstance(value, (bool, np.bool_)):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(float(value))
        self.lines.append(f"{key} = {value}")

    def block(self, text):
        self.lines += text.rstrip("\n").split("\n")

    def text(self):
        return "\n".join(self.lines) + "\n"


def _graph_bounds(f, h):
    v = f.values
    return Rect(
        math.floor(f.x[0] / h) * h,
        math.ceil(f.x[-1] / h) * h,
        math.floor((v.min() - 1.0) / h) * h,
        math.ceil((v.max() + 1.0) / h) * h,
    )


def _run_checks(job: JobConfig, sys_, rep: _Report) -> bool:
    ok = True
    for tag, params in job.checks:
        if tag == "Lp":
            r = analysis.check_Lp(sys_, params[0])
        elif tag == "holder":
            r = analysis.check_holder(sys_, params[0])
        elif tag == "Cn":
            r = analysis.check_Cn(sys_, params[0])
        else:
            consts = []
            for S in sys_.scale:
                if S.degree > 0:
                    raise ValueError("Sobolev criterion needs constant scalings")
                consts.append(S.coeffs[0, 0])
            r = analysis.check_sobolev(sys_.partition, consts, params[0], params[1])
        rep.add("check", tag)
        rep.block(r.to_text())
        ok &= r.passed
    return ok


def _solve(job, out, rep, status):
    sys_ = build_system(job)
    f, res = solve_fixed_point(sys_, tol=job.tol, max_iter=job.max_iter, M=job.grid)
    io.write_sampled_csv(out / "fixed_point.csv", f)
    io.write_residuals_csv(out / "residuals.csv", res)
    rep.add("s", sys_.s)
    rep.add("grid", f.M)
    rep.add("iterations", len(res))
    rep.add("final_residual", res[-1])
    ratios = [b / a for a, b in zip(res[1:], res[2:]) if a > 0]
    rep.add("max_residual_ratio", max(ratios) if ratios else 0.0)
    rep.add("self_referential_residual", verify_self_referential(sys_, f))
    G = pixelize_graph(f, _graph_bounds(f, job.resolution), job.resolution)
    io.write_gridset_pgm(out / "graph.pgm", G)
    if job.mode == "interp":
        err = float(np.max(np.abs(f(sys_.data.sites) - sys_.data.y)))
        rep.add("max_knot_error", err)
        ok = err <= 1e-9
        if sys_.partition.binary:
            rJ = check_property_J(sys_, sys_.data)
            rep.add("property_J_residual", rJ.max_residual)
            ok &= rJ.passed
        rep.add("interpolates", ok)
        if not ok:
            status = EXIT_CHECK_FAILED
    if not _run_checks(job, sys_, rep):
        status = EXIT_CHECK_FAILED
    return status


def _attract(job, out, rep, status):
    F = build_local_ifs(job)
    K0 = GridSet.full(F.bounds, job.resolution)
    if job.mode == "attract":
        A, trace, empty = iterate_local_attractor(F, K0, job.max_iter, job.tol)
        rep.add("became_empty", empty)
    else:
        A, trace = iterate_global_attractor(F.maps, K0, job.max_iter, job.tol)
    rep.add("iterations", len(trace))
    rep.add("cells", len(A))
    io.write_gridset_pgm(out / "attractor.pgm", A)
    io.write_gridset_csv(out / "attractor.csv", A)
    (out / "trace.csv").write_text("".join(f"{n},{c},{d!r}\n" for n, c, d in trace.records))
    return status


def _graph_ifs(job, out, rep, status):
    sys_ = build_system(job)
    f, _ = solve_fixed_point(sys_, tol=job.tol, max_iter=job.max_iter, M=job.grid)
    F, theta, q = graph_ifs_from_rb(sys_, f, job.resolution)
    G = pixelize_graph(f, F.bounds, job.resolution)
    W = apply_local_operator(F, G)
    d = hausdorff_distance(W, G)
    rep.add("theta", theta)
    rep.add("q", q)
    rep.add("invariance_distance", d)
    rep.add("invariance_threshold", 2 * job.resolution * math.sqrt(2))
    io.write_gridset_pgm(out / "graph.pgm", G)
    io.write_gridset_pgm(out / "graph_image.pgm", W)
    if not (q < 1 and d <= 2 * job.resolution * math.sqrt(2)):
        status = EXIT_CHECK_FAILED
    return status


def _tensor(job, out, rep, status, config_dir):
    A = build_system(job)
    if job.second:
        other = load_config(config_dir / job.second)
        B = build_system(other)
    else:
        B = A
    surf = tensor_fixed_point(A, B, tol=job.tol, M=job.grid, max_iter=job.max_iter)
    rep.add("iterations", len(surf.residuals))
    rep.add("final_residual", surf.residuals[-1])
    io.write_surface(out, surf)
    return status


def run(job: JobConfig, out_dir, config_dir=".") -> int:
    """Execute a parsed job, writing artifacts and ``report.txt`` to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rep = _Report(job.mode)
    status = EXIT_OK
    if job.mode in ("solve", "interp"):
        status = _solve(job, out, rep, status)
    elif job.mode == "check":
        status = EXIT_OK if _run_checks(job, build_system(job), rep) else EXIT_CHECK_FAILED
    elif job.mode in ("attract", "global-attract"):
        status = _attract(job, out, rep, status)
    elif job.mode == "graph-ifs":
        status = _graph_ifs(job, out, rep, status)
    else:
        status = _tensor(job, out, rep, status, Path(config_dir))
    rep.add("exit", status)
    (out / "report.txt").write_text(rep.text())
    return status


def _parser():
    p = argparse.ArgumentParser(prog="fractalfn", description="Local fractal functions and local IFS attractors.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", required=True, help="job file")
    p.add_argument("--out", default="out", help="output directory (default: ./out)")
    p.add_argument("--grid", type=int, help="grid intervals M for sampled functions")
    p.add_argument("--tol", type=float, help="stopping tolerance")
    p.add_argument("--seed", type=int, help="seed for 'random' entries")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        job = load_config(args.config, args.mode)
        job = with_overrides(job, grid=args.grid, tol=args.tol, seed=args.seed)
        status = run(job, args.out, Path(args.config).parent)
    except (ConfigError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print((Path(args.out) / "report.txt").read_text(), end="")
    return status


if __name__ == "__main__":
    sys.exit(main())
