"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a ``criterion N: PASS|FAIL ...`` line.  The lines are
printed as they happen and again in the terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy.spatial import cKDTree

from fractalfn.analysis import check_Cn, check_holder, check_Lp, check_sobolev, estimate_norm, holder_bound
from fractalfn.geometry import GridSet, Interval, hausdorff_distance
from fractalfn.local_ifs import (
    apply_local_operator,
    check_local_subset_global,
    corner_contraction_ifs,
    graph_ifs_from_rb,
    iterate_global_attractor,
    iterate_local_attractor,
    pixelize_graph,
)
from fractalfn.piecewise import PiecewisePoly
from fractalfn.rb import (
    RBSystem,
    SampledFunction,
    apply_rb,
    eval_recursive,
    make_binary_partition,
    make_partition,
    recover_lambda,
    solve_fixed_point,
    verify_self_referential,
)
from fractalfn.tensor import cross_ratio_defect, tensor_fixed_point

from conftest import random_affine_fif, random_property_S
from oracles import hausdorff_bruteforce

RESULTS = []


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def random_lambda(rng, part, degree=1):
    return [PiecewisePoly.from_global(rng.uniform(-1, 1, degree + 1), X) for X in part.subsets]


def random_binary_system(rng, N=None, smax=0.8):
    N = int(rng.choice([2, 4, 8])) if N is None else N
    part = make_binary_partition(N)
    scale = [PiecewisePoly.from_global(rng.uniform(-smax / 2, smax / 2, 2), X) for X in part.subsets]
    return RBSystem(part, random_lambda(rng, part), scale)


def point_set_to_segment(points, p, q, h):
    """Hausdorff distance between a finite point set and the segment [p, q]."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    d = q - p
    t = np.clip((points - p) @ d / (d @ d), 0.0, 1.0)
    to_seg = np.max(np.linalg.norm(points - (p + t[:, None] * d), axis=1))
    n = int(np.ceil(np.linalg.norm(d) / (h / 64))) + 1
    samples = p + np.linspace(0, 1, n)[:, None] * d
    from_seg = np.max(cKDTree(points).query(samples)[0])
    return max(to_seg, from_seg)


def test_criterion_1_corner_attractors():
    h = 2.0**-9
    thr = 2 * h * math.sqrt(2)
    start = time.perf_counter()
    F = corner_contraction_ifs(0.8, 0.4, 0.7, 0.3, 0.5, 0.5)
    K0 = GridSet.full(F.bounds, h)
    loc, _, empty = iterate_local_attractor(F, K0, tol=0.0)
    glob, _ = iterate_global_attractor(F.maps, K0, tol=0.0)
    _, prop1 = check_local_subset_global(F, h)
    elapsed = time.perf_counter() - start

    d_loc = math.inf if empty else hausdorff_bruteforce(loc.centers.tolist(), [(0.0, 0.0), (0.4, 0.3)])
    d_glob = point_set_to_segment(glob.centers, (0.0, 0.0), (0.4, 0.3), h)
    ok = record(
        1,
        d_loc <= thr and d_glob <= thr and prop1 and elapsed <= 10,
        f"local d_H={d_loc:.6g} ({len(loc)} cells), global d_H={d_glob:.6g}, threshold={thr:.6g}, "
        f"local-in-global={prop1}, runtime={elapsed:.2f}s",
    )
    assert ok


def test_criterion_2_interpolation():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst = 0.0
    for k in range(50):
        sys_ = random_affine_fif(rng, smax=0.8) if k < 25 else random_property_S(rng, order=4)
        f, _ = solve_fixed_point(sys_)
        worst = max(worst, float(np.max(np.abs(f(sys_.data.sites) - sys_.data.y))))
    elapsed = time.perf_counter() - start
    ok = record(2, worst <= 1e-9 and elapsed <= 30, f"max site error={worst:.3g}, runtime={elapsed:.2f}s")
    assert ok


def test_criterion_3_contraction_law():
    rng = np.random.default_rng(3)
    worst_excess, worst_ratio_excess = -math.inf, -math.inf
    for k in range(100):
        sys_ = random_affine_fif(rng) if k % 2 else random_property_S(rng)
        x = sys_.grid(sys_.N * 96 if sys_.partition.binary else None).x
        f = SampledFunction(x, rng.normal(size=x.size))
        g = SampledFunction(x, rng.normal(size=x.size))
        lhs = apply_rb(sys_, f).sup_distance(apply_rb(sys_, g))
        # linear reading between grid points cannot enlarge sup |f - g|
        worst_excess = max(worst_excess, lhs - sys_.s * f.sup_distance(g))
        if k < 30:
            _, res = solve_fixed_point(sys_, M=x.size - 1)
            for a, b in zip(res, res[1:]):
                if a > 1e-12:
                    worst_ratio_excess = max(worst_ratio_excess, b / a - (sys_.s + 0.05))
    ok = record(3, worst_excess <= 1e-12 and worst_ratio_excess <= 0,
                f"max(lhs - s*rhs)={worst_excess:.3g}, max(ratio - s - 0.05)={worst_ratio_excess:.3g}")
    assert ok


def test_criterion_4_linearity_and_recovery():
    rng = np.random.default_rng(4)
    lin, rec = 0.0, 0.0
    for _ in range(50):
        sys_ = random_binary_system(rng)
        part = sys_.partition
        M = part.N * 128
        mu = random_lambda(rng, part, degree=2)
        alpha, beta = rng.uniform(-2, 2, 2)
        combo = [alpha * l + beta * m for l, m in zip(sys_.lam, mu)]
        fl, _ = solve_fixed_point(sys_, M=M, tol=1e-13)
        fm, _ = solve_fixed_point(sys_.with_lambda(mu), M=M, tol=1e-13)
        fc, _ = solve_fixed_point(sys_.with_lambda(combo), M=M, tol=1e-13)
        lin = max(lin, float(np.max(np.abs(fc.values - alpha * fl.values - beta * fm.values))))
        for lam_i, (t, vals) in zip(sys_.lam, recover_lambda(part, sys_.scale, fl)):
            rec = max(rec, float(np.max(np.abs(vals - lam_i(t)))))
    ok = record(4, lin <= 1e-8 and rec <= 1e-8, f"linearity defect={lin:.3g}, recovery error={rec:.3g}")
    assert ok


def test_criterion_5_self_referential_residual():
    rng = np.random.default_rng(5)
    worst = 0.0
    for k in range(40):
        sys_ = random_affine_fif(rng) if k % 2 else random_binary_system(rng)
        f, _ = solve_fixed_point(sys_, tol=1e-10)
        worst = max(worst, verify_self_referential(sys_, f))
    ok = record(5, worst <= 1e-8, f"max residual={worst:.3g}")
    assert ok


def test_criterion_6_graph_invariance():
    rng = np.random.default_rng(6)
    h = 2.0**-9
    thr = 2 * h * math.sqrt(2)
    worst_d, worst_q = 0.0, 0.0
    for _ in range(10):
        sys_ = random_affine_fif(rng, N=int(rng.choice([2, 4])), smax=0.4)
        f, _ = solve_fixed_point(sys_)
        F, _, q = graph_ifs_from_rb(sys_, f, h)
        G = pixelize_graph(f, F.bounds, h)
        worst_d = max(worst_d, hausdorff_distance(apply_local_operator(F, G), G))
        worst_q = max(worst_q, q)
    ok = record(6, worst_d <= thr and worst_q < 1, f"max d_H={worst_d:.6g} (threshold {thr:.6g}), max q={worst_q:.6g}")
    assert ok


def test_criterion_7_checker_closed_forms():
    rng = np.random.default_rng(7)
    exact = True
    for _ in range(20):
        N = int(rng.choice([2, 4, 8]))
        s = rng.uniform(-0.99, 0.99, N)
        part = make_binary_partition(N)
        sys_ = RBSystem(part, [PiecewisePoly.constant(0.0, X) for X in part.subsets],
                        [PiecewisePoly.constant(v, X) for v, X in zip(s, part.subsets)])
        m = float(np.max(np.abs(s)))
        exact &= check_Cn(sys_, 0).lhs == m and check_Lp(sys_, math.inf).lhs == m

    sob = 0.0
    for N in (2, 3, 5, 8):
        v = float(rng.uniform(0.05, 0.95))
        uniform = make_partition(np.linspace(0, 1, N + 1), [Interval(0.0, 1.0)] * N)
        sob = max(sob, abs(check_sobolev(uniform, [v] * N, 0, 1).lhs - v))
    for v in (0.2, 0.45, 0.7):
        sob = max(sob, abs(check_sobolev(make_binary_partition(2), [v, -v], 1, 2).lhs - 2 * v))
    same = make_partition([0.0, 0.5, 1.0], [Interval(0.0, 0.5), Interval(0.5, 1.0)])
    for m_ in (0, 1, 3):
        sob = max(sob, abs(check_sobolev(same, [0.2, -0.35], m_, math.inf).lhs - 0.55))

    monotone = True
    for _ in range(20):
        sys_ = random_affine_fif(rng, smax=0.9)
        part, vals = sys_.partition, rng.uniform(-0.9, 0.9, sys_.N)
        for i in range(sys_.N):
            for delta in (1e-3, -1e-3):
                w = vals.copy()
                w[i] = np.sign(w[i]) * max(abs(w[i]) + delta, 0.0)
                lo, hi = (vals, w) if delta > 0 else (w, vals)
                mk = lambda arr: RBSystem(part, sys_.lam, [PiecewisePoly.constant(c, X) for c, X in zip(arr, part.subsets)])
                a, b = mk(lo), mk(hi)
                for fn in (lambda z: check_Lp(z, 1.5), lambda z: check_Lp(z, 0.5), lambda z: check_Lp(z, math.inf),
                           lambda z: check_holder(z, 0.3), lambda z: check_Cn(z, 1)):
                    monotone &= fn(a).lhs <= fn(b).lhs
                monotone &= check_sobolev(part, lo, 2, 3).lhs <= check_sobolev(part, hi, 2, 3).lhs
    ok = record(7, exact and sob <= 1e-12 and monotone,
                f"closed forms exact={exact}, sobolev max error={sob:.3g}, monotone={monotone}")
    assert ok


def test_criterion_8_evaluator_cross_validation():
    rng = np.random.default_rng(8)
    worst = -math.inf
    for _ in range(10):
        sys_ = random_binary_system(rng, smax=0.8)
        f, res = solve_fixed_point(sys_, M=sys_.N * 128, tol=1e-13)
        vals, trunc = eval_recursive(sys_, f.x, 40)
        grid_term = 4 * float(np.max(np.abs(np.diff(f.values, 2))))
        solver_term = res[-1] * sys_.s / (1 - sys_.s)
        worst = max(worst, float(np.max(np.abs(vals - f.values))) - (trunc + grid_term + solver_term))
    ok = record(8, worst <= 0, f"max(error - bound)={worst:.3g}")
    assert ok


def test_criterion_9_holder_bound():
    rng = np.random.default_rng(9)
    count, worst = 0, -math.inf
    while count < 20:
        sys_ = random_affine_fif(rng, smax=0.7)
        s_exp = float(rng.uniform(0.2, 0.8))
        if not check_holder(sys_, s_exp).passed:
            continue
        f, _ = solve_fixed_point(sys_, M=4096)
        worst = max(worst, estimate_norm(f, "holder", s=s_exp) - holder_bound(sys_, s_exp))
        count += 1
    ok = record(9, worst <= 0, f"max(empirical - bound)={worst:.3g} over {count} systems")
    assert ok


def test_criterion_10_tensor_factorization():
    rng = np.random.default_rng(10)
    prod, rank = 0.0, 0.0
    for _ in range(5):
        A, B = random_affine_fif(rng), random_affine_fif(rng)
        surf = tensor_fixed_point(A, B, tol=1e-12, M=63)
        f, _ = solve_fixed_point(A, M=63, tol=1e-13)
        g, _ = solve_fixed_point(B, M=63, tol=1e-13)
        assert surf.values.shape == (64, 64)
        prod = max(prod, float(np.max(np.abs(surf.values - np.outer(f.values, g.values)))))
        rank = max(rank, cross_ratio_defect(surf.values))
    ok = record(10, prod <= 1e-9 and rank <= 1e-8, f"outer-product error={prod:.3g}, rank-one defect={rank:.3g}")
    assert ok
