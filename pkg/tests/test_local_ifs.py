import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractalfn.geometry import AffineMap2D, GridSet, Interval, Rect, directed_hausdorff, hausdorff_distance
from fractalfn.local_ifs import (
    LocalIFS,
    apply_global_operator,
    apply_local_operator,
    check_local_subset_global,
    code_metric,
    code_point,
    corner_contraction_ifs,
    graph_ifs_from_rb,
    iterate_global_attractor,
    iterate_local_attractor,
    pixelize_graph,
)
from fractalfn.piecewise import PiecewisePoly
from fractalfn.rb import RBSystem, make_binary_partition, solve_fixed_point

from conftest import random_affine_fif, random_property_S
from oracles import code_metric_exact

UNIT = Rect(0.0, 1.0, 0.0, 1.0)
H = 2.0 ** -9
P = (0.4, 0.3)


def points(h, pts, bounds=UNIT):
    return GridSet.from_points(np.array(pts, dtype=float), bounds, h)


def random_contractive_ifs(r, n_max=3):
    pieces = []
    for _ in range(int(r.integers(1, n_max + 1))):
        x0, x1 = np.sort(r.uniform(0, 1, 2))
        y0, y1 = np.sort(r.uniform(0, 1, 2))
        c = r.uniform(0.2, 0.6)
        theta = r.uniform(0, 2 * math.pi)
        rot = c * np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        fixed = r.uniform(0.1, 0.9, 2)
        pieces.append((Rect(x0, x1, y0, y1), AffineMap2D(rot, fixed - rot @ fixed)))
    return LocalIFS(UNIT, pieces)


class TestOperator:
    def test_disjoint_gives_empty(self):
        F = corner_contraction_ifs()
        S = points(1 / 64, [(0.95, 0.05)])  # outside both corner domains
        assert apply_local_operator(F, S).is_empty

    def test_identity_piece(self):
        F = LocalIFS(UNIT, [(UNIT, AffineMap2D.identity())])
        S = points(1 / 32, [(0.1, 0.9), (0.5, 0.5)])
        assert apply_local_operator(F, S) == S

    def test_corner_example_two_points(self):
        # (0.4, 0.3) lies in both domains, so f_1 also moves it to (0.2, 0.15).
        # At h = 1/640 the point is a cell corner and its cell center lies in X_2.
        h = 1 / 640
        F = corner_contraction_ifs()
        c = h / 2  # cell centers sit half a cell above and right of the lattice points
        out = apply_local_operator(F, points(h, [(c, c), (0.4 + c, 0.3 + c)]))
        assert out == points(h, [(c, c), (0.2 + c, 0.15 + c), (0.4 + c, 0.3 + c)])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_monotone(self, seed):
        r = np.random.default_rng(seed)
        F = random_contractive_ifs(r)
        small = GridSet(UNIT, 1 / 32, r.random((32, 32)) < 0.2)
        big = small.like(small.mask | (r.random((32, 32)) < 0.2))
        assert apply_local_operator(F, small) <= apply_local_operator(F, big)


class TestLocalAttractor:
    def test_corner_example(self):
        # The largest local attractor is {0} together with the orbit p / 2^k of p under f_1.
        F = corner_contraction_ifs()
        A, trace, empty = iterate_local_attractor(F, h=H, tol=0)
        assert not empty
        orbit = [(0.0, 0.0)] + [(P[0] / 2**k, P[1] / 2**k) for k in range(12)]
        assert hausdorff_distance(A, points(H, orbit)) <= 2 * H * math.sqrt(2)
        assert [r[0] for r in trace.records] == list(range(1, len(trace) + 1))

    def test_self_maps_never_empty(self):
        X1, X2 = Rect(0, 0.5, 0, 0.5), Rect(0.5, 1, 0.5, 1)
        F = LocalIFS(UNIT, [(X1, AffineMap2D.scaling(0.5, (0.25, 0.25))), (X2, AffineMap2D.scaling(0.3, (0.8, 0.6)))])
        _, _, empty = iterate_local_attractor(F, h=1 / 64)
        assert not empty

    def test_escaping_map_empties(self):
        X1 = Rect(0, 0.5, 0, 0.5)
        F = LocalIFS(UNIT, [(X1, AffineMap2D(0.5 * np.eye(2), (0.6, 0.6)))])
        A, trace, empty = iterate_local_attractor(F, h=1 / 64)
        assert empty and A.is_empty and len(trace) == 2

    def test_contraction_to_point(self):
        F = LocalIFS(UNIT, [(UNIT, AffineMap2D(np.zeros((2, 2)), (0.3, 0.7)))])
        A, _, _ = iterate_local_attractor(F, h=1 / 64)
        assert len(A) == 1 and A.mask[int(0.3 * 64), int(0.7 * 64)]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_nested_and_below_global(self, seed):
        r = np.random.default_rng(seed)
        F = random_contractive_ifs(r)
        K = G = GridSet.full(UNIT, 1 / 64)
        for _ in range(12):
            K1 = apply_local_operator(F, K)
            G = apply_global_operator(F.maps, G)
            assert K1 <= K
            assert K1 <= G
            K = K1

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_fixed_set_residual(self, seed):
        r = np.random.default_rng(seed)
        F = random_contractive_ifs(r)
        h = 1 / 128
        A, _, empty = iterate_local_attractor(F, h=h)
        if empty:
            return
        img = apply_local_operator(F, A)
        if img.is_empty:
            return
        assert hausdorff_distance(img, A) <= 2 * h * math.sqrt(2)


class TestGlobalAttractor:
    def test_corner_example_segment(self):
        F = corner_contraction_ifs()
        A, _ = iterate_global_attractor(F.maps, GridSet.full(UNIT, H))
        t = np.linspace(0, 0.4, 4001)
        seg = points(H, np.column_stack([t, 0.75 * t]))
        assert hausdorff_distance(A, seg) <= 2 * H

    def test_single_contraction(self):
        h = 1 / 64
        A, _ = iterate_global_attractor([AffineMap2D.scaling(0.1, (0.6, 0.2))], GridSet.full(UNIT, h))
        assert A == points(h, [(0.6, 0.2)])
        # a weaker contraction may keep neighbouring cells, all within one cell diagonal
        A, _ = iterate_global_attractor([AffineMap2D.scaling(0.5, (0.6, 0.2))], GridSet.full(UNIT, h), tol=0)
        assert hausdorff_distance(A, points(h, [(0.6, 0.2)])) <= h * math.sqrt(2)

    def test_shared_fixed_point(self):
        maps = [AffineMap2D.scaling(0.1, (0.6, 0.2)), AffineMap2D.scaling(0.05, (0.6, 0.2))]
        A, _ = iterate_global_attractor(maps, GridSet.full(UNIT, 1 / 64))
        assert A == points(1 / 64, [(0.6, 0.2)])

    def test_non_contraction_rejected(self):
        with pytest.raises(ValueError, match="global iteration requires contractions"):
            iterate_global_attractor([AffineMap2D.identity()], GridSet.full(UNIT, 0.25))


class TestLocalSubsetGlobal:
    def test_corner_example(self):
        d, holds = check_local_subset_global(corner_contraction_ifs(), H)
        assert holds and d <= 2 * H

    def test_full_domains_coincide(self):
        maps = [AffineMap2D.scaling(0.5), AffineMap2D.scaling(0.5, (1, 0)), AffineMap2D.scaling(0.5, (0, 1))]
        F = LocalIFS(UNIT, [(UNIT, m) for m in maps])
        d, holds = check_local_subset_global(F, 1 / 64)
        assert d == 0.0 and holds
        loc, _, _ = iterate_local_attractor(F, h=1 / 64, tol=0)
        glob, _ = iterate_global_attractor(maps, GridSet.full(UNIT, 1 / 64), tol=0)
        assert loc == glob

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_random_instances(self, seed):
        F = random_contractive_ifs(np.random.default_rng(seed))
        _, holds = check_local_subset_global(F, 1 / 64)
        assert holds


class TestCodes:
    def test_metric_identity(self):
        assert code_metric([1, 2, 2], [1, 2, 2], 2) == 0.0

    def test_metric_values(self):
        assert code_metric([1], [2], 2) == pytest.approx(1 / 3)
        assert code_metric([1, 1], [2, 2], 2) == pytest.approx(4 / 9)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda N: st.tuples(st.just(N), st.lists(st.tuples(st.integers(1, N), st.integers(1, N)), max_size=12))))
    def test_metric_matches_exact(self, args):
        N, pairs = args
        a, b = [p[0] for p in pairs], [p[1] for p in pairs]
        assert code_metric(a, b, N) == pytest.approx(float(code_metric_exact(a, b, N)), abs=1e-15)

    def test_point_codes(self):
        F = corner_contraction_ifs()
        p, bound = code_point(F, [1] * 30)
        np.testing.assert_allclose(p, [0, 0], atol=1e-8)
        assert bound == pytest.approx(math.sqrt(2) * 0.5**30)
        p, _ = code_point(F, [2] * 30)
        np.testing.assert_allclose(p, P, atol=1e-8)

    def test_empty_code(self):
        p, bound = code_point(corner_contraction_ifs(), [])
        np.testing.assert_allclose(p, [0.5, 0.5])
        assert bound == pytest.approx(math.sqrt(2))

    def test_inadmissible(self):
        # f_1 f_1 (X) = [0, 0.2] x [0, 0.175] misses the domain of f_2
        with pytest.raises(ValueError, match="code not admissible"):
            code_point(corner_contraction_ifs(), [2, 1, 1])

    def test_bound_shrinks_geometrically(self):
        F = corner_contraction_ifs(s1=0.5, s2=0.3)
        bounds = [code_point(F, [1] + [2] * n)[1] for n in range(1, 6)]
        ratios = np.array(bounds[1:]) / np.array(bounds[:-1])
        np.testing.assert_allclose(ratios, 0.3)


class TestGraphIFS:
    def test_constant_coefficients(self, unit):
        part = make_binary_partition(2)
        sys_ = RBSystem(part, [PiecewisePoly.constant(0.2, unit)] * 2, [PiecewisePoly.constant(0.6, unit)] * 2)
        _, theta, q = graph_ifs_from_rb(sys_)
        assert theta == 1.0 and q == max(0.5, 0.6)

    def test_lipschitz_from_lambda_and_scale(self, unit):
        part = make_binary_partition(2)
        lam = [PiecewisePoly.from_global([0.0, 1.0], unit)] * 2
        S = [PiecewisePoly.from_global([0.0, 0.5], unit)] * 2
        F, theta, q = graph_ifs_from_rb(RBSystem(part, lam, S))
        ymax = max(abs(F.bounds.y0), abs(F.bounds.y1))
        assert theta == pytest.approx(0.5 / (2 * (1.0 + 0.5 * ymax)))
        assert q == pytest.approx(0.75)

    def test_linear_lambda_constant_scale(self, unit):
        part = make_binary_partition(2)
        lam = [PiecewisePoly.from_global([0.0, 1.0], unit)] * 2
        S = [PiecewisePoly.constant(0.5, unit)] * 2
        _, theta, q = graph_ifs_from_rb(RBSystem(part, lam, S))
        assert theta == pytest.approx(0.25) and q == pytest.approx(0.75)

    def test_graph_invariance(self, rng):
        sys_ = random_affine_fif(rng, N=4, smax=0.4)
        f, _ = solve_fixed_point(sys_)
        F, _, q = graph_ifs_from_rb(sys_, f, H)
        G = pixelize_graph(f, F.bounds, H)
        assert q < 1
        assert hausdorff_distance(apply_local_operator(F, G), G) <= 2 * H * math.sqrt(2)

    def test_expansive_maps_rejected(self):
        from fractalfn.piecewise import bspline
        from fractalfn.rb import InterpolationData, build_property_S_system

        subsets = [Interval(0.0, 0.1), Interval(0.4, 0.5)]
        sys_ = build_property_S_system(
            [0, 0.5, 1], subsets, InterpolationData([0, 0.5, 1], [1, 0, 1]), [bspline(3, X, 0.5) for X in subsets]
        )
        with pytest.raises(ValueError):
            graph_ifs_from_rb(sys_)
