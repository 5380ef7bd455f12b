"""Local iterated function systems on pixel sets.

A local IFS is a list of pieces ``(X_i, f_i)`` where each map only acts on
its own domain rectangle.  The associated set operator is

    F_loc(S) = union_i f_i(S ∩ X_i),

and iterating it from the whole space yields a nested sequence whose
limit is the largest local attractor.  The global operator drops the
domain intersections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import (
    AffineMap2D,
    GridSet,
    Rect,
    directed_hausdorff,
    hausdorff_distance,
    intersect_grid_set,
    map_grid_set,
    union_all,
)

__all__ = [
    "LocalIFS",
    "ConvergenceTrace",
    "GraphMap",
    "apply_local_operator",
    "apply_global_operator",
    "iterate_local_attractor",
    "iterate_global_attractor",
    "check_local_subset_global",
    "code_metric",
    "code_point",
    "corner_contraction_ifs",
    "graph_ifs_from_rb",
    "pixelize_graph",
]


@dataclass
class LocalIFS:
    """Pieces ``(domain, map)`` acting inside the rectangle ``bounds``.

    Maps are callables on ``(n, 2)`` point arrays; :class:`AffineMap2D`
    is the usual choice.
    """

    bounds: Rect
    pieces: list

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a local IFS needs at least one piece")
        for i, (dom, _) in enumerate(self.pieces):
            if not self.bounds.contains_rect(dom):
                raise ValueError(f"domain of piece {i + 1} is not inside the bounds")

    @property
    def N(self) -> int:
        return len(self.pieces)

    @property
    def maps(self):
        return [m for _, m in self.pieces]

    @property
    def domains(self):
        return [d for d, _ in self.pieces]


@dataclass
class ConvergenceTrace:
    """Per-iteration ``(index, cell count, d_H to previous iterate)``."""

    records: list = field(default_factory=list)

    def append(self, n: int, cells: int, dist: float):
        self.records.append((n, cells, dist))

    def __len__(self):
        return len(self.records)

    @property
    def distances(self):
        return [r[2] for r in self.records]

    def to_text(self) -> str:
        return "".join(f"{n} {c} {d!r}\n" for n, c, d in self.records)


def apply_local_operator(F: LocalIFS, S: GridSet) -> GridSet:
    """``union_i f_i(S ∩ X_i)``; pieces whose domain misses ``S`` add nothing."""
    parts = []
    for dom, f in F.pieces:
        piece = intersect_grid_set(S, dom)
        if not piece.is_empty:
            parts.append(map_grid_set(f, piece))
    return union_all(parts, S)


def apply_global_operator(maps: Sequence[Callable], S: GridSet) -> GridSet:
    """Hutchinson operator ``union_i f_i(S)``."""
    return union_all((map_grid_set(f, S) for f in maps), S)


def _iterate(step, K0: GridSet, max_iter: int, tol: float):
    trace = ConvergenceTrace()
    K = K0
    for n in range(1, max_iter + 1):
        nxt = step(K)
        if nxt.is_empty:
            trace.append(n, 0, math.inf)
            return nxt, trace, True
        d = hausdorff_distance(nxt, K)
        trace.append(n, len(nxt), d)
        K = nxt
        if d <= tol:
            break
    return K, trace, False


def iterate_local_attractor(
    F: LocalIFS,
    K0: GridSet | None = None,
    max_iter: int = 256,
    tol: float | None = None,
    h: float | None = None,
):
    """Iterate ``K_n = F_loc(K_{n-1})`` until successive sets are ``tol``-close.

    Parameters
    ----------
    K0 : GridSet, optional
        Starting set; defaults to the whole space at resolution ``h``.
    tol : float, optional
        Stopping threshold on the Hausdorff distance between iterates
        (default one pixel).  ``tol=0`` runs to the exact stable set.

    Returns
    -------
    (attractor, trace, became_empty)
    """
    if K0 is None:
        if h is None:
            raise ValueError("give either a starting set or a resolution")
        K0 = GridSet.full(F.bounds, h)
    if tol is None:
        tol = K0.h
    return _iterate(lambda K: apply_local_operator(F, K), K0, max_iter, tol)


def _contraction_factor(f) -> float:
    c = getattr(f, "contraction", None)
    if c is None:
        raise ValueError("map does not report a contraction factor")
    return float(c)


def iterate_global_attractor(maps, K0: GridSet, max_iter: int = 256, tol: float | None = None):
    """Iterate the Hutchinson operator of ``maps`` from ``K0``.

    Returns ``(attractor, trace)``.
    """
    if any(_contraction_factor(f) >= 1 for f in maps):
        raise ValueError("global iteration requires contractions")
    if tol is None:
        tol = K0.h
    K, trace, _ = _iterate(lambda K: apply_global_operator(maps, K), K0, max_iter, tol)
    return K, trace


def check_local_subset_global(F: LocalIFS, h: float, max_iter: int = 256, tol: float | None = 0.0):
    """Directed distance from the local to the global attractor.

    Both are iterated from the whole space.  The inclusion is reported to
    hold when the directed distance is at most two pixels.

    Returns ``(d_directed, holds)``.
    """
    K0 = GridSet.full(F.bounds, h)
    loc, _, empty = iterate_local_attractor(F, K0, max_iter, tol)
    glob, _ = iterate_global_attractor(F.maps, K0, max_iter, tol)
    if empty:
        return 0.0, True
    d = directed_hausdorff(loc, glob)
    return d, d <= 2 * h


# ----------------------------------------------------------------------
# code space


def code_metric(sigma: Sequence[int], tau: Sequence[int], N: int) -> float:
    """Truncated ``sum_n |sigma_n - tau_n| / (N + 1)**n`` (``n`` from 1)."""
    if len(sigma) != len(tau):
        raise ValueError("codes must have equal length")
    return math.fsum(abs(a - b) / (N + 1) ** n for n, (a, b) in enumerate(zip(sigma, tau), start=1))


def _clip_polygon(poly: np.ndarray, R: Rect) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon against a rectangle."""
    edges = ((0, R.x0, 1.0), (0, R.x1, -1.0), (1, R.y0, 1.0), (1, R.y1, -1.0))
    pts = list(poly)
    for axis, c, sign in edges:
        if not pts:
            break
        out = []
        for k, cur in enumerate(pts):
            prev = pts[k - 1]
            cin = sign * (cur[axis] - c) >= -1e-12
            pin = sign * (prev[axis] - c) >= -1e-12
            if cin != pin:
                t = (c - prev[axis]) / (cur[axis] - prev[axis])
                out.append(prev + t * (cur - prev))
            if cin:
                out.append(cur)
        pts = out
    return np.array(pts).reshape(-1, 2)


def code_point(F: LocalIFS, sigma: Sequence[int]):
    """Approximate the point addressed by a finite code.

    Computes ``f_{sigma_1}( ... f_{sigma_n}(X ∩ X_{sigma_n}) ... )`` with the
    domain of each outer map intersected in turn.  Returns the center of
    the resulting polygon's bounding box and the bound
    ``diam(X) * prod(contraction factors)`` on its diameter.
    """
    for k in sigma:
        if not 1 <= k <= F.N:
            raise ValueError(f"symbol {k} outside 1..{F.N}")
    poly = F.bounds.corners()
    bound = F.bounds.diameter
    for k in reversed(sigma):
        dom, f = F.pieces[k - 1]
        if not isinstance(f, AffineMap2D):
            raise TypeError("code_point needs affine maps")
        poly = _clip_polygon(poly, dom)
        if len(poly) == 0:
            raise ValueError("code not admissible")
        poly = f(poly)
        bound *= f.contraction
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    return 0.5 * (lo + hi), bound


def corner_contraction_ifs(x1=0.8, x2=0.4, y1=0.7, y2=0.3, s1=0.5, s2=0.5) -> LocalIFS:
    """Two corner domains of the unit square with homotheties.

    ``f_1`` contracts ``[0, x1] x [0, y1]`` towards the origin and ``f_2``
    contracts ``[x2, 1] x [y2, 1]`` towards ``(x2, y2)``.
    """
    if not (0 < x2 < x1 < 1 and 0 < y2 < y1 < 1):
        raise ValueError("need 0 < x2 < x1 < 1 and 0 < y2 < y1 < 1")
    unit = Rect(0.0, 1.0, 0.0, 1.0)
    f1 = AffineMap2D.scaling(s1)
    f2 = AffineMap2D.scaling(s2, center=(x2, y2))
    return LocalIFS(unit, [(Rect(0.0, x1, 0.0, y1), f1), (Rect(x2, 1.0, y2, 1.0), f2)])


# ----------------------------------------------------------------------
# graph IFS of an RB operator


@dataclass(frozen=True)
class GraphMap:
    """``w(x, y) = (u(x), lam(x) + S(x) * y)`` on ``X_i x Y``."""

    u: object
    lam: object
    scale: object
    domain: tuple  # (lo, hi) of X_i, used to clamp rounding excursions

    def __call__(self, points):
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        x = np.clip(p[:, 0], *self.domain)
        return np.column_stack([self.u(x), self.lam(x) + self.scale(x) * p[:, 1]])


def graph_ifs_from_rb(sys, fixed_point=None, h: float = 2.0 ** -9):
    """Local IFS on ``X x Y`` whose attractor is the graph of the fixed point.

    The vertical range is ``[min f - 1, max f + 1]`` snapped outward to
    multiples of ``h``.  Returns ``(F, theta, q)`` with
    ``theta = (1 - a) / (2 L)`` for the uniform Lipschitz bound ``L`` of the
    vertical components in ``x`` (``theta = 1`` when ``L = 0``) and
    ``q = max(a + theta L, s)``.
    """
    from .rb import solve_fixed_point

    part = sys.partition
    a = float(part.a.max())
    if a >= 1:
        raise ValueError("graph IFS needs contractive u_i (max a_i < 1)")
    if fixed_point is None:
        fixed_point, _ = solve_fixed_point(sys)
    v = fixed_point.values
    y0 = math.floor((v.min() - 1.0) / h) * h
    y1 = math.ceil((v.max() + 1.0) / h) * h
    x0 = math.floor(part.base.lo / h) * h
    x1 = math.ceil(part.base.hi / h) * h
    bounds = Rect(x0, x1, y0, y1)
    ymax = max(abs(y0), abs(y1))
    L = max(lam.lipschitz_bound() + S.lipschitz_bound() * ymax for lam, S in zip(sys.lam, sys.scale))
    theta = 1.0 if L == 0 else (1.0 - a) / (2.0 * L)
    q = max(a + theta * L, sys.s)
    pieces = []
    for X, u, lam, S in zip(part.subsets, part.maps, sys.lam, sys.scale):
        pieces.append((Rect(X.lo, X.hi, y0, y1), GraphMap(u, lam, S, (X.lo, X.hi))))
    return LocalIFS(bounds, pieces), theta, q


def pixelize_graph(f, bounds: Rect, h: float) -> GridSet:
    """Cells containing the sample points ``(x_k, f(x_k))``."""
    return GridSet.from_points(np.column_stack([f.x, f.values]), bounds, h)
