"""Read-Bajraktarević operators on sampled functions.

An :class:`RBSystem` bundles a partition (subsets ``X_i``, affine maps
``u_i`` whose images tile the base interval) with coefficient functions
``lam[i]`` and ``scale[i]`` on each ``X_i``.  The operator acts by

    (Phi f)(x) = lam_i(t) + scale_i(t) * f(t),   t = u_i^{-1}(x),

for the unique piece ``i`` whose image contains ``x``.  Images are
half-open ``[x_{i-1}, x_i)`` except the last, which is closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .geometry import AffineMap1D, Interval
from .piecewise import PiecewisePoly, sup_norm_bracket

__all__ = [
    "PartitionSpec",
    "RBSystem",
    "SampledFunction",
    "InterpolationData",
    "PropertyReport",
    "NotContractiveError",
    "ConvergenceError",
    "PropertyError",
    "make_binary_partition",
    "make_partition",
    "default_grid_size",
    "grid_size_for",
    "apply_rb",
    "solve_fixed_point",
    "eval_recursive",
    "check_property_J",
    "check_Cn_conditions",
    "build_affine_fif",
    "build_property_S_system",
    "verify_self_referential",
    "recover_lambda",
]

_SNAP = 1e-9  # relative to grid spacing


class NotContractiveError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = list(residuals)


class PropertyError(ValueError):
    def __init__(self, message, offenders):
        super().__init__(message + ": " + "; ".join(offenders))
        self.offenders = list(offenders)


# ----------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class PartitionSpec:
    """Subsets ``X_i`` and affine bijections ``u_i`` with ``u_i(X_i) = [x_{i-1}, x_i]``."""

    base: Interval
    knots: tuple
    subsets: tuple
    maps: tuple
    binary: bool = False

    def __post_init__(self):
        n = len(self.subsets)
        if n < 1 or len(self.maps) != n or len(self.knots) != n + 1:
            raise ValueError("need N subsets, N maps and N + 1 knots")
        k = np.asarray(self.knots, dtype=float)
        if np.any(np.diff(k) <= 0):
            raise ValueError("knots must be strictly ascending")
        scale = max(1.0, self.base.length)
        if abs(k[0] - self.base.lo) > 1e-12 * scale or abs(k[-1] - self.base.hi) > 1e-12 * scale:
            raise ValueError("knots must span the base interval")
        for i, (X, u) in enumerate(zip(self.subsets, self.maps)):
            if X.lo < self.base.lo - 1e-12 * scale or X.hi > self.base.hi + 1e-12 * scale:
                raise ValueError(f"subset {i + 1} leaves the base interval")
            img = u.image(X)
            if not img.isclose(Interval(k[i], k[i + 1])):
                raise ValueError(f"u_{i + 1} does not map X_{i + 1} onto [x_{i}, x_{i + 1}]")

    @property
    def N(self) -> int:
        return len(self.subsets)

    @property
    def a(self):
        """Lipschitz constants ``|u_i'|``."""
        return np.array([u.lipschitz for u in self.maps])

    def piece_of(self, x):
        """0-based piece index for each ``x`` (half-open convention)."""
        inner = np.asarray(self.knots[1:-1], dtype=float)
        eps = 1e-12 * max(1.0, self.base.length)
        return np.searchsorted(inner, np.asarray(x, dtype=float) + eps, side="right")

    def image(self, i: int) -> Interval:
        last = i == self.N - 1
        return Interval(self.knots[i], self.knots[i + 1], True, last)

    def preimage(self, i: int, x):
        """``u_i^{-1}(x)``, snapped onto ``X_i`` when rounding pushes it out."""
        X = self.subsets[i]
        t = self.maps[i].inv(x)
        tol = 1e-12 * max(1.0, X.length)
        t = np.where(np.abs(t - X.lo) <= tol, X.lo, t)
        t = np.where(np.abs(t - X.hi) <= tol, X.hi, t)
        return np.clip(t, X.lo, X.hi)


def make_binary_partition(N: int) -> PartitionSpec:
    """Paired subsets ``X_{2j-1} = X_{2j} = [2(j-1)/N, 2j/N]`` with half-scaling maps.

    ``u_{2j-1}(x) = x/2 + (j-1)/N`` and ``u_{2j}(x) = x/2 + j/N`` take the
    common subset onto its left and right halves.
    """
    if N < 2 or N % 2:
        raise ValueError(f"binary partition needs an even N >= 2, got {N}")
    subsets, maps = [], []
    for j in range(1, N // 2 + 1):
        X = Interval(2 * (j - 1) / N, 2 * j / N)
        subsets += [X, X]
        maps += [AffineMap1D(0.5, (j - 1) / N), AffineMap1D(0.5, j / N)]
    knots = tuple(i / N for i in range(N + 1))
    return PartitionSpec(Interval(0.0, 1.0), knots, tuple(subsets), tuple(maps), binary=True)


def make_partition(knots: Sequence[float], subsets: Sequence) -> PartitionSpec:
    """General partition: increasing affine ``u_i`` from ``[a_i, b_i]`` onto ``[x_{i-1}, x_i]``."""
    knots = tuple(float(k) for k in knots)
    subs = tuple(s if isinstance(s, Interval) else Interval(float(s[0]), float(s[1])) for s in subsets)
    maps = tuple(AffineMap1D.onto(X, Interval(knots[i], knots[i + 1])) for i, X in enumerate(subs))
    return PartitionSpec(Interval(knots[0], knots[-1]), knots, subs, maps)


def default_grid_size(N: int, minimum: int = 4096) -> int:
    """Smallest ``N * 2**p`` that is at least ``minimum``."""
    M = N
    while M < minimum:
        M *= 2
    return M


def grid_size_for(partition: PartitionSpec, minimum: int = 4096) -> int:
    """Grid size putting every knot on a grid point when possible.

    Knots are read as fractions of the base length with denominators up
    to 10**4; the result is the smallest ``q * 2**p >= minimum`` for the
    least common denominator ``q``.  Binary partitions give ``N * 2**p``.
    """
    if partition.binary:
        return default_grid_size(partition.N, minimum)
    lo, length = partition.base.lo, partition.base.length
    q = 1
    for k in partition.knots:
        frac = Fraction((k - lo) / length).limit_denominator(10_000)
        if abs(float(frac) - (k - lo) / length) > 1e-12:
            return default_grid_size(partition.N, minimum)
        q = math.lcm(q, frac.denominator)
    return default_grid_size(q, minimum)


# ----------------------------------------------------------------------
# data containers


@dataclass(eq=False)
class SampledFunction:
    """Values of a real function on a uniform grid of ``M + 1`` points."""

    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.values.shape or self.x.size < 2:
            raise ValueError("grid and values must be 1-D arrays of equal length >= 2")
        d = np.diff(self.x)
        if np.any(np.abs(d - d[0]) > 1e-9 * abs(d[0])):
            raise ValueError("grid spacing must be uniform")

    @classmethod
    def grid(cls, base: Interval, M: int, values=None) -> "SampledFunction":
        x = base.lo + base.length * (np.arange(M + 1) / M)
        x[-1] = base.hi
        return cls(x, np.zeros(M + 1) if values is None else values)

    @classmethod
    def from_callable(cls, fn, base: Interval, M: int) -> "SampledFunction":
        g = cls.grid(base, M)
        g.values = np.asarray(fn(g.x), dtype=float) * np.ones_like(g.x)
        return g

    @property
    def M(self) -> int:
        return self.x.size - 1

    @property
    def h(self) -> float:
        return (self.x[-1] - self.x[0]) / self.M

    @property
    def base(self) -> Interval:
        return Interval(float(self.x[0]), float(self.x[-1]))

    def __call__(self, t):
        return np.interp(t, self.x, self.values)

    def sup_distance(self, other: "SampledFunction") -> float:
        return float(np.max(np.abs(self.values - other.values)))

    def to_csv(self, fh) -> None:
        """Rows ``x,value`` in shortest round-trip decimal form."""
        for xv, yv in zip(self.x.tolist(), self.values.tolist()):
            fh.write(f"{xv!r},{yv!r}\n")


@dataclass(eq=False)
class InterpolationData:
    """Interpolation sites with values, or value-and-derivative vectors.

    ``values`` has shape ``(K,)`` for plain data or ``(K, n + 1)`` where
    column ``k`` holds the prescribed ``k``-th derivative.
    """

    sites: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.sites = np.asarray(self.sites, dtype=float).ravel()
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[0] != self.sites.size:
            raise ValueError("one value vector per site required")
        if np.any(np.diff(self.sites) <= 0):
            raise ValueError("sites must be strictly ascending")
        self.values = v

    @classmethod
    def from_pairs(cls, pairs) -> "InterpolationData":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @property
    def y(self):
        return self.values[:, 0]

    @property
    def order(self) -> int:
        return self.values.shape[1] - 1

    def __len__(self):
        return self.sites.size


@dataclass
class PropertyReport:
    name: str
    max_residual: float
    passed: bool
    tol: float
    residuals: list = field(default_factory=list)


# ----------------------------------------------------------------------
# the system and its grid plan


class _GridPlan:
    """Precomputed pull-back of a uniform grid through every ``u_i^{-1}``."""

    def __init__(self, sys: "RBSystem", x: np.ndarray):
        part = sys.partition
        M = x.size - 1
        h = (x[-1] - x[0]) / M
        piece = part.piece_of(x)
        t = np.empty_like(x)
        lam_t = np.empty_like(x)
        s_t = np.empty_like(x)
        for i in range(part.N):
            m = piece == i
            if not m.any():
                continue
            ti = part.preimage(i, x[m])
            t[m] = ti
            lam_t[m] = sys.lam[i](ti)
            s_t[m] = sys.scale[i](ti)
        r = (t - x[0]) / h
        k = np.rint(r)
        exact = np.abs(r - k) <= _SNAP
        i0 = np.where(exact, k, np.floor(r)).astype(np.int64)
        i0 = np.clip(i0, 0, M)
        w = np.where(exact, 0.0, r - i0)
        self.piece = piece
        self.t = t
        self.i0 = i0
        self.i1 = np.minimum(i0 + 1, M)
        self.w = w
        self.exact = bool(exact.all())
        self.lam_t = lam_t
        self.s_t = s_t

    def read(self, values):
        """``f(t)`` for every grid point, by linear interpolation."""
        if self.exact:
            return values[self.i0]
        return (1.0 - self.w) * values[self.i0] + self.w * values[self.i1]

    def apply(self, values):
        return self.lam_t + self.s_t * self.read(values)


class RBSystem:
    """Partition plus coefficient tuples ``lam`` and ``scale``.

    Parameters
    ----------
    partition : PartitionSpec
    lam, scale : sequence of PiecewisePoly
        ``N`` functions each, defined on the matching subset ``X_i``.
    data : InterpolationData, optional
        Interpolation data the system was built for (used for the default
        initial iterate).
    """

    def __init__(self, partition: PartitionSpec, lam, scale, data=None, property_s=False):
        lam, scale = tuple(lam), tuple(scale)
        if len(lam) != partition.N or len(scale) != partition.N:
            raise ValueError(f"need {partition.N} lambda and scale functions")
        for i, X in enumerate(partition.subsets):
            for name, fn in (("lambda", lam[i]), ("scale", scale[i])):
                if not fn.domain.isclose(X):
                    raise ValueError(f"{name}_{i + 1} is defined on {fn.domain}, expected [{X.lo}, {X.hi}]")
        self.partition = partition
        self.lam = lam
        self.scale = scale
        self.data = data
        self.property_s = property_s
        self._plans = {}

    @property
    def N(self) -> int:
        return self.partition.N

    @cached_property
    def scale_bounds(self):
        """Per-piece certified upper bounds of ``sup |S_i|``."""
        return np.array([sup_norm_bracket(S)[1] for S in self.scale])

    @cached_property
    def s(self) -> float:
        """Certified upper bound of ``max_i sup |S_i|``."""
        return float(self.scale_bounds.max())

    @cached_property
    def lambda_sup(self) -> float:
        return float(max(sup_norm_bracket(f)[1] for f in self.lam))

    def with_lambda(self, lam) -> "RBSystem":
        return RBSystem(self.partition, lam, self.scale)

    def plan(self, x) -> _GridPlan:
        key = (x.size, float(x[0]), float(x[-1]))
        if key not in self._plans:
            self._plans[key] = _GridPlan(self, x)
        return self._plans[key]

    def grid(self, M: int | None = None) -> SampledFunction:
        return SampledFunction.grid(self.partition.base, M or grid_size_for(self.partition))

    def initial_iterate(self, M: int | None = None) -> SampledFunction:
        """Piecewise-affine interpolant of the data, or zero without data."""
        g = self.grid(M)
        if self.data is not None:
            g.values = np.interp(g.x, self.data.sites, self.data.y)
        return g


def apply_rb(sys: RBSystem, f: SampledFunction) -> SampledFunction:
    """One application of the RB operator on the grid of ``f``."""
    return SampledFunction(f.x, sys.plan(f.x).apply(f.values))


def solve_fixed_point(
    sys: RBSystem,
    f0: SampledFunction | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    M: int | None = None,
    force: bool = False,
):
    """Banach iteration ``f_k = Phi f_{k-1}`` until ``sup |f_k - f_{k-1}| <= tol``.

    Returns ``(fixed_point, residuals)``.  Refuses when the certified
    bound ``s`` of ``max sup |S_i|`` is ``>= 1`` unless ``force`` is set.
    """
    if sys.s >= 1 and not force:
        raise NotContractiveError(f"operator not sup-norm contractive (s <= {sys.s:.6g} is not < 1)")
    f = sys.initial_iterate(M) if f0 is None else f0
    plan = sys.plan(f.x)
    vals = f.values
    residuals = []
    for _ in range(max_iter):
        new = plan.apply(vals)
        r = float(np.max(np.abs(new - vals)))
        residuals.append(r)
        vals = new
        if r <= tol:
            return SampledFunction(f.x, vals), residuals
    raise ConvergenceError(f"no convergence to tol={tol:g} in {max_iter} iterations", residuals)


def iteration_bound(s: float, tol: float, first_residual: float) -> int:
    """Iterations sufficient for the solver to stop, given ``r_1`` and ``s``."""
    if first_residual <= tol:
        return 1
    if s == 0:
        return 2
    return math.ceil(math.log(tol / first_residual) / math.log(s)) + 1


def eval_recursive(sys: RBSystem, x, depth: int):
    """Unroll the self-referential equation ``depth`` levels from a zero base.

    Returns ``(value, error_bound)`` where the error bound is
    ``s**depth * sup|lam| / (1 - s)``.
    """
    part = sys.partition
    xa = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    value = np.zeros_like(xa)
    coef = np.ones_like(xa)
    for _ in range(depth):
        piece = part.piece_of(xa)
        y = np.empty_like(xa)
        lam_y = np.empty_like(xa)
        s_y = np.empty_like(xa)
        for i in range(part.N):
            m = piece == i
            if m.any():
                y[m] = part.preimage(i, xa[m])
                lam_y[m] = sys.lam[i](y[m])
                s_y[m] = sys.scale[i](y[m])
        value += coef * lam_y
        coef *= s_y
        xa = y
    s = sys.s
    if s >= 1:
        raise NotContractiveError("recursive evaluation needs s < 1")
    bound = (s ** depth) * sys.lambda_sup / (1.0 - s)
    if np.ndim(x) == 0:
        return float(value[0]), bound
    return value, bound


def verify_self_referential(sys: RBSystem, f: SampledFunction) -> float:
    """Max of ``|f(u_i(t)) - lam_i(t) - S_i(t) f(t)|`` over the pulled-back grid.

    The sample points are ``t = u_i^{-1}(x_k)`` for the grid points ``x_k``
    in the image of piece ``i``; ``f(t)`` is read by linear interpolation.
    """
    return float(np.max(np.abs(f.values - sys.plan(f.x).apply(f.values))))


def recover_lambda(partition: PartitionSpec, scale, f: SampledFunction):
    """Sampled ``lam_i = f o u_i - S_i * f`` on each ``X_i``.

    Returns a list of ``(t, values)`` pairs, one per piece.
    """
    piece = partition.piece_of(f.x)
    out = []
    for i in range(partition.N):
        m = piece == i
        t = partition.preimage(i, f.x[m])
        out.append((t, f.values[m] - scale[i](t) * f(t)))
    return out


# ----------------------------------------------------------------------
# interpolation constructions


def _require_binary(part: PartitionSpec, what: str):
    if not part.binary:
        raise ValueError(f"{what} is defined for binary partitions")


def _even_sites(N):
    return np.array([2 * j / N for j in range(N // 2 + 1)])


def check_property_J(sys: RBSystem, data: InterpolationData, tol: float = 1e-12) -> PropertyReport:
    """Endpoint and join-up residuals on a binary partition.

    For each ``j`` the three residuals are::

        lam_{2j-1}(x_{2j-2}) + (S_{2j-1}(x_{2j-2}) - 1) y_{j-1}
        lam_{2j}(x_{2j})     + (S_{2j}(x_{2j}) - 1) y_j
        lam_{2j}(x_{2j-2}) + S_{2j}(x_{2j-2}) y_{j-1} - lam_{2j-1}(x_{2j}) - S_{2j-1}(x_{2j}) y_j
    """
    part = sys.partition
    _require_binary(part, "property (J)")
    N = part.N
    if len(data) != N // 2 + 1 or not np.allclose(data.sites, _even_sites(N), rtol=0, atol=1e-12):
        raise ValueError("data sites must be the even knots of the partition")
    y = data.y
    res = []
    for j in range(1, N // 2 + 1):
        L, R = 2 * j - 2, 2 * j - 1
        a, b = part.subsets[L].lo, part.subsets[L].hi
        lam, S = sys.lam, sys.scale
        res.append((f"left[{j}]", lam[L](a) + (S[L](a) - 1.0) * y[j - 1]))
        res.append((f"right[{j}]", lam[R](b) + (S[R](b) - 1.0) * y[j]))
        res.append((f"join[{j}]", lam[R](a) + S[R](a) * y[j - 1] - lam[L](b) - S[L](b) * y[j]))
    worst = max(abs(v) for _, v in res)
    return PropertyReport("J", worst, worst <= tol, tol, res)


def build_affine_fif(data: InterpolationData, s_values, midpoints=None) -> RBSystem:
    """Constant scalings and affine ``lam_i`` satisfying property (J).

    The endpoint equations fix ``lam`` at the outer ends of each subset;
    the join-up equation leaves one free value per odd knot, taken as the
    value ``m_j`` of the fixed point there (default: mean of the two
    neighbouring data values).
    """
    K = len(data)
    if K < 2:
        raise ValueError("need at least two interpolation sites")
    N = 2 * (K - 1)
    s = np.asarray(s_values, dtype=float).ravel()
    if s.size != N:
        raise ValueError(f"{K} sites imply N={N}; got {s.size} scaling values")
    if np.any(np.abs(s) >= 1):
        bad = [str(i + 1) for i in np.flatnonzero(np.abs(s) >= 1)]
        raise NotContractiveError(f"scaling values must satisfy |s_i| < 1 (pieces {', '.join(bad)})")
    part = make_binary_partition(N)
    if not np.allclose(data.sites, _even_sites(N), rtol=0, atol=1e-12):
        raise ValueError("data sites must be 0, 2/N, 4/N, ..., 1")
    y = data.y
    if midpoints is None:
        m = 0.5 * (y[:-1] + y[1:])
    else:
        m = np.asarray(midpoints, dtype=float).ravel()
        if m.size != N // 2:
            raise ValueError(f"need {N // 2} midpoint values")
    lam, scale = [], []
    for j in range(1, N // 2 + 1):
        L, R = 2 * j - 2, 2 * j - 1
        X = part.subsets[L]
        lam.append(PiecewisePoly.linear(X.lo, (1 - s[L]) * y[j - 1], X.hi, m[j - 1] - s[L] * y[j]))
        lam.append(PiecewisePoly.linear(X.lo, m[j - 1] - s[R] * y[j - 1], X.hi, (1 - s[R]) * y[j]))
        scale += [PiecewisePoly.constant(s[L], X), PiecewisePoly.constant(s[R], X)]
    return RBSystem(part, lam, scale, data=data)


def build_property_S_system(knots, subsets, data: InterpolationData, scale, lam=None, tol: float = 1e-12) -> RBSystem:
    """System on a general partition with vanishing-endpoint scalings.

    Requires ``S_i(a_i) = 0 = S_i(b_i)`` exactly and ``lam_i(a_i) = y_{i-1}``,
    ``lam_i(b_i) = y_i`` to ``tol``.  Without ``lam``, each ``lam_i`` is the
    affine function through ``(a_i, y_{i-1})`` and ``(b_i, y_i)``.
    """
    part = make_partition(knots, subsets)
    N = part.N
    if len(data) != N + 1 or not np.allclose(data.sites, part.knots, rtol=0, atol=1e-12):
        raise ValueError("data sites must be the knots x_0..x_N")
    y = data.y
    if lam is None:
        lam = [PiecewisePoly.linear(X.lo, y[i], X.hi, y[i + 1]) for i, X in enumerate(part.subsets)]
    offenders = []
    for i, X in enumerate(part.subsets):
        S = scale[i]
        if S(X.lo) != 0.0:
            offenders.append(f"S_{i + 1}(a_{i + 1}) = {S(X.lo)!r}")
        if S(X.hi) != 0.0:
            offenders.append(f"S_{i + 1}(b_{i + 1}) = {S(X.hi)!r}")
        if abs(lam[i](X.lo) - y[i]) > tol:
            offenders.append(f"lambda_{i + 1}(a_{i + 1}) = {lam[i](X.lo)!r} != y_{i} = {y[i]!r}")
        if abs(lam[i](X.hi) - y[i + 1]) > tol:
            offenders.append(f"lambda_{i + 1}(b_{i + 1}) = {lam[i](X.hi)!r} != y_{i + 1} = {y[i + 1]!r}")
    if offenders:
        raise PropertyError("endpoint conditions violated", offenders)
    return RBSystem(part, lam, scale, data=data, property_s=True)


def check_Cn_conditions(sys: RBSystem, data: InterpolationData, n: int, tol: float | None = None) -> PropertyReport:
    """Derivative endpoint and join-up residuals up to order ``n``.

    ``D^k(Phi f)`` at a knot is expanded with the Leibniz rule,
    ``2^k [D^k lam_i + sum_l binom(k, l) D^(k-l) f * D^l S_i]``, evaluated
    at the matching end of ``X_i`` with the prescribed derivative data
    substituted for ``D^(k-l) f``.  Default tolerance ``2**n * 1e-12``.
    """
    part = sys.partition
    _require_binary(part, "the C^n conditions")
    N = part.N
    if data.order < n:
        raise ValueError(f"data carries derivatives up to order {data.order}, need {n}")
    if len(data) != N // 2 + 1 or not np.allclose(data.sites, _even_sites(N), rtol=0, atol=1e-12):
        raise ValueError("data sites must be the even knots of the partition")
    for i in range(N):
        if not (sys.lam[i].is_continuous(n) and sys.scale[i].is_continuous(n)):
            raise ValueError(f"piece {i + 1} is not {n} times continuously differentiable")
    if tol is None:
        tol = 2.0 ** n * 1e-12
    Y = data.values
    dlam = [[f.derivative(k) for k in range(n + 1)] for f in sys.lam]
    dS = [[f.derivative(k) for k in range(n + 1)] for f in sys.scale]

    def d_phi(i, at, site, k):
        inv_slope = 1.0 / part.maps[i].slope
        total = dlam[i][k](at)
        for l in range(k + 1):
            total += math.comb(k, l) * Y[site, k - l] * dS[i][l](at)
        return inv_slope ** k * total

    res = []
    for k in range(n + 1):
        for j in range(1, N // 2 + 1):
            L, R = 2 * j - 2, 2 * j - 1
            a, b = part.subsets[L].lo, part.subsets[L].hi
            res.append((f"k={k} left[{j}]", d_phi(L, a, j - 1, k) - Y[j - 1, k]))
            res.append((f"k={k} right[{j}]", d_phi(R, b, j, k) - Y[j, k]))
            res.append((f"k={k} join[{j}]", d_phi(R, a, j - 1, k) - d_phi(L, b, j, k)))
    worst = max(abs(v) for _, v in res)
    return PropertyReport(f"C{n}", worst, worst <= tol, tol, res)
