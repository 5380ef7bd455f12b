"""Piecewise polynomials for the coefficient functions of RB operators.

Each piece stores its coefficients low-to-high in the local variable
``t = x - left_breakpoint``.  The last piece additionally keeps its Taylor
coefficients about the right end of the domain, so values and derivatives
at ``domain.hi`` are read off a single coefficient instead of being summed
with cancellation.  That is what lets B-spline scalings vanish *exactly*
at both ends of their support.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import numpy as np

from .geometry import Interval

__all__ = [
    "DomainError",
    "PiecewisePoly",
    "sup_norm_bracket",
    "holder_seminorm_estimate",
    "holder_quotient_max",
    "bspline",
    "DEFAULT_SAMPLES",
]

DEFAULT_SAMPLES = 4096
_DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """Evaluation point outside the domain of a piecewise polynomial."""


def _taylor_shift(coeffs, shift):
    """Coefficients of ``p(t + shift)``, computed in exact rational arithmetic."""
    c = [Fraction(v) for v in coeffs]
    d = Fraction(shift)
    out = []
    for r in range(len(c)):
        out.append(sum(c[k] * comb(k, r) * d ** (k - r) for k in range(r, len(c))))
    return out


def _horner(c, t):
    """Evaluate rows of ``c`` (low-to-high) at ``t``; ``c`` is (m, d+1)."""
    res = c[:, -1].copy()
    for k in range(c.shape[1] - 2, -1, -1):
        res = res * t + c[:, k]
    return res


def _diff_coeffs(c, k):
    """k-th derivative of low-to-high coefficient rows."""
    c = np.atleast_2d(c)
    d = c.shape[1] - 1
    if k > d:
        return np.zeros((c.shape[0], 1))
    fac = np.array([factorial(j) // factorial(j - k) for j in range(k, d + 1)], dtype=float)
    return c[:, k:] * fac


class PiecewisePoly:
    """Piecewise polynomial on ``[breakpoints[0], breakpoints[-1]]``.

    Parameters
    ----------
    breakpoints : array_like
        Strictly ascending, length ``P + 1``.
    coeffs : array_like
        Shape ``(P, d + 1)``; row ``p`` holds the coefficients of piece ``p``
        in ``t = x - breakpoints[p]``, lowest order first.
    hi_coeffs : array_like, optional
        Taylor coefficients of the last piece about the right endpoint.
        Computed exactly from ``coeffs`` when omitted.

    Evaluation at an interior breakpoint uses the right-hand piece; at the
    right end of the domain, the last piece.
    """

    def __init__(self, breakpoints, coeffs, hi_coeffs=None):
        bp = np.asarray(breakpoints, dtype=float).ravel()
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if bp.size < 2 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly ascending")
        if c.shape[0] != bp.size - 1:
            raise ValueError(f"{bp.size - 1} pieces but {c.shape[0]} coefficient rows")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        self.breakpoints = bp
        self.coeffs = c
        if hi_coeffs is None:
            hi = [float(v) for v in _taylor_shift(c[-1], Fraction(bp[-1]) - Fraction(bp[-2]))]
        else:
            hi = np.asarray(hi_coeffs, dtype=float).ravel()
        hi = np.asarray(hi, dtype=float)
        if hi.size != c.shape[1]:
            raise ValueError("hi_coeffs must have the same length as a coefficient row")
        self.hi_coeffs = hi

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value: float, domain: Interval) -> "PiecewisePoly":
        return cls([domain.lo, domain.hi], [[float(value)]])

    @classmethod
    def linear(cls, x0: float, y0: float, x1: float, y1: float) -> "PiecewisePoly":
        """The affine function through ``(x0, y0)`` and ``(x1, y1)``, on ``[x0, x1]``."""
        slope = (y1 - y0) / (x1 - x0)
        return cls([x0, x1], [[y0, slope]], hi_coeffs=[y1, slope])

    @classmethod
    def from_global(cls, coeffs, domain, breakpoints=None) -> "PiecewisePoly":
        """Restrict the polynomial ``sum_k coeffs[k] * x**k`` to ``domain``."""
        if breakpoints is None:
            breakpoints = [domain.lo, domain.hi]
        bp = np.asarray(breakpoints, dtype=float)
        rows = [[float(v) for v in _taylor_shift(coeffs, b)] for b in bp[:-1]]
        hi = [float(v) for v in _taylor_shift(coeffs, bp[-1])]
        return cls(bp, rows, hi_coeffs=hi)

    # basic properties -------------------------------------------------
    @property
    def domain(self) -> Interval:
        return Interval(float(self.breakpoints[0]), float(self.breakpoints[-1]))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def n_pieces(self) -> int:
        return self.coeffs.shape[0]

    @property
    def widths(self):
        return np.diff(self.breakpoints)

    def __repr__(self):
        return f"PiecewisePoly(pieces={self.n_pieces}, degree={self.degree}, domain=[{self.breakpoints[0]}, {self.breakpoints[-1]}])"

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        return (
            np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.coeffs, other.coeffs)
            and np.array_equal(self.hi_coeffs, other.hi_coeffs)
        )

    # evaluation -------------------------------------------------------
    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        scalar = xa.ndim == 0
        xa = np.atleast_1d(xa)
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        tol = _DOMAIN_TOL * max(1.0, hi - lo, abs(lo), abs(hi))
        if np.any(xa < lo - tol) or np.any(xa > hi + tol) or np.any(np.isnan(xa)):
            bad = xa[(xa < lo - tol) | (xa > hi + tol) | np.isnan(xa)][0]
            raise DomainError(f"x={bad!r} outside domain [{lo}, {hi}]")
        xa = np.clip(xa, lo, hi)
        idx = np.clip(np.searchsorted(self.breakpoints, xa, side="right") - 1, 0, self.n_pieces - 1)
        out = _horner(self.coeffs[idx], xa - self.breakpoints[idx])
        at_hi = xa == hi
        if at_hi.any():
            out[at_hi] = self.hi_coeffs[0]
        return float(out[0]) if scalar else out

    eval = __call__

    def derivative(self, k: int = 1) -> "PiecewisePoly":
        """Piecewise formal derivative of order ``k``."""
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        if k == 0:
            return self
        return PiecewisePoly(self.breakpoints, _diff_coeffs(self.coeffs, k), _diff_coeffs(self.hi_coeffs, k)[0])

    def antiderivative(self) -> "PiecewisePoly":
        """Continuous antiderivative vanishing at the left end of the domain."""
        c = self.coeffs
        d = c.shape[1]
        new = np.zeros((c.shape[0], d + 1))
        new[:, 1:] = c / np.arange(1, d + 1)
        for p in range(1, c.shape[0]):
            new[p, 0] = _horner(new[p - 1 : p], self.widths[p - 1])[0]
        return PiecewisePoly(self.breakpoints, new)

    def is_continuous(self, order: int = 0, tol: float = 1e-9) -> bool:
        """Whether derivatives ``0..order`` match across interior breakpoints."""
        for k in range(order + 1):
            c = _diff_coeffs(self.coeffs, k)
            left = _horner(c[:-1], self.widths[:-1])
            right = c[1:, 0]
            scale = 1.0 + np.maximum(np.abs(left), np.abs(right))
            if np.any(np.abs(left - right) > tol * scale):
                return False
        return True

    def lipschitz_bound(self) -> float:
        """Upper bound of ``|f'|`` from coefficient sums, piece by piece."""
        return float(np.max(_abs_derivative_bound(self.coeffs, self.widths, 1)))

    # algebra ----------------------------------------------------------
    def _pad(self, d):
        c = np.zeros((self.n_pieces, d + 1))
        c[:, : self.degree + 1] = self.coeffs
        h = np.zeros(d + 1)
        h[: self.degree + 1] = self.hi_coeffs
        return c, h

    def _combine(self, other, op):
        if isinstance(other, (int, float, np.floating)):
            other = PiecewisePoly(self.breakpoints, np.full((self.n_pieces, 1), float(other)), [float(other)])
        if not np.array_equal(self.breakpoints, other.breakpoints):
            raise ValueError("piecewise polynomials must share breakpoints")
        d = max(self.degree, other.degree)
        a, ah = self._pad(d)
        b, bh = other._pad(d)
        return PiecewisePoly(self.breakpoints, op(a, b), op(ah, bh))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, np.floating)):
            return NotImplemented
        return PiecewisePoly(self.breakpoints, self.coeffs * scalar, self.hi_coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _abs_derivative_bound(coeffs, widths, k):
    """Per-piece bound of ``|D^k p|`` on ``[0, w]`` via sum of ``|c_j| j!/(j-k)! w^(j-k)``."""
    c = _diff_coeffs(coeffs, k)
    powers = widths[:, None] ** np.arange(c.shape[1])[None, :]
    return (np.abs(c) * powers).sum(axis=1)


def sup_norm_bracket(f: PiecewisePoly, samples: int = DEFAULT_SAMPLES):
    """Certified bracket ``(lower, upper)`` for ``sup |f|``.

    ``lower`` is the largest sampled value (``samples`` per piece, endpoints
    included).  Between neighbouring samples ``|f|`` can exceed the larger
    endpoint value by at most ``min(Lip * d / 2, M2 * d**2 / 8)``, with
    ``Lip`` and ``M2`` coefficient-sum bounds of ``|f'|`` and ``|f''|`` on the
    piece and ``d`` the sample spacing; ``upper`` adds that padding.
    """
    if samples < 2:
        raise ValueError("need at least two samples per piece")
    w = f.widths
    tau = np.linspace(0.0, 1.0, samples)
    t = w[:, None] * tau[None, :]
    vals = np.abs(_horner_grid(f.coeffs, t))
    piece_max = vals.max(axis=1)
    piece_max[-1] = max(piece_max[-1], abs(f.hi_coeffs[0]))
    d = w / (samples - 1)
    lip = _abs_derivative_bound(f.coeffs, w, 1)
    m2 = _abs_derivative_bound(f.coeffs, w, 2)
    pad = np.minimum(lip * d / 2.0, m2 * d ** 2 / 8.0)
    return float(piece_max.max()), float((piece_max + pad).max())


def _horner_grid(c, t):
    """Evaluate row ``p`` of ``c`` at every entry of ``t[p]``."""
    res = np.broadcast_to(c[:, -1:], t.shape).copy()
    for k in range(c.shape[1] - 2, -1, -1):
        res = res * t + c[:, k : k + 1]
    return res


def holder_quotient_max(values, h: float, s: float, max_points: int = 10_000) -> float:
    """Largest ``|v_i - v_j| / |x_i - x_j|**s`` over pairs of a uniform grid.

    Every stride is scanned when the grid has at most ``max_points``
    points (all pairs).  Larger grids scan strides ``1..1024`` plus a
    geometric selection of longer ones, which still yields a lower bound of
    the true seminorm.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n < 2:
        return 0.0
    if n <= max_points:
        strides = np.arange(1, n)
    else:
        long = np.unique(np.geomspace(1025, n - 1, 512).astype(np.int64))
        strides = np.concatenate([np.arange(1, 1025), long])
    best = 0.0
    for d in strides:
        q = np.abs(v[d:] - v[:-d]).max() / (d * h) ** s
        if q > best:
            best = q
    return float(best)


def holder_seminorm_estimate(f: PiecewisePoly, s: float, n: int = 1024) -> float:
    """Grid lower bound of the homogeneous Hölder seminorm of ``f``.

    Pairs are taken among ``n + 1`` uniform points of the domain; refining
    the grid can only increase the estimate along nested grids.
    """
    if not 0 < s < 1:
        raise ValueError("Hölder exponent must lie in (0, 1)")
    lo, hi = f.breakpoints[0], f.breakpoints[-1]
    x = np.linspace(lo, hi, n + 1)
    return holder_quotient_max(f(x), (hi - lo) / n, s)


def _cardinal_pieces(n):
    """Exact local coefficients of the cardinal B-spline of order ``n`` on [0, n]."""
    pieces = []
    for j in range(n):
        poly = [Fraction(0)] * n
        for k in range(j + 1):
            m = j - k
            coef = Fraction((-1) ** k * comb(n, k), factorial(n - 1))
            for r in range(n):
                poly[r] += coef * comb(n - 1, r) * m ** (n - 1 - r)
        pieces.append(poly)
    return pieces


def bspline(order: int, domain: Interval, amplitude: float) -> PiecewisePoly:
    """Uniform polynomial B-spline of the given order supported on ``domain``.

    The spline has ``order`` pieces of equal width, is symmetric about the
    midpoint of ``domain`` and is scaled so that its maximum equals
    ``amplitude`` (its sup norm is ``|amplitude|``).  Derivatives of orders
    ``0 .. order-2`` vanish at both ends at coefficient level.
    """
    if order < 3:
        raise ValueError("B-spline order must be at least 3")
    pieces = _cardinal_pieces(order)
    if order % 2 == 0:
        peak = pieces[order // 2][0]
    else:
        peak = sum(c * Fraction(1, 2) ** r for r, c in enumerate(pieces[(order - 1) // 2]))
    hi = _taylor_shift(pieces[-1], 1)
    w = domain.length / order
    scale = [float(amplitude) / w ** r for r in range(order)]
    rows = [[float(c / peak) * scale[r] for r, c in enumerate(p)] for p in pieces]
    hi_row = [float(c / peak) * scale[r] for r, c in enumerate(hi)]
    bp = domain.lo + w * np.arange(order + 1)
    bp[-1] = domain.hi
    return PiecewisePoly(bp, rows, hi_coeffs=hi_row)
