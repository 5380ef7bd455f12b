"""Sufficient conditions for function-space membership, and norm estimates.

Each ``check_*`` function returns a :class:`ConditionReport` whose
left-hand side is assembled from certified upper bounds of the relevant
sup norms, so a pass is a sound verdict and a fail may be conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .piecewise import holder_quotient_max, holder_seminorm_estimate, sup_norm_bracket

__all__ = [
    "ConditionReport",
    "check_Lp",
    "check_holder",
    "check_Cn",
    "check_sobolev",
    "estimate_norm",
    "holder_bound",
    "lambda_holder_bound",
    "knot_jumps",
]


@dataclass
class ConditionReport:
    """Outcome of a contraction criterion; ``passed`` iff ``lhs < threshold``."""

    space: str
    params: dict
    lhs: float
    per_piece: list = field(default_factory=list)
    branch: str = ""
    threshold: float = 1.0

    @property
    def passed(self) -> bool:
        return self.lhs < self.threshold

    def to_text(self) -> str:
        """Flat ``key = value`` block, one breakdown entry per line."""
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [
            f"space = {self.space}",
            f"params = {params}",
            f"lhs = {self.lhs!r}",
            f"threshold = {self.threshold!r}",
            f"pass = {'true' if self.passed else 'false'}",
        ]
        if self.branch:
            lines.append(f"branch = {self.branch}")
        lines += [f"{label} = {value!r}" for label, value in self.per_piece]
        return "\n".join(lines) + "\n"


def _require_binary(sys, what):
    if not sys.partition.binary:
        raise ValueError(f"{what} criterion defined for binary partitions")


def check_Lp(sys, p: float) -> ConditionReport:
    """Contraction on ``L^p`` from the Lipschitz constants ``a_i`` and ``||S_i||``.

    ``p < 1``: ``sum a_i ||S_i||^p``; ``1 <= p < inf``: the ``1/p``-th power
    of that sum; ``p = inf``: ``max ||S_i||``.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    a = sys.partition.a
    norms = sys.scale_bounds
    per = [(f"piece {i + 1}", float(v)) for i, v in enumerate(norms)]
    if math.isinf(p):
        return ConditionReport("Lp", {"p": "inf"}, float(norms.max()), per, "p=inf: max ||S_i||")
    total = math.fsum(a * norms ** p)
    if p < 1:
        return ConditionReport("Lp", {"p": p}, total, per, "0<p<1: sum a_i ||S_i||^p")
    return ConditionReport("Lp", {"p": p}, total ** (1.0 / p), per, "1<=p<inf: (sum a_i ||S_i||^p)^(1/p)")


def check_holder(sys, s_exp: float) -> ConditionReport:
    """``2**s * max ||S_i||`` on a binary partition."""
    _require_binary(sys, "Hölder")
    if not 0 < s_exp < 1:
        raise ValueError("Hölder exponent must lie in (0, 1)")
    norms = sys.scale_bounds
    per = [(f"piece {i + 1}", float(v)) for i, v in enumerate(norms)]
    return ConditionReport("holder", {"s": s_exp}, 2.0 ** s_exp * float(norms.max()), per)


def check_Cn(sys, n: int) -> ConditionReport:
    """``2**n max_i max_k sum_{l<=k} binom(n-k+l, l) ||D^l S_i||``."""
    _require_binary(sys, "C^n")
    if n < 0:
        raise ValueError("n must be nonnegative")
    per = []
    worst = 0.0
    for i, S in enumerate(sys.scale):
        if not S.is_continuous(n):
            raise ValueError(f"scale_{i + 1} is not {n} times continuously differentiable")
        d = [sup_norm_bracket(S.derivative(l))[1] if l else sys.scale_bounds[i] for l in range(n + 1)]
        inner = max(math.fsum(math.comb(n - k + l, l) * d[l] for l in range(k + 1)) for k in range(n + 1))
        per.append((f"piece {i + 1}", float(inner)))
        worst = max(worst, inner)
    return ConditionReport("Cn", {"n": n}, 2.0 ** n * worst, per)


def check_sobolev(partition, s_values, m: int, p: float) -> ConditionReport:
    """Contraction on ``W^{m,p}`` for constant scalings.

    ``1 <= p < inf``: ``(max_k sum_i |s_i|^p a_i^(1 - k p))^(1/p)``;
    ``p = inf``: ``max_k sum_i |s_i| / a_i^k``, with ``k = 0..m``.
    The ``a_i`` may exceed one.
    """
    if not p >= 1:
        raise ValueError(f"Sobolev criterion needs p >= 1, got {p}")
    s = np.abs(np.asarray(s_values, dtype=float).ravel())
    if s.size != partition.N:
        raise ValueError(f"need {partition.N} scaling values")
    a = partition.a
    per = []
    for k in range(m + 1):
        if math.isinf(p):
            term = math.fsum(s / a ** k)
        else:
            term = math.fsum(s ** p * a ** (1 - k * p))
        per.append((f"k={k}", term))
    worst = max(v for _, v in per)
    lhs = worst if math.isinf(p) else worst ** (1.0 / p)
    return ConditionReport("sobolev", {"m": m, "p": "inf" if math.isinf(p) else p}, lhs, per)


def _finite_derivative(values, h, k):
    d = values
    for _ in range(k):
        d = np.gradient(d, h)
    return d


def _lp(values, x, p):
    if math.isinf(p):
        return float(np.max(np.abs(values)))
    return float(np.trapezoid(np.abs(values) ** p, x)) ** (1.0 / p)


def estimate_norm(f, space: str, **params) -> float:
    """Empirical norm of a sampled function.

    ``space`` is one of ``"Lp"`` (``p``), ``"sup"``, ``"holder"`` (``s``),
    ``"Cn"`` (``n``) or ``"sobolev"`` (``m``, ``p``).  Integrals use the
    composite trapezoid rule and derivatives repeated central differences.
    """
    x, v, h = f.x, f.values, f.h
    if space == "sup":
        return float(np.max(np.abs(v)))
    if space == "Lp":
        return _lp(v, x, params.get("p", 2.0))
    if space == "holder":
        return holder_quotient_max(v, h, params["s"])
    if space == "Cn":
        return math.fsum(float(np.max(np.abs(_finite_derivative(v, h, k)))) for k in range(params["n"] + 1))
    if space == "sobolev":
        m, p = params["m"], params.get("p", 2.0)
        norms = [_lp(_finite_derivative(v, h, k), x, p) for k in range(m + 1)]
        if math.isinf(p):
            return max(norms)
        return math.fsum(t ** p for t in norms) ** (1.0 / p)
    raise ValueError(f"unknown norm tag {space!r}")


def lambda_holder_bound(lam, s_exp: float, n: int = 1024) -> float:
    """Upper bound of ``|lam|`` in ``C^s`` on its domain.

    For a continuous piecewise polynomial, ``Lip * width**(1 - s)`` is a
    certified bound; the sampled estimate is taken if it is larger.
    """
    if not lam.is_continuous(0):
        return math.inf
    analytic = lam.lipschitz_bound() * lam.domain.length ** (1.0 - s_exp)
    return max(analytic, holder_seminorm_estimate(lam, s_exp, n))


def knot_jumps(sys, depth: int = 200) -> np.ndarray:
    """Jumps of the fixed point across the interior knots.

    Both one-sided values at knot ``x`` come from the self-referential
    equation on the adjacent pieces, ``lam_i(t) + S_i(t) f(t)`` with
    ``t = u_i^{-1}(x)``, where ``f(t)`` is unrolled ``depth`` levels.
    """
    from .rb import eval_recursive

    part = sys.partition
    jumps = []
    for k in range(1, part.N):
        x = np.array([part.knots[k]])
        sides = []
        for i in (k - 1, k):
            t = part.preimage(i, x)
            sides.append(float(sys.lam[i](t)[0] + sys.scale[i](t)[0] * eval_recursive(sys, t, depth)[0][0]))
        jumps.append(abs(sides[1] - sides[0]))
    return np.array(jumps)


def holder_bound(sys, s_exp: float) -> float:
    """Bound ``2**s sum |lam_i| / (1 - 2**s max ||S_i||)`` on the fixed point's seminorm.

    Raises ``ValueError`` when the condition fails or when the fixed point
    jumps at a knot (its seminorm is then infinite).
    """
    report = check_holder(sys, s_exp)
    if not report.passed:
        raise ValueError(f"bound diverges (2^s max ||S_i|| = {report.lhs:.6g} >= 1)")
    depth = 200
    tol = 1e-9 + 2 * sys.s**depth * sys.lambda_sup / (1 - sys.s)
    jumps = knot_jumps(sys, depth)
    if jumps.size and jumps.max() > tol:
        raise ValueError(f"fixed point is discontinuous (jump {jumps.max():.3g} at a knot)")
    total = math.fsum(lambda_holder_bound(lam, s_exp) for lam in sys.lam)
    return 2.0 ** s_exp * total / (1.0 - report.lhs)
