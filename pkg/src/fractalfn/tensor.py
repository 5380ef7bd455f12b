"""Tensor products of RB operators and the resulting fractal surfaces."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rb import NotContractiveError, RBSystem, SampledFunction, apply_rb

__all__ = ["TensorSurface", "tensor_apply", "tensor_fixed_point", "cross_ratio_defect"]


@dataclass(eq=False)
class TensorSurface:
    """Values ``values[i, j]`` of ``f(x_i) * g(y_j)`` on a product grid."""

    grid_x: np.ndarray
    grid_y: np.ndarray
    values: np.ndarray
    factors: tuple = ()
    residuals: list = field(default_factory=list)

    def __post_init__(self):
        if self.values.shape != (len(self.grid_x), len(self.grid_y)):
            raise ValueError("values must have shape (len(grid_x), len(grid_y))")

    @classmethod
    def outer(cls, f: SampledFunction, g: SampledFunction, residuals=()) -> "TensorSurface":
        return cls(f.x, g.x, np.outer(f.values, g.values), (f, g), list(residuals))


def tensor_apply(sysA: RBSystem, sysB: RBSystem, f: SampledFunction, g: SampledFunction) -> TensorSurface:
    """``(Phi f) ⊗ (Phi' g)`` as a matrix."""
    return TensorSurface.outer(apply_rb(sysA, f), apply_rb(sysB, g))


def tensor_fixed_point(
    sysA: RBSystem,
    sysB: RBSystem,
    tol: float = 1e-10,
    M: int | None = None,
    max_iter: int = 200,
) -> TensorSurface:
    """Fixed point of the product operator, iterated on factor pairs.

    The distance between successive pairs is the sum of the two factor
    sup-distances; it contracts by at most ``max(s_A, s_B)`` per step.
    The surface's ``residuals`` record that distance per iteration.
    """
    for name, sys in (("first", sysA), ("second", sysB)):
        if sys.s >= 1:
            raise NotContractiveError(f"{name} operator not sup-norm contractive (s <= {sys.s:.6g})")
    f, g = sysA.initial_iterate(M), sysB.initial_iterate(M)
    residuals = []
    for _ in range(max_iter):
        f1, g1 = apply_rb(sysA, f), apply_rb(sysB, g)
        d = f1.sup_distance(f) + g1.sup_distance(g)
        residuals.append(d)
        f, g = f1, g1
        if d <= tol:
            return TensorSurface.outer(f, g, residuals)
    raise RuntimeError(f"tensor iteration did not reach tol={tol:g} in {max_iter} steps")


def cross_ratio_defect(values) -> float:
    """``max |v[i,j] v[k,l] - v[i,l] v[k,j]|`` over all index quadruples.

    Zero exactly when the matrix has rank at most one.
    """
    v = np.asarray(values, dtype=float)
    worst = 0.0
    for i in range(v.shape[0] - 1):
        # rows i and k > i: P[k, j, l] = v[i, j] v[k, l]
        P = v[i][None, :, None] * v[i + 1 :][:, None, :]
        worst = max(worst, float(np.max(np.abs(P - P.transpose(0, 2, 1)))))
    return worst
