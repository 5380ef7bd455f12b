"""Intervals, affine maps, pixel sets and the Hausdorff metric.

Compact planar sets are represented at a fixed resolution ``h`` by a
:class:`GridSet`: a boolean mask over the cells of a rectangle.  A cell
belongs to a set through its center point, so every operation here works
on cell centers and re-rasterizes its output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import directed_hausdorff as _directed_points

__all__ = [
    "Interval",
    "AffineMap1D",
    "AffineMap2D",
    "Rect",
    "GridSet",
    "EmptySetError",
    "hausdorff_distance",
    "directed_hausdorff",
    "hausdorff_points",
    "map_grid_set",
    "intersect_grid_set",
]


class EmptySetError(ValueError):
    """Raised when a metric quantity is requested for an empty set."""


@dataclass(frozen=True)
class Interval:
    """Real interval with explicit endpoint closure."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        left = x >= self.lo if self.lo_closed else x > self.lo
        right = x <= self.hi if self.hi_closed else x < self.hi
        return left & right

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi)

    def isclose(self, other: "Interval", tol: float = 1e-12) -> bool:
        scale = max(1.0, abs(self.lo), abs(self.hi))
        return abs(self.lo - other.lo) <= tol * scale and abs(self.hi - other.hi) <= tol * scale


@dataclass(frozen=True)
class AffineMap1D:
    """``x -> slope * x + intercept`` with nonzero slope."""

    slope: float
    intercept: float

    def __post_init__(self):
        if self.slope == 0 or not math.isfinite(self.slope):
            raise ValueError("affine map needs a finite nonzero slope")

    def __call__(self, x):
        if np.ndim(x):
            x = np.asarray(x, dtype=float)
        return self.slope * x + self.intercept

    def inverse(self) -> "AffineMap1D":
        return AffineMap1D(1.0 / self.slope, -self.intercept / self.slope)

    def inv(self, x):
        """Evaluate the inverse map without building it (no extra rounding)."""
        return (np.asarray(x, dtype=float) - self.intercept) / self.slope

    @property
    def lipschitz(self) -> float:
        return abs(self.slope)

    @classmethod
    def onto(cls, src: Interval, dst: Interval) -> "AffineMap1D":
        """Increasing affine bijection taking ``src`` onto ``dst``."""
        slope = dst.length / src.length
        return cls(slope, dst.lo - slope * src.lo)

    def image(self, iv: Interval) -> Interval:
        a, b = self(iv.lo), self(iv.hi)
        return Interval(min(a, b), max(a, b))


class AffineMap2D:
    """Planar affine map ``p -> linear @ p + translation``.

    The contractivity factor is the spectral norm of the linear part; it
    is reported, never assumed.
    """

    def __init__(self, linear, translation=(0.0, 0.0)):
        self.linear = np.array(linear, dtype=float).reshape(2, 2)
        self.translation = np.array(translation, dtype=float).reshape(2)
        if not (np.all(np.isfinite(self.linear)) and np.all(np.isfinite(self.translation))):
            raise ValueError("affine map entries must be finite")

    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def __repr__(self):
        return f"AffineMap2D(linear={self.linear.tolist()}, translation={self.translation.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, AffineMap2D):
            return NotImplemented
        return np.array_equal(self.linear, other.linear) and np.array_equal(
            self.translation, other.translation
        )

    @property
    def contraction(self) -> float:
        return float(np.linalg.norm(self.linear, 2))

    def fixed_point(self):
        return np.linalg.solve(np.eye(2) - self.linear, self.translation)

    def compose(self, inner: "AffineMap2D") -> "AffineMap2D":
        """``self ∘ inner``."""
        return AffineMap2D(self.linear @ inner.linear, self.linear @ inner.translation + self.translation)

    @classmethod
    def identity(cls) -> "AffineMap2D":
        return cls(np.eye(2))

    @classmethod
    def scaling(cls, factor: float, center=(0.0, 0.0)) -> "AffineMap2D":
        """Homothety with ratio ``factor`` fixing ``center``."""
        c = np.asarray(center, dtype=float)
        return cls(factor * np.eye(2), (1.0 - factor) * c)


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle ``[x0, x1] x [y0, y1]``."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError(f"degenerate rectangle {self}")

    def contains(self, points):
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        return (p[:, 0] >= self.x0) & (p[:, 0] <= self.x1) & (p[:, 1] >= self.y0) & (p[:, 1] <= self.y1)

    def contains_rect(self, other: "Rect") -> bool:
        return self.x0 <= other.x0 and other.x1 <= self.x1 and self.y0 <= other.y0 and other.y1 <= self.y1

    @property
    def diameter(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    @property
    def center(self):
        return np.array([0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)])

    def corners(self):
        return np.array([[self.x0, self.y0], [self.x1, self.y0], [self.x1, self.y1], [self.x0, self.y1]])


class GridSet:
    """Finite set of pixels of side ``h`` inside a rectangle.

    Parameters
    ----------
    bounds : Rect
        The ambient rectangle; its sides must be integer multiples of ``h``.
    h : float
        Cell side length.
    mask : ndarray of bool, optional
        Shape ``(nx, ny)``; ``mask[i, j]`` marks the cell with center
        ``(x0 + (i + 1/2) h, y0 + (j + 1/2) h)``.  Defaults to empty.
    """

    __slots__ = ("bounds", "h", "mask")

    def __init__(self, bounds: Rect, h: float, mask=None):
        if not h > 0:
            raise ValueError("resolution must be positive")
        nx = _cell_count(bounds.x1 - bounds.x0, h)
        ny = _cell_count(bounds.y1 - bounds.y0, h)
        self.bounds = bounds
        self.h = float(h)
        if mask is None:
            mask = np.zeros((nx, ny), dtype=bool)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (nx, ny):
            raise ValueError(f"mask shape {mask.shape} does not match grid {(nx, ny)}")
        self.mask = mask

    # construction -----------------------------------------------------
    @classmethod
    def full(cls, bounds: Rect, h: float) -> "GridSet":
        g = cls(bounds, h)
        g.mask[:] = True
        return g

    @classmethod
    def from_points(cls, points, bounds: Rect, h: float) -> "GridSet":
        """Rasterize points; points outside ``bounds`` are clipped away."""
        g = cls(bounds, h)
        g.mask[tuple(g.cell_of(points).T)] = True
        return g

    def like(self, mask=None) -> "GridSet":
        return GridSet(self.bounds, self.h, mask)

    # queries ----------------------------------------------------------
    @property
    def shape(self):
        return self.mask.shape

    @property
    def is_empty(self) -> bool:
        return not self.mask.any()

    def __len__(self):
        return int(self.mask.sum())

    @property
    def cells(self):
        """Integer cell coordinates, shape ``(n, 2)``, lexicographic order."""
        return np.argwhere(self.mask)

    @property
    def centers(self):
        c = self.cells.astype(float)
        return np.column_stack(
            [self.bounds.x0 + (c[:, 0] + 0.5) * self.h, self.bounds.y0 + (c[:, 1] + 0.5) * self.h]
        )

    def cell_of(self, points):
        """Cell indices of the in-bounds points, shape ``(m, 2)``.

        The upper edges of ``bounds`` belong to the last row/column.
        """
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        p = p[self.bounds.contains(p)]
        nx, ny = self.mask.shape
        ix = np.minimum(np.floor((p[:, 0] - self.bounds.x0) / self.h).astype(np.int64), nx - 1)
        iy = np.minimum(np.floor((p[:, 1] - self.bounds.y0) / self.h).astype(np.int64), ny - 1)
        return np.column_stack([np.maximum(ix, 0), np.maximum(iy, 0)])

    def compatible(self, other: "GridSet") -> bool:
        return self.bounds == other.bounds and self.h == other.h

    def _check(self, other: "GridSet"):
        if not self.compatible(other):
            raise ValueError("grid sets differ in bounds or resolution")

    def __eq__(self, other):
        if not isinstance(other, GridSet):
            return NotImplemented
        return self.compatible(other) and np.array_equal(self.mask, other.mask)

    def __or__(self, other: "GridSet") -> "GridSet":
        self._check(other)
        return self.like(self.mask | other.mask)

    def __and__(self, other: "GridSet") -> "GridSet":
        self._check(other)
        return self.like(self.mask & other.mask)

    def issubset(self, other: "GridSet") -> bool:
        self._check(other)
        return not np.any(self.mask & ~other.mask)

    __le__ = issubset

    def diameter(self) -> float:
        """Largest distance between two cell centers (0 for < 2 cells)."""
        c = self.centers
        if len(c) < 2:
            return 0.0
        try:
            c = c[ConvexHull(c).vertices]
        except QhullError:  # collinear sets: fall back to all points
            pass
        d = c[:, None, :] - c[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    def __repr__(self):
        return f"GridSet(bounds={self.bounds}, h={self.h}, cells={len(self)})"


def _cell_count(length: float, h: float) -> int:
    n = int(round(length / h))
    if n < 1 or abs(n * h - length) > 1e-9 * max(length, h):
        raise ValueError(f"rectangle side {length} is not a multiple of h={h}")
    return n


def directed_hausdorff(A: GridSet, B: GridSet) -> float:
    """``max_{a in A} min_{b in B} |a - b|`` over cell centers.

    Uses the exact Euclidean distance transform of ``B``'s complement, so
    the cost is linear in the number of grid cells.
    """
    A._check(B)
    if B.is_empty:
        raise EmptySetError("hausdorff undefined on empty set")
    if A.is_empty:
        return 0.0
    dist = ndimage.distance_transform_edt(~B.mask)
    return float(dist[A.mask].max() * A.h)


def hausdorff_distance(A: GridSet, B: GridSet) -> float:
    """Hausdorff distance between two nonempty grid sets."""
    A._check(B)
    if A.is_empty or B.is_empty:
        raise EmptySetError("hausdorff undefined on empty set")
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def hausdorff_points(P, Q) -> float:
    """Hausdorff distance between two finite point clouds in the plane."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    if len(P) == 0 or len(Q) == 0:
        raise EmptySetError("hausdorff undefined on empty set")
    return max(_directed_points(P, Q)[0], _directed_points(Q, P)[0])


def map_grid_set(m: Callable, S: GridSet) -> GridSet:
    """Image of ``S`` under ``m``: the cells hit by the mapped centers."""
    if S.is_empty:
        return S.like()
    return GridSet.from_points(m(S.centers), S.bounds, S.h)


def intersect_grid_set(S: GridSet, R: Rect) -> GridSet:
    """Cells of ``S`` whose centers lie in the closed rectangle ``R``."""
    out = S.like()
    if S.is_empty:
        return out
    cells = S.cells
    keep = R.contains(S.centers)
    out.mask[tuple(cells[keep].T)] = True
    return out


def union_all(sets: Iterable[GridSet], like: GridSet) -> GridSet:
    mask = np.zeros_like(like.mask)
    for s in sets:
        like._check(s)
        mask |= s.mask
    return like.like(mask)
