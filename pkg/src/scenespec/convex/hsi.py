"""Half-space intersections ``{x | A x <= b}`` and operations on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import (
    DimensionMismatch,
    EmptyRegion,
    UnboundedDirection,
    UnboundedObject,
    UnboundedRegion,
)
from .lp import LPStatus, linprog

CONTAINS_TOL = 1e-9
MIN_ROW_NORM = 1e-12


@dataclass(frozen=True, eq=False)
class HSI:
    """Convex set given by stacked linear inequalities, rows kept unit-norm."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.array(self.A, dtype=float))
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms <= MIN_ROW_NORM):
            raise ValueError("half-space rows must have non-zero normals")
        A = A / norms[:, None]
        b = b / norms
        A.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def rows(self) -> int:
        return self.A.shape[0]

    def contains(self, x, tol: float = CONTAINS_TOL) -> bool:
        return contains(self, x, tol)

    def is_empty(self) -> bool:
        try:
            chebyshev_center(self)
        except EmptyRegion:
            return True
        return False

    @classmethod
    def box(cls, lo, hi) -> "HSI":
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        eye = np.eye(len(lo))
        return cls(np.vstack([eye, -eye]), np.concatenate([hi, -lo]))


def contains(h: HSI, x, tol: float = CONTAINS_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != h.dim:
        raise DimensionMismatch(f"point has dimension {x.shape[-1]}, region {h.dim}")
    return bool(np.all(h.A @ x <= h.b + tol))


def contains_many(h: HSI, pts, tol: float = CONTAINS_TOL) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    return np.all(pts @ h.A.T <= h.b + tol, axis=1)


def intersect(p: HSI, q: HSI) -> HSI:
    if p.dim != q.dim:
        raise DimensionMismatch(f"cannot intersect {p.dim}-d and {q.dim}-d regions")
    # rows are already unit length; stacking them untouched keeps membership
    # bit-identical to testing p and q separately
    out = object.__new__(HSI)
    A, b = np.vstack([p.A, q.A]), np.concatenate([p.b, q.b])
    A.flags.writeable = False
    b.flags.writeable = False
    object.__setattr__(out, "A", A)
    object.__setattr__(out, "b", b)
    return out


def lp_solve(c, h: HSI, maximize: bool = False):
    return linprog(c, h.A, h.b, maximize=maximize)


def erode(region: HSI, object_offsets: HSI) -> HSI:
    """Translations ``z`` keeping every ``z + y`` (``y`` in the object) inside ``region``.

    Each row's offset ``b_i`` shrinks by the support of the object along that
    row's normal, found with one LP per row.
    """
    if region.dim != object_offsets.dim:
        raise DimensionMismatch("region and object dimensions differ")
    shrink = np.empty(region.rows)
    for i, a in enumerate(region.A):
        res = lp_solve(a, object_offsets, maximize=True)
        if res.status is LPStatus.UNBOUNDED:
            raise UnboundedObject(f"object is unbounded along row {i}")
        if res.status is LPStatus.INFEASIBLE:
            raise EmptyRegion("object offset set is empty")
        shrink[i] = res.value
    return HSI(region.A, region.b - shrink)


def chebyshev_center(h: HSI) -> tuple[np.ndarray, float]:
    """Centre and radius of the largest ball inside ``h``."""
    d = h.dim
    A = np.hstack([h.A, np.ones((h.rows, 1))])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    res = linprog(c, A, h.b, maximize=True)
    if res.status is LPStatus.UNBOUNDED:
        raise UnboundedRegion("region is unbounded")
    if res.status is LPStatus.INFEASIBLE or res.value <= 1e-12:
        raise EmptyRegion("region has empty interior")
    x = res.x[:d]
    # the LP vertex can sit a hair off; report the radius actually achieved
    radius = float(np.min(h.b - h.A @ x))
    if radius <= 1e-12:
        raise EmptyRegion("region has empty interior")
    return x, radius


def clip_line(h: HSI, p, direction) -> tuple[float, float]:
    """Distances ``(m_a, m_b)`` from ``p`` to the boundary along ``-dir`` and ``+dir``."""
    p = np.asarray(p, dtype=float)
    direction = np.asarray(direction, dtype=float)
    slack = np.maximum(h.b - h.A @ p, 0.0)
    ad = h.A @ direction
    fwd = ad > 1e-12
    back = ad < -1e-12
    if not fwd.any() or not back.any():
        raise UnboundedDirection("line through point is not bounded by the region")
    m_b = float(np.min(slack[fwd] / ad[fwd]))
    m_a = float(np.min(slack[back] / -ad[back]))
    return m_a, m_b
