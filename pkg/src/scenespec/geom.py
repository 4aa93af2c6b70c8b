"""Geometric primitives: vectors, rotations, boxes, anchors and OBB collision.

Conventions: world frame is z-up, y-forward, x-right. A rotation matrix holds
the object's right, forward and up axes as its columns. Object dimensions map
width -> x, length -> y, height -> z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation as _ScipyRotation

from .errors import ConflictingTags, ZeroVector

FACE_TAGS = ("top", "bottom", "front", "back", "left", "right")

# tag -> (axis index, sign)
_TAG_AXIS = {
    "right": (0, 1.0),
    "left": (0, -1.0),
    "front": (1, 1.0),
    "back": (1, -1.0),
    "top": (2, 1.0),
    "bottom": (2, -1.0),
}

IDENTITY = np.eye(3)
UP = np.array([0.0, 0.0, 1.0])
PARALLEL_TOL = 1e-6


def vec3(x=0.0, y=0.0, z=0.0) -> np.ndarray:
    return np.array([x, y, z], dtype=float)


def as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(3)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite vector {a}")
    return a


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n <= 1e-12:
        raise ZeroVector(f"cannot normalize zero-length vector {v.tolist()}")
    return v / n


def _parallel(a: np.ndarray, b: np.ndarray) -> bool:
    return np.linalg.norm(np.cross(a, b)) <= PARALLEL_TOL * np.linalg.norm(b)


def rotation_from_forward(forward, up_hint=UP) -> np.ndarray:
    """Rotation whose forward (second) column points along ``forward``.

    The up column is ``up_hint`` made orthogonal to ``forward``. When the two
    are parallel the hint falls back to +y, then to +x.
    """
    f = normalize(np.asarray(forward, dtype=float))
    up = np.asarray(up_hint, dtype=float)
    for candidate in (up, np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])):
        if np.linalg.norm(candidate) > 1e-12 and not _parallel(f, candidate):
            up = candidate
            break
    u = up - np.dot(up, f) * f
    u = u / np.linalg.norm(u)
    r = np.cross(f, u)
    r = r / np.linalg.norm(r)
    return np.column_stack([r, f, u])


def is_rotation(m, tol: float = 1e-9) -> bool:
    m = np.asarray(m, dtype=float)
    return (
        m.shape == (3, 3)
        and np.allclose(m.T @ m, np.eye(3), atol=tol)
        and abs(np.linalg.det(m) - 1.0) <= tol
    )


def rotation_to_quaternion(m) -> tuple[float, float, float, float]:
    """Unit quaternion ``(w, x, y, z)`` with ``w >= 0``."""
    x, y, z, w = _ScipyRotation.from_matrix(np.asarray(m, dtype=float)).as_quat()
    q = np.array([w, x, y, z])
    if q[0] < 0 or (q[0] == 0 and next((c for c in q if c != 0), 0) < 0):
        q = -q
    q = q / np.linalg.norm(q)
    return tuple(float(c) for c in q)


def quaternion_to_rotation(q) -> np.ndarray:
    w, x, y, z = q
    return _ScipyRotation.from_quat([x, y, z, w]).as_matrix()


@dataclass(frozen=True)
class AABB:
    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo, hi = as_vec3(self.min), as_vec3(self.max)
        if np.any(lo > hi):
            raise ValueError(f"AABB min {lo} exceeds max {hi}")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    @classmethod
    def cube(cls, half: float) -> "AABB":
        return cls(vec3(-half, -half, -half), vec3(half, half, half))

    @property
    def center(self) -> np.ndarray:
        return (self.min + self.max) / 2

    @property
    def half_extents(self) -> np.ndarray:
        return (self.max - self.min) / 2

    def contains(self, p, tol: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.min - tol) and np.all(p <= self.max + tol))

    def __eq__(self, other):
        return (
            isinstance(other, AABB)
            and np.array_equal(self.min, other.min)
            and np.array_equal(self.max, other.max)
        )

    def __hash__(self):
        return hash((tuple(self.min), tuple(self.max)))


@dataclass(frozen=True, eq=False)
class OBB:
    center: np.ndarray
    rotation: np.ndarray
    half_extents: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3(self.center))
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=float).reshape(3, 3))
        h = as_vec3(self.half_extents)
        if np.any(h <= 0):
            raise ValueError(f"OBB half extents must be positive, got {h}")
        object.__setattr__(self, "half_extents", h)

    @classmethod
    def from_dims(cls, center, rotation, dims) -> "OBB":
        return cls(center, rotation, as_vec3(dims) / 2)

    def corners(self) -> np.ndarray:
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], float)
        return self.center + (signs * self.half_extents) @ self.rotation.T

    def axis(self, i: int) -> np.ndarray:
        return self.rotation[:, i]

    def extent_along(self, direction) -> float:
        """Half-width of the box's projection onto a unit ``direction``."""
        d = np.asarray(direction, dtype=float)
        return float(np.sum(np.abs(self.rotation.T @ d) * self.half_extents))

    def contains(self, p, tol: float = 0.0) -> bool:
        local = self.rotation.T @ (np.asarray(p, dtype=float) - self.center)
        return bool(np.all(np.abs(local) <= self.half_extents + tol))


def anchor_point(box: OBB, tags) -> np.ndarray:
    """Point on ``box`` selected by face tags, e.g. ``{"top", "back"}``."""
    signs = np.zeros(3)
    seen: dict[int, str] = {}
    for tag in tags:
        if tag not in _TAG_AXIS:
            raise ValueError(f"unknown anchor tag {tag!r}")
        axis, sign = _TAG_AXIS[tag]
        if axis in seen and seen[axis] != tag:
            raise ConflictingTags(f"anchor tags {seen[axis]!r} and {tag!r} are opposite")
        seen[axis] = tag
        signs[axis] = sign
    return box.center + box.rotation @ (signs * box.half_extents)


def tag_direction(box: OBB, tag: str) -> np.ndarray:
    axis, sign = _TAG_AXIS[tag]
    return sign * box.rotation[:, axis]


def obb_overlap(a: OBB, b: OBB, eps: float = 1e-9) -> bool:
    """Separating-axis test on the 15 candidate axes.

    Both boxes are shrunk by ``eps`` on every half extent first, so boxes in
    exact face contact do not count as overlapping.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    ha = np.maximum(a.half_extents - eps, 0.0)
    hb = np.maximum(b.half_extents - eps, 0.0)
    ra_axes = a.rotation.T
    rb_axes = b.rotation.T
    t = b.center - a.center

    axes = [*ra_axes, *rb_axes]
    for u in ra_axes:
        for v in rb_axes:
            c = np.cross(u, v)
            n = np.linalg.norm(c)
            if n > 1e-12:
                axes.append(c / n)
    for axis in axes:
        ra = np.sum(ha * np.abs(ra_axes @ axis))
        rb = np.sum(hb * np.abs(rb_axes @ axis))
        if abs(np.dot(t, axis)) >= ra + rb:
            return False
    return True
