"""Region constructors and their conversion to half-space form.

Planar regions (rectangles, polygons, surface patches) are kept as a 2-D HSI in
plane coordinates plus the frame that lifts them into the world. The
out-of-plane coordinate is therefore exact rather than sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyRegion
from ..geom import AABB, as_vec3, normalize
from .hsi import CONTAINS_TOL, HSI, contains, intersect

PLANE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PlaneFrame:
    origin: np.ndarray
    normal: np.ndarray
    tangent_u: np.ndarray
    tangent_v: np.ndarray

    def __post_init__(self):
        for name in ("origin", "normal", "tangent_u", "tangent_v"):
            object.__setattr__(self, name, as_vec3(getattr(self, name)))
        basis = np.column_stack([self.tangent_u, self.tangent_v, self.normal])
        if not np.allclose(basis.T @ basis, np.eye(3), atol=1e-9) or np.linalg.det(basis) < 0:
            raise ValueError("plane frame axes must be orthonormal and right-handed")

    @classmethod
    def from_normal(cls, origin, normal) -> "PlaneFrame":
        n = normalize(normal)
        helper = np.array([0.0, 1.0, 0.0])
        if np.linalg.norm(np.cross(helper, n)) < 1e-6:
            helper = np.array([0.0, 0.0, 1.0])
        u = normalize(np.cross(helper, n))
        v = np.cross(n, u)
        return cls(origin, n, u, v)

    @classmethod
    def from_rotation(cls, origin, rotation) -> "PlaneFrame":
        """Plane spanned by a rotation's right and forward axes."""
        r = np.asarray(rotation, dtype=float)
        return cls(origin, r[:, 2], r[:, 0], r[:, 1])

    @property
    def basis(self) -> np.ndarray:
        """3x2 matrix mapping plane coordinates to world offsets."""
        return np.column_stack([self.tangent_u, self.tangent_v])

    def lift(self, uv) -> np.ndarray:
        uv = np.asarray(uv, dtype=float)
        return self.origin + uv @ self.basis.T

    def project(self, p) -> np.ndarray:
        return (np.asarray(p, dtype=float) - self.origin) @ self.basis

    def height(self, p) -> float:
        return float(np.dot(np.asarray(p, dtype=float) - self.origin, self.normal))

    def coplanar(self, other: "PlaneFrame", tol: float = PLANE_TOL) -> bool:
        if np.linalg.norm(np.cross(self.normal, other.normal)) > tol:
            return False
        return abs(self.height(other.origin)) <= tol

    def restrict(self, h3: HSI) -> tuple[np.ndarray, np.ndarray]:
        """Rows of a 3-D HSI expressed in this plane's coordinates.

        Returns raw ``(A, b)``; rows whose normal is perpendicular to the plane
        come back as zero rows and must be handled by the caller.
        """
        A = h3.A @ self.basis
        b = h3.b - h3.A @ self.origin
        return A, b


@dataclass(frozen=True, eq=False)
class EmbeddedHSI:
    hsi: HSI
    frame: PlaneFrame

    def __post_init__(self):
        if self.hsi.dim != 2:
            raise ValueError("embedded region must be two-dimensional")

    def lift(self, uv) -> np.ndarray:
        return self.frame.lift(uv)

    def contains(self, p, tol: float = CONTAINS_TOL) -> bool:
        if abs(self.frame.height(p)) > tol:
            return False
        return contains(self.hsi, self.frame.project(p), tol)


# -- region constructors -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cuboid:
    origin: np.ndarray
    orientation: np.ndarray
    dims: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec3(self.origin))
        object.__setattr__(self, "orientation", np.asarray(self.orientation, float).reshape(3, 3))
        dims = as_vec3(self.dims)
        if np.any(dims <= 0):
            raise ValueError("cuboid dimensions must be positive")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True, eq=False)
class Rect3D:
    """Rectangle in the plane of ``orientation``'s right/forward axes; ``dims`` is (w, l)."""

    origin: np.ndarray
    orientation: np.ndarray
    dims: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec3(self.origin))
        object.__setattr__(self, "orientation", np.asarray(self.orientation, float).reshape(3, 3))
        dims = np.asarray(self.dims, dtype=float).reshape(-1)[:2]
        if dims.shape != (2,) or np.any(dims <= 0):
            raise ValueError("rectangle dimensions must be two positive numbers")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Points on the side of the plane that ``normal`` points to."""

    origin: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec3(self.origin))
        object.__setattr__(self, "normal", normalize(as_vec3(self.normal)))


@dataclass(frozen=True, eq=False)
class ConvexPolygon3D:
    hsi: HSI
    origin: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        if self.hsi.dim != 2:
            raise ValueError("polygon HSI must be two-dimensional")
        object.__setattr__(self, "origin", as_vec3(self.origin))
        object.__setattr__(self, "normal", normalize(as_vec3(self.normal)))


@dataclass(frozen=True, eq=False)
class ConvexPolyhedron:
    hsi: HSI

    def __post_init__(self):
        if self.hsi.dim != 3:
            raise ValueError("polyhedron HSI must be three-dimensional")


@dataclass(frozen=True)
class All:
    pass


@dataclass(frozen=True)
class Empty:
    pass


Region = Cuboid | Rect3D | Halfspace | ConvexPolygon3D | ConvexPolyhedron | All | Empty


def workspace_hsi(workspace: AABB) -> HSI:
    return HSI.box(workspace.min, workspace.max)


def oriented_box_hsi(center, rotation, half_extents) -> HSI:
    r = np.asarray(rotation, dtype=float)
    c = as_vec3(center)
    h = np.asarray(half_extents, dtype=float)
    axes = r.T
    A = np.vstack([axes, -axes])
    b = np.concatenate([axes @ c + h, -(axes @ c) + h])
    return HSI(A, b)


def halfspace_hsi(origin, normal) -> HSI:
    n = normalize(normal)
    return HSI(-n[None, :], [-float(n @ as_vec3(origin))])


def region_to_hsi(r, workspace: AABB) -> HSI | EmbeddedHSI:
    """Bounded half-space form of a region constructor."""
    match r:
        case Empty():
            raise EmptyRegion("Empty() region has no points")
        case Cuboid(origin=o, orientation=rot, dims=dims):
            return oriented_box_hsi(o, rot, dims / 2)
        case ConvexPolyhedron(hsi=h):
            return h
        case Rect3D(origin=o, orientation=rot, dims=dims):
            half = dims / 2
            return EmbeddedHSI(HSI.box(-half, half), PlaneFrame.from_rotation(o, rot))
        case ConvexPolygon3D(hsi=h, origin=o, normal=n):
            return EmbeddedHSI(h, PlaneFrame.from_normal(o, n))
        case Halfspace(origin=o, normal=n):
            return intersect(halfspace_hsi(o, n), workspace_hsi(workspace))
        case All():
            return workspace_hsi(workspace)
    raise TypeError(f"not a region: {r!r}")
