"""Specifier semantics: turning an object's specifier list into distributions.

Positions are resolved per scene, once every object they refer to has been
placed, because regions such as "on the tray" move with the tray. Each
position specifier contributes one of four things:

* a fixed point (``at``, ``beyond``, ``on`` a point),
* a per-component box of ranges (``at V3D((lo, hi), ...)``),
* a planar carrier (``on`` a surface, ``aligned with``, planar regions),
* a solid 3-D half-space intersection (``in``, directional relations).

Points must satisfy everything else. Otherwise all constraints are stacked
into a single HSI, living in the carrier plane when there is one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.spatial import ConvexHull

from .. import convex
from ..convex import HSI, EmbeddedHSI, PlaneFrame
from ..errors import (
    ConstantViolatesConstraint,
    EmptyCombinedRegion,
    EmptyRegion,
    IncompatibleCarriers,
    TypeMismatch,
    ZeroVector,
)
from ..geom import AABB, UP, anchor_point, normalize, rotation_from_forward, tag_direction
from ..lang import ast as A
from ..lang.printer import format_specifier
from .deps import DependencyOrder, build_dependency_order
from .evaluate import ObjectView, Range, RangedVec, as_point, describe, eval_expr

DEFAULT_WORKSPACE = AABB.cube(10.0)
POINT_TOL = 1e-9
ZERO_ROW = 1e-12

DIRECTION_TAGS = {
    "left": "left",
    "right": "right",
    "ahead": "front",
    "behind": "back",
    "above": "top",
    "below": "bottom",
}
_WORLD_DIRECTION = {
    "left": (-1.0, 0.0, 0.0),
    "right": (1.0, 0.0, 0.0),
    "ahead": (0.0, 1.0, 0.0),
    "behind": (0.0, -1.0, 0.0),
    "above": (0.0, 0.0, 1.0),
    "below": (0.0, 0.0, -1.0),
}
_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


# -- distributions -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Constant:
    value: object


@dataclass(frozen=True)
class UniformScalar:
    lo: float
    hi: float


@dataclass(frozen=True, eq=False)
class ComponentUniform:
    lo: np.ndarray
    hi: np.ndarray
    mask: tuple[bool, bool, bool]


@dataclass(frozen=True, eq=False)
class RegionUniform:
    region: HSI | EmbeddedHSI
    center: np.ndarray
    radius: float
    sources: tuple[str, ...] = ()

    @property
    def hsi(self) -> HSI:
        return self.region.hsi if isinstance(self.region, EmbeddedHSI) else self.region

    def lift(self, x) -> np.ndarray:
        return self.region.lift(x) if isinstance(self.region, EmbeddedHSI) else np.asarray(x, float)

    def contains(self, p, tol: float = 1e-9) -> bool:
        return self.region.contains(p, tol)


@dataclass(frozen=True, eq=False)
class Derived:
    fn: Callable[[Mapping[str, ObjectView]], object]
    inputs: tuple[tuple[str, str], ...] = ()


PropertyDist = Constant | UniformScalar | ComponentUniform | RegionUniform | Derived


def dist_from_value(v) -> PropertyDist:
    match v:
        case Range(lo=lo, hi=hi):
            return UniformScalar(lo, hi)
        case RangedVec(lo=lo, hi=hi, mask=mask):
            return ComponentUniform(lo, hi, mask)
    return Constant(v)


# -- contributions -------------------------------------------------------------

@dataclass
class _Parts:
    points: list = field(default_factory=list)
    boxes: list = field(default_factory=list)
    carriers: list = field(default_factory=list)
    solids: list = field(default_factory=list)
    labels: list = field(default_factory=list)


def _label(s) -> str:
    return f"{format_specifier(s)} (line {s.line})" if s.line else format_specifier(s)


def support_offset(own: ObjectView, normal) -> float:
    """Distance from the object's centre to its lowest point along ``normal``."""
    if A.ORIENTATION in own.values:
        return float(np.abs(own.rotation.T @ np.asarray(normal, float)) @ own.dims) / 2
    return float(own.dims[2]) / 2


def footprint(own: ObjectView, frame: PlaneFrame) -> HSI:
    """Object's box projected into ``frame``, as offsets from its centre."""
    dims = own.dims
    if A.ORIENTATION not in own.values:
        # orientation decided later: any yaw fits in the circumscribed square
        r = float(np.hypot(dims[0], dims[1])) / 2
        return HSI.box([-r, -r], [r, r])
    rot = own.rotation
    signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], float)
    corners = (signs * dims / 2) @ rot.T
    uv = corners @ frame.basis
    if np.allclose(np.abs(frame.basis.T @ rot), np.round(np.abs(frame.basis.T @ rot)), atol=1e-12):
        lo, hi = uv.min(axis=0), uv.max(axis=0)
        return HSI.box(lo, hi)
    hull = ConvexHull(uv)
    eq = hull.equations
    return HSI(eq[:, :2], -eq[:, 2])


def surface_carrier(own: ObjectView, frame: PlaneFrame, area: HSI, completely: bool) -> EmbeddedHSI:
    """Positions of ``own`` resting on a planar ``area`` (plane coordinates)."""
    lifted = PlaneFrame(
        frame.origin + frame.normal * support_offset(own, frame.normal),
        frame.normal,
        frame.tangent_u,
        frame.tangent_v,
    )
    if completely:
        area = convex.erode(area, footprint(own, lifted))
    return EmbeddedHSI(area, lifted)


def top_face(obj: ObjectView) -> tuple[PlaneFrame, HSI]:
    box = obj.obb
    frame = PlaneFrame(anchor_point(box, ("top",)), box.axis(2), box.axis(0), box.axis(1))
    h = box.half_extents
    return frame, HSI.box([-h[0], -h[1]], [h[0], h[1]])


def axis_plane(axis: str, coord: float, workspace: AABB) -> EmbeddedHSI:
    k = _AXIS_INDEX[axis]
    iu, iv = (k + 1) % 3, (k + 2) % 3
    eye = np.eye(3)
    origin = workspace.center.copy()
    origin[k] = coord
    frame = PlaneFrame(origin, eye[k], eye[iu], eye[iv])
    half = workspace.half_extents
    return EmbeddedHSI(HSI.box([-half[iu], -half[iv]], [half[iu], half[iv]]), frame)


def _box_part(rv: RangedVec, workspace: AABB):
    n_ranged = sum(rv.mask)
    if n_ranged == 3:
        return "solid", HSI.box(rv.lo, rv.hi)
    if n_ranged == 2:
        k = rv.mask.index(False)
        plane = axis_plane("xyz"[k], rv.lo[k], workspace)
        uv_lo = plane.frame.project(rv.lo)
        uv_hi = plane.frame.project(rv.hi)
        return "carrier", EmbeddedHSI(
            HSI.box(np.minimum(uv_lo, uv_hi), np.maximum(uv_lo, uv_hi)), plane.frame
        )
    raise IncompatibleCarriers(
        "a vector with a single ranged component cannot be combined with other position constraints"
    )


def _directional(s: A.Directional, target, on_targets: set[str], workspace: AABB) -> HSI:
    if isinstance(target, ObjectView):
        box = target.obb
        tag = DIRECTION_TAGS[s.direction]
        normal = tag_direction(box, tag)
        if isinstance(s.of, A.VarRef) and s.of.name in on_targets:
            # "on t, left of t": the left part of t, split at its centre
            origin = box.center
        else:
            origin = anchor_point(box, (tag,))
    else:
        origin = as_point(target)
        normal = np.array(_WORLD_DIRECTION[s.direction])
    return convex.intersect(convex.halfspace_hsi(origin, normal), convex.workspace_hsi(workspace))


def support_targets(decl: A.ObjectDecl) -> set[str]:
    """Objects the declaration rests on or is placed inside."""
    return {
        s.target.name if isinstance(s, A.On) else s.region.name
        for s in decl.specifiers
        if (isinstance(s, A.On) and isinstance(s.target, A.VarRef))
        or (isinstance(s, A.In) and isinstance(s.region, A.VarRef))
    }


def _contribute(parts: _Parts, s, own: ObjectView, ctx, workspace: AABB, on_targets: set[str]):
    label = _label(s)
    parts.labels.append(label)

    def add_value(v, shift=None):
        if isinstance(v, ObjectView):
            v = v.position
        if isinstance(v, RangedVec):
            parts.boxes.append((v if shift is None else v.shifted(shift), label))
        elif isinstance(v, np.ndarray) and v.shape == (3,):
            parts.points.append((v if shift is None else v + shift, label))
        else:
            raise TypeMismatch(f"{label}: expected a position vector, got {describe(v)}")

    match s:
        case A.With(value=v):
            add_value(eval_expr(v, ctx))
        case A.At(value=v, relative_to=rel):
            shift = as_point(eval_expr(rel, ctx)) if rel is not None else None
            add_value(eval_expr(v, ctx), shift)
        case A.Beyond(target=t, by=b, origin=o):
            x = as_point(eval_expr(t, ctx))
            y = as_point(eval_expr(o, ctx))
            if np.linalg.norm(x - y) <= POINT_TOL:
                raise ZeroVector(f"{label}: reference points coincide")
            direction = normalize(x - y)
            by = eval_expr(b, ctx)
            if isinstance(by, float):
                parts.points.append((x + by * direction, label))
            elif isinstance(by, np.ndarray):
                parts.points.append((x + rotation_from_forward(direction, UP) @ by, label))
            else:
                raise TypeMismatch(f"{label}: 'by' takes a number or vector, got {describe(by)}")
        case A.In(region=r):
            region = eval_expr(r, ctx)
            if isinstance(region, ObjectView):
                box = region.obb
                region = convex.Cuboid(box.center, box.rotation, box.half_extents * 2)
            if isinstance(region, (np.ndarray, RangedVec, float, str, Range)):
                raise TypeMismatch(f"{label}: 'in' takes a region, got {describe(region)}")
            h = convex.region_to_hsi(region, workspace)
            (parts.carriers if isinstance(h, EmbeddedHSI) else parts.solids).append((h, label))
        case A.Directional():
            target = eval_expr(s.of, ctx)
            parts.solids.append((_directional(s, target, on_targets, workspace), label))
        case A.On(target=t, completely=completely):
            target = eval_expr(t, ctx)
            if isinstance(target, ObjectView):
                frame, area = top_face(target)
                parts.carriers.append((surface_carrier(own, frame, area, completely), label))
            elif isinstance(target, (convex.Rect3D, convex.ConvexPolygon3D)):
                emb = convex.region_to_hsi(target, workspace)
                parts.carriers.append((surface_carrier(own, emb.frame, emb.hsi, completely), label))
            elif isinstance(target, (np.ndarray, RangedVec)):
                add_value(target, UP * support_offset(own, UP))
            else:
                raise TypeMismatch(f"{label}: cannot stand on {describe(target)}")
        case A.AlignedWith(target=t, axis=axis):
            coord = as_point(eval_expr(t, ctx))[_AXIS_INDEX[axis]]
            parts.carriers.append((axis_plane(axis, coord, workspace), label))
        case _:
            raise TypeMismatch(f"{label} is not a position specifier")


def _to_frame(emb: EmbeddedHSI, base: PlaneFrame) -> tuple[np.ndarray, np.ndarray]:
    """Constraints of a coplanar embedded region rewritten in ``base`` coordinates."""
    f = emb.frame
    M = f.basis.T @ base.basis
    t = f.basis.T @ (base.origin - f.origin)
    return emb.hsi.A @ M, emb.hsi.b - emb.hsi.A @ t


def _stack(rows: list[tuple[np.ndarray, np.ndarray]], obj: str, labels) -> HSI:
    As, bs = [], []
    for A_, b_ in rows:
        A_ = np.atleast_2d(A_)
        norms = np.linalg.norm(A_, axis=1)
        flat = norms <= ZERO_ROW
        if np.any(b_[flat] < -POINT_TOL):
            raise EmptyCombinedRegion(obj, labels)
        As.append(A_[~flat])
        bs.append(b_[~flat])
    return HSI(np.vstack(As), np.concatenate(bs))


def resolve_position(
    decl: A.ObjectDecl,
    ctx: Mapping[str, ObjectView],
    workspace: AABB = DEFAULT_WORKSPACE,
    default=None,
) -> PropertyDist:
    """Distribution of ``decl``'s position given the objects placed so far.

    ``ctx`` must hold every referenced object and ``decl``'s own dimensions
    (and orientation, unless it is derived from the position).
    """
    own = ctx[decl.name]
    specs = decl.position_specifiers
    if not specs:
        return dist_from_value(eval_expr(default, ctx)) if default is not None else Constant(np.zeros(3))

    parts = _Parts()
    on_targets = support_targets(decl)
    for s in specs:
        _contribute(parts, s, own, ctx, workspace, on_targets)

    for rv, label in list(parts.boxes):
        if parts.points or parts.carriers or parts.solids or len(parts.boxes) > 1:
            kind, h = _box_part(rv, workspace)
            (parts.carriers if kind == "carrier" else parts.solids).append((h, label))
    if not (parts.points or parts.carriers or parts.solids):
        rv, _ = parts.boxes[0]
        return ComponentUniform(rv.lo, rv.hi, rv.mask)

    if parts.points:
        return Constant(_check_point(decl, parts))

    if parts.carriers:
        base, _ = parts.carriers[0]
        rows = [(base.hsi.A, base.hsi.b)]
        for emb, label in parts.carriers[1:]:
            if not base.frame.coplanar(emb.frame):
                raise IncompatibleCarriers(
                    f"{decl.name}: {label} lies in a different plane from {parts.carriers[0][1]}",
                    decl.line,
                )
            rows.append(_to_frame(emb, base.frame))
        for h, _ in parts.solids:
            rows.append(base.frame.restrict(h))
        rows.append(base.frame.restrict(convex.workspace_hsi(workspace)))
        region = EmbeddedHSI(_stack(rows, decl.name, parts.labels), base.frame)
    else:
        rows = [(h.A, h.b) for h, _ in parts.solids]
        rows.append((convex.workspace_hsi(workspace).A, convex.workspace_hsi(workspace).b))
        region = _stack(rows, decl.name, parts.labels)

    hsi = region.hsi if isinstance(region, EmbeddedHSI) else region
    try:
        center, radius = convex.chebyshev_center(hsi)
    except EmptyRegion:
        raise EmptyCombinedRegion(decl.name, parts.labels, decl.line) from None
    return RegionUniform(region, center, radius, tuple(parts.labels))


def _check_point(decl: A.ObjectDecl, parts: _Parts) -> np.ndarray:
    p, first = parts.points[0]
    for q, label in parts.points[1:]:
        if np.linalg.norm(q - p) > POINT_TOL:
            raise ConstantViolatesConstraint(
                f"{decl.name}: {label} disagrees with {first}", decl.line
            )
    for h, label in parts.carriers + parts.solids:
        if not h.contains(p, POINT_TOL):
            raise ConstantViolatesConstraint(f"{decl.name}: {first} violates {label}", decl.line)
    return p


def resolve_orientation(decl: A.ObjectDecl, ctx: Mapping[str, ObjectView], default=None) -> PropertyDist:
    s = decl.orientation_specifier
    if isinstance(s, A.FacingToward):
        target_expr = s.target
        name = decl.name

        def face(c: Mapping[str, ObjectView]) -> np.ndarray:
            target = as_point(eval_expr(target_expr, c))
            delta = target - c[name].position
            if np.linalg.norm(delta) <= POINT_TOL:
                raise ZeroVector(f"{name} faces towards a point at its own position")
            return rotation_from_forward(delta)

        return Derived(face, ((name, A.POSITION),))
    if isinstance(s, A.Facing):
        expr = s.direction
    elif isinstance(s, A.With):
        expr = s.value
    else:
        expr = default
    if expr is None:
        return Constant(np.eye(3))
    v = eval_expr(expr, ctx)
    if isinstance(v, ObjectView):
        raise TypeMismatch(f"{decl.name}: 'facing' takes a direction; use 'facing towards' for objects")
    if not (isinstance(v, np.ndarray) and v.shape == (3,)):
        raise TypeMismatch(f"{decl.name}: orientation must be a direction vector, got {describe(v)}")
    return Constant(rotation_from_forward(v))


def resolve_property(decl: A.ObjectDecl, prop: str, ctx, default) -> PropertyDist:
    expr = decl.with_value(prop)
    if expr is None:
        expr = default
    v = eval_expr(expr, ctx)
    if isinstance(v, ObjectView):
        raise TypeMismatch(f"{decl.name}.{prop}: an object is not a property value")
    return dist_from_value(v)


@dataclass(frozen=True)
class ResolvedScene:
    """A spec with its sampling order; distributions are built per scene."""

    spec: A.SpecAST
    deps: DependencyOrder
    workspace: AABB = DEFAULT_WORKSPACE

    @property
    def order(self):
        return self.deps.order

    def dist(self, obj: str, prop: str, ctx: Mapping[str, ObjectView]) -> PropertyDist:
        decl = self.spec.decl(obj)
        default = self.spec.model_classes[decl.class_name].defaults.get(prop)
        if prop == A.POSITION:
            return resolve_position(decl, ctx, self.workspace, default)
        if prop == A.ORIENTATION:
            return resolve_orientation(decl, ctx, default)
        return resolve_property(decl, prop, ctx, default)


def resolve(spec: A.SpecAST, workspace: AABB = DEFAULT_WORKSPACE) -> ResolvedScene:
    return ResolvedScene(spec, build_dependency_order(spec), workspace)
