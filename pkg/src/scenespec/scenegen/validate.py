"""Post-hoc scene validator.

Each specifier is re-checked directly as a geometric predicate on the final
scene. None of the region or half-space machinery used for sampling is
involved, so agreement between generator and validator is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import convex
from ..errors import SpecSceneMismatch
from ..geom import anchor_point, obb_overlap, tag_direction
from ..lang import ast as A
from ..lang.printer import format_specifier
from ..resolve.evaluate import ObjectView, Range, RangedVec, eval_expr
from .scene import RejectReason, Scene

DEFAULT_TOL = 1e-6

_DIR_TAG = {"left": "left", "right": "right", "ahead": "front", "behind": "back", "above": "top", "below": "bottom"}
_WORLD = {
    "left": (-1, 0, 0), "right": (1, 0, 0), "ahead": (0, 1, 0),
    "behind": (0, -1, 0), "above": (0, 0, 1), "below": (0, 0, -1),
}
_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Violation:
    reason: RejectReason
    objects: tuple[str, ...]
    detail: str

    def as_dict(self) -> dict:
        return {"reason": self.reason.value, "objects": list(self.objects), "detail": self.detail}


def scene_context(scene: Scene) -> dict[str, ObjectView]:
    ctx = {}
    for o in scene.objects:
        values = {
            A.POSITION: np.array(o.position),
            A.ORIENTATION: o.rotation,
            "width": o.dims[0],
            "length": o.dims[1],
            "height": o.dims[2],
        }
        for k, v in o.properties.items():
            values[k] = np.array(v) if isinstance(v, tuple) else v
        ctx[o.name] = ObjectView(o.name, o.cls, values)
    return ctx


def _point(v):
    return v.position if isinstance(v, ObjectView) else v


def _matches(actual, expected, tol: float) -> bool:
    """Does a concrete value belong to the set a specifier allows?"""
    if isinstance(expected, ObjectView):
        expected = expected.position
    match expected:
        case RangedVec(lo=lo, hi=hi):
            a = np.asarray(actual, float)
            return bool(np.all(a >= lo - tol) and np.all(a <= hi + tol))
        case Range(lo=lo, hi=hi):
            return lo - tol <= float(actual) <= hi + tol
        case np.ndarray():
            return bool(np.linalg.norm(np.asarray(actual, float) - expected) <= tol)
        case float():
            return abs(float(actual) - expected) <= tol
    return actual == expected


def _rests_on(decl: A.ObjectDecl) -> set[str]:
    names = set()
    for s in decl.specifiers:
        if isinstance(s, A.On) and isinstance(s.target, A.VarRef):
            names.add(s.target.name)
        if isinstance(s, A.In) and isinstance(s.region, A.VarRef):
            names.add(s.region.name)
    return names


def _standoff(decl: A.ObjectDecl, me: ObjectView, normal) -> float:
    """Expected centre height above a supporting surface."""
    if isinstance(decl.orientation_specifier, A.FacingToward):
        return me.dims[2] / 2
    return float(np.sum(np.abs(me.rotation.T @ normal) * me.dims / 2))


def _corners(me: ObjectView) -> np.ndarray:
    signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], float)
    return me.position + (signs * me.dims / 2) @ me.rotation.T


def _on_surface(decl, me, origin, normal, u_axis, v_axis, half_u, half_v, completely, tol) -> str | None:
    d = me.position - origin
    gap = float(d @ normal) - _standoff(decl, me, normal)
    if abs(gap) > tol:
        return f"centre is {gap:+.3g} m off the contact height"
    pts = _corners(me) if completely else me.position[None, :]
    u = (pts - origin) @ u_axis
    v = (pts - origin) @ v_axis
    if np.any(np.abs(u) > half_u + tol) or np.any(np.abs(v) > half_v + tol):
        return "footprint leaves the surface" if completely else "centre is off the surface"
    return None


def _in_region(p, region, tol) -> bool:
    match region:
        case ObjectView():
            local = region.rotation.T @ (p - region.position)
            return bool(np.all(np.abs(local) <= region.dims / 2 + tol))
        case convex.Cuboid(origin=o, orientation=r, dims=dims):
            return bool(np.all(np.abs(r.T @ (p - o)) <= dims / 2 + tol))
        case convex.Rect3D(origin=o, orientation=r, dims=dims):
            local = r.T @ (p - o)
            return abs(local[2]) <= tol and bool(np.all(np.abs(local[:2]) <= dims / 2 + tol))
        case convex.Halfspace(origin=o, normal=n):
            return float((p - o) @ n) >= -tol
        case convex.All():
            return True
        case convex.Empty():
            return False
    raise TypeError(f"cannot test containment in {region!r}")


def _check(decl: A.ObjectDecl, s, ctx, tol: float) -> tuple[RejectReason, str] | None:
    me = ctx[decl.name]
    p = me.position
    C, R = RejectReason.CONTAINMENT, RejectReason.RELATIVE_POSITION
    match s:
        case A.With(name=A.ORIENTATION, value=v) | A.Facing(direction=v):
            want = eval_expr(v, ctx)
            want = want / np.linalg.norm(want)
            if np.linalg.norm(me.rotation[:, 1] - want) > tol:
                return R, "forward axis does not match the facing direction"
        case A.FacingToward(target=t):
            delta = _point(eval_expr(t, ctx)) - p
            want = delta / np.linalg.norm(delta)
            if np.linalg.norm(me.rotation[:, 1] - want) > tol:
                return R, "not facing the target"
        case A.With(name=A.POSITION, value=v):
            if not _matches(p, eval_expr(v, ctx), tol):
                return C, "position differs from the assigned value"
        case A.With(name=name, value=v):
            if not _matches(me.values.get(name), eval_expr(v, ctx), tol):
                return C, f"{name} differs from the assigned value"
        case A.At(value=v, relative_to=rel):
            want = eval_expr(v, ctx)
            if rel is not None:
                shift = _point(eval_expr(rel, ctx))
                want = want.shifted(shift) if isinstance(want, RangedVec) else _point(want) + shift
            if not _matches(p, want, tol):
                return C, "position is not at the given location"
        case A.Beyond(target=t, by=b, origin=o):
            x = _point(eval_expr(t, ctx))
            y = _point(eval_expr(o, ctx))
            f = (x - y) / np.linalg.norm(x - y)
            by = eval_expr(b, ctx)
            if isinstance(by, float):
                want = x + by * f
            else:
                right = np.cross(f, _Z)
                if np.linalg.norm(right) < 1e-6:
                    right = np.cross(f, [0.0, 1.0, 0.0])
                right /= np.linalg.norm(right)
                up = np.cross(right, f)
                want = x + np.column_stack([right, f, up]) @ by
            if np.linalg.norm(p - want) > tol:
                return R, "not at the 'beyond' location"
        case A.In(region=r):
            if not _in_region(p, eval_expr(r, ctx), tol):
                return C, "position lies outside the region"
        case A.Directional(direction=d, of=o):
            target = eval_expr(o, ctx)
            if isinstance(target, ObjectView):
                box = target.obb
                tag = _DIR_TAG[d]
                normal = tag_direction(box, tag)
                split_at_centre = isinstance(o, A.VarRef) and o.name in _rests_on(decl)
                origin = box.center if split_at_centre else anchor_point(box, (tag,))
            else:
                origin, normal = target, np.array(_WORLD[d], float)
            if float((p - origin) @ normal) < -tol:
                return R, f"not {d} of the reference"
        case A.On(target=t, completely=completely):
            target = eval_expr(t, ctx)
            if isinstance(target, ObjectView):
                box = target.obb
                why = _on_surface(
                    decl, me, anchor_point(box, ("top",)), box.axis(2), box.axis(0), box.axis(1),
                    box.half_extents[0], box.half_extents[1], completely, tol,
                )
            elif isinstance(target, convex.Rect3D):
                r = target.orientation
                why = _on_surface(
                    decl, me, target.origin, r[:, 2], r[:, 0], r[:, 1],
                    target.dims[0] / 2, target.dims[1] / 2, completely, tol,
                )
            else:
                lift = _Z * _standoff(decl, me, _Z)
                want = target.shifted(lift) if isinstance(target, RangedVec) else target + lift
                why = None if _matches(p, want, tol) else "not resting on the given point"
            if why:
                return C, why
        case A.AlignedWith(target=t, axis=axis):
            k = "xyz".index(axis)
            if abs(p[k] - _point(eval_expr(t, ctx))[k]) > tol:
                return R, f"not aligned with the reference along {axis}"
    return None


def check_scene(
    spec: A.SpecAST,
    scene: Scene,
    *,
    collision_eps: float = 1e-9,
    tol: float = DEFAULT_TOL,
) -> list[Violation]:
    """Every violated specifier plus every interpenetrating pair of boxes."""
    declared = [d.name for d in spec.declarations]
    present = [o.name for o in scene.objects]
    if sorted(declared) != sorted(present):
        raise SpecSceneMismatch(f"spec declares {declared} but the scene holds {present}")

    ctx = scene_context(scene)
    out: list[Violation] = []
    for decl in spec.declarations:
        for s in decl.specifiers:
            res = _check(decl, s, ctx, tol)
            if res is not None:
                reason, why = res
                refs = tuple(sorted({decl.name}))
                out.append(Violation(reason, refs, f"{decl.name}: {format_specifier(s)}: {why}"))

    boxes = [(o.name, o.obb) for o in scene.objects]
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if obb_overlap(boxes[i][1], boxes[j][1], collision_eps):
                a, b = boxes[i][0], boxes[j][0]
                out.append(Violation(RejectReason.OBJECT_COLLISION, (a, b), f"{a} and {b} interpenetrate"))
    return out
