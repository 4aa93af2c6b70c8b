"""Naive rejection sampling, used as a point of comparison.

Each object's position is drawn from its primary support alone (the surface
it stands on, the point it is placed at, or the whole workspace). Every other
constraint is left to a post-hoc check, and a scene that fails any check is
thrown away and redrawn.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .. import convex
from ..errors import BudgetExhausted
from ..geom import UP, normalize, rotation_from_forward
from ..lang import ast as A
from ..resolve import ObjectView, RangedVec, ResolvedScene, eval_expr
from ..resolve.core import support_offset
from .sampler import BASELINE_STREAM, build_scene, draw, new_context, object_rng, store
from .scene import RejectReason, Scene
from .validate import check_scene

DEFAULT_BUDGET = 100_000

# first violation found, in this order, is the one charged for a rejection
_PRIORITY = (
    RejectReason.CONTAINMENT,
    RejectReason.RELATIVE_POSITION,
    RejectReason.OBJECT_COLLISION,
)


def _point(v) -> np.ndarray:
    return v.position if isinstance(v, ObjectView) else v


def _uniform_box(rng, center, rotation, half) -> np.ndarray:
    return np.asarray(center) + rotation @ rng.uniform(-half, half)


def _on_face(rng, own: ObjectView, origin, rotation, half_uv) -> np.ndarray:
    u, v = rng.uniform(-half_uv, half_uv)
    normal = rotation[:, 2]
    return origin + u * rotation[:, 0] + v * rotation[:, 1] + normal * support_offset(own, normal)


def _naive_position(decl: A.ObjectDecl, ctx, rng, workspace) -> np.ndarray:
    own = ctx[decl.name]
    whole = _uniform_box(rng, workspace.center, np.eye(3), workspace.half_extents)
    for s in decl.position_specifiers:
        match s:
            case A.With(value=v) | A.At(value=v, relative_to=None):
                value = eval_expr(v, ctx)
            case A.At(value=v, relative_to=rel):
                shift = _point(eval_expr(rel, ctx))
                value = eval_expr(v, ctx)
                value = value.shifted(shift) if isinstance(value, RangedVec) else value + shift
            case A.Beyond(target=t, by=b, origin=o):
                x, y = _point(eval_expr(t, ctx)), _point(eval_expr(o, ctx))
                forward = normalize(x - y)
                by = eval_expr(b, ctx)
                value = x + (by * forward if isinstance(by, float) else rotation_from_forward(forward) @ by)
            case A.On(target=t):
                target = eval_expr(t, ctx)
                if isinstance(target, ObjectView):
                    box = target.obb
                    top = box.center + box.axis(2) * box.half_extents[2]
                    return _on_face(rng, own, top, box.rotation, box.half_extents[:2])
                if isinstance(target, convex.Rect3D):
                    return _on_face(rng, own, target.origin, target.orientation, target.dims / 2)
                value = target
                if isinstance(value, RangedVec):
                    value = value.shifted(UP * support_offset(own, UP))
                else:
                    value = value + UP * support_offset(own, UP)
            case A.In(region=r):
                region = eval_expr(r, ctx)
                if isinstance(region, ObjectView):
                    box = region.obb
                    return _uniform_box(rng, box.center, box.rotation, box.half_extents)
                if isinstance(region, convex.Cuboid):
                    return _uniform_box(rng, region.origin, region.orientation, region.dims / 2)
                continue
            case A.AlignedWith(target=t, axis=axis):
                k = "xyz".index(axis)
                whole[k] = _point(eval_expr(t, ctx))[k]
                return whole
            case _:
                continue
        if isinstance(value, ObjectView):
            return value.position.copy()
        if isinstance(value, RangedVec):
            out = value.lo.astype(float).copy()
            m = np.array(value.mask)
            out[m] = rng.uniform(value.lo[m], value.hi[m])
            return out
        return np.asarray(value, float).copy()
    return whole


def _naive_scene(resolved: ResolvedScene, seed: int, attempt: int) -> Scene:
    decls = resolved.spec.declarations
    rngs = {d.name: object_rng(seed, attempt, i, BASELINE_STREAM) for i, d in enumerate(decls)}
    ctx = new_context(resolved)
    for obj, prop in resolved.order:
        rng = rngs[obj]
        if prop == A.POSITION:
            value = _naive_position(resolved.spec.decl(obj), ctx, rng, resolved.workspace)
        else:
            value, _ = draw(resolved.dist(obj, prop, ctx), rng, ctx)
        store(ctx, obj, prop, value)
    return build_scene(resolved, ctx, seed)


def baseline_rejection_sample(
    resolved: ResolvedScene,
    seed: int,
    *,
    budget: int = DEFAULT_BUDGET,
    collision_eps: float = 1e-9,
) -> tuple[Scene, Counter]:
    """Draw naive scenes until one passes every check.

    Returns the accepted scene and a tally of rejections keyed by reason.
    """
    counts: Counter = Counter({r.value: 0 for r in _PRIORITY})
    for attempt in range(budget):
        scene = _naive_scene(resolved, seed, attempt)
        found = {v.reason for v in check_scene(resolved.spec, scene, collision_eps=collision_eps)}
        if not found:
            return scene, counts
        reason = next(r for r in _PRIORITY if r in found)
        counts[reason.value] += 1
    raise BudgetExhausted(budget, dict(counts))

