"""Scene sampling in dependency order with whole-scene collision redraws."""

from __future__ import annotations

import time
from collections import Counter

import numpy as np

from .. import convex
from ..errors import RetriesExhausted, TypeMismatch
from ..geom import obb_overlap, rotation_to_quaternion
from ..lang import ast as A
from ..resolve import (
    ComponentUniform,
    Constant,
    Derived,
    ObjectView,
    RegionUniform,
    ResolvedScene,
    UniformScalar,
)
from .scene import RejectReason, SampleStats, Scene, SceneObject

DEFAULT_MAX_RETRIES = 100
DEFAULT_COLLISION_EPS = 1e-9

ENGINE_STREAM = 0
BASELINE_STREAM = 1

_SEED_MASK = (1 << 64) - 1


def object_rng(seed: int, attempt: int, index: int, stream: int = ENGINE_STREAM) -> np.random.Generator:
    """Independent PCG64 stream per (seed, attempt, object).

    Keying by declaration index means appending an object never changes the
    draws of the ones before it.
    """
    ss = np.random.SeedSequence(seed & _SEED_MASK, spawn_key=(stream, attempt, index))
    return np.random.Generator(np.random.PCG64(ss))


def draw(dist, rng: np.random.Generator, ctx, mix_iters: int | None = None) -> tuple[object, int]:
    """Sample one value; also returns the number of hit-and-run steps used."""
    match dist:
        case Constant(value=v):
            return (v.copy() if isinstance(v, np.ndarray) else v), 0
        case UniformScalar(lo=lo, hi=hi):
            return float(rng.uniform(lo, hi)), 0
        case ComponentUniform(lo=lo, hi=hi, mask=mask):
            out = lo.astype(float).copy()
            m = np.array(mask)
            out[m] = rng.uniform(lo[m], hi[m])
            return out, 0
        case RegionUniform():
            hsi = dist.hsi
            iters = mix_iters or convex.default_mix_iterations(hsi.dim)
            x = convex.hit_and_run(hsi, dist.center, iters, rng)
            return dist.lift(x), iters
        case Derived(fn=fn):
            return fn(ctx), 0
    raise TypeError(f"unknown distribution {dist!r}")


def new_context(resolved: ResolvedScene) -> dict[str, ObjectView]:
    return {d.name: ObjectView(d.name, d.class_name) for d in resolved.spec.declarations}


def store(ctx, obj: str, prop: str, value) -> None:
    if prop in A.DIMENSIONS and not (isinstance(value, float) and value > 0):
        raise TypeMismatch(f"{obj}.{prop} must be a positive number, got {value!r}")
    ctx[obj].values[prop] = value


def draw_objects(resolved: ResolvedScene, seed: int, attempt: int, mix_iters=None, trace=None):
    index = {d.name: i for i, d in enumerate(resolved.spec.declarations)}
    rngs = {name: object_rng(seed, attempt, i) for name, i in index.items()}
    ctx = new_context(resolved)
    steps = 0
    for obj, prop in resolved.order:
        dist = resolved.dist(obj, prop, ctx)
        value, n = draw(dist, rngs[obj], ctx, mix_iters)
        steps += n
        store(ctx, obj, prop, value)
        if trace is not None:
            trace.append((obj, prop))
    return ctx, steps


def colliding_pairs(views, eps: float = DEFAULT_COLLISION_EPS) -> list[tuple[str, str]]:
    boxes = [(v.name, v.obb) for v in views]
    pairs = []
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if obb_overlap(boxes[i][1], boxes[j][1], eps):
                pairs.append((boxes[i][0], boxes[j][0]))
    return pairs


def _property_value(v):
    if isinstance(v, np.ndarray):
        return tuple(float(c) for c in v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def build_scene(resolved: ResolvedScene, ctx, seed: int) -> Scene:
    objects = []
    for d in resolved.spec.declarations:
        view = ctx[d.name]
        props = {
            k: _property_value(v)
            for k, v in view.values.items()
            if k not in (A.POSITION, A.ORIENTATION, *A.DIMENSIONS)
        }
        objects.append(
            SceneObject(
                d.name,
                d.class_name,
                tuple(float(c) for c in view.position),
                rotation_to_quaternion(view.rotation),
                tuple(float(c) for c in view.dims),
                props,
            )
        )
    return Scene(tuple(objects), int(seed), resolved.spec.source_hash)


def sample_scene(
    resolved: ResolvedScene,
    seed: int,
    *,
    max_retries: int = DEFAULT_MAX_RETRIES,
    mix_iters: int | None = None,
    collision_eps: float = DEFAULT_COLLISION_EPS,
    trace: list | None = None,
) -> tuple[Scene, SampleStats]:
    """Draw one collision-free scene.

    Every property is sampled in topological order. If any two boxes
    interpenetrate the whole scene is redrawn from a fresh RNG stream, at most
    ``max_retries`` times.
    """
    t0 = time.perf_counter()
    stats = SampleStats(scenes_requested=1)
    tally: Counter = Counter()
    for attempt in range(max_retries + 1):
        if trace is not None:
            trace.clear()
        ctx, steps = draw_objects(resolved, seed, attempt, mix_iters, trace)
        stats.hit_and_run_steps_total += steps
        if not colliding_pairs(ctx.values(), collision_eps):
            stats.scenes_emitted = 1
            stats.wall_time = time.perf_counter() - t0
            return build_scene(resolved, ctx, seed), stats
        stats.collision_rejections += 1
        tally[RejectReason.OBJECT_COLLISION.value] += 1
    raise RetriesExhausted(max_retries, tally, seed)
