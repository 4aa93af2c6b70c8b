"""Scene sampling, validation, JSON I/O and the naive baseline."""

from .baseline import DEFAULT_BUDGET, baseline_rejection_sample
from .sampler import (
    BASELINE_STREAM,
    DEFAULT_COLLISION_EPS,
    DEFAULT_MAX_RETRIES,
    ENGINE_STREAM,
    colliding_pairs,
    draw,
    object_rng,
    sample_scene,
)
from .scene import (
    FORMAT_VERSION,
    RejectReason,
    SampleStats,
    Scene,
    SceneObject,
    dumps,
    loads,
    scene_from_dict,
    scene_to_dict,
    write_atomic,
)
from .validate import Violation, check_scene

__all__ = [
    "DEFAULT_BUDGET", "baseline_rejection_sample", "BASELINE_STREAM", "DEFAULT_COLLISION_EPS",
    "DEFAULT_MAX_RETRIES", "ENGINE_STREAM", "colliding_pairs", "draw", "object_rng",
    "sample_scene", "FORMAT_VERSION", "RejectReason", "SampleStats", "Scene", "SceneObject",
    "dumps", "loads", "scene_from_dict", "scene_to_dict", "write_atomic", "Violation",
    "check_scene",
]
