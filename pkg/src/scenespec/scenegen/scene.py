"""Concrete scenes and their JSON file format (version 1).

A scene file looks like::

    {"version": 1, "spec_hash": "<sha256>", "seed": 42,
     "objects": [{"name": "t", "class": "Table",
                  "position": [x, y, z], "orientation": [qw, qx, qy, qz],
                  "dims": [w, l, h], "properties": {"color": "brown"}}]}

Floats are written with Python's shortest round-trip representation, so
reading a file back yields bit-identical values.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from ..geom import OBB, quaternion_to_rotation

FORMAT_VERSION = 1


class RejectReason(str, enum.Enum):
    OBJECT_COLLISION = "ObjectCollision"
    RELATIVE_POSITION = "RelativePositionViolation"
    CONTAINMENT = "ContainmentViolation"


@dataclass(frozen=True)
class SceneObject:
    name: str
    cls: str
    position: tuple[float, float, float]
    orientation: tuple[float, float, float, float]
    dims: tuple[float, float, float]
    properties: dict = field(default_factory=dict)

    @property
    def rotation(self) -> np.ndarray:
        return quaternion_to_rotation(self.orientation)

    @property
    def obb(self) -> OBB:
        return OBB.from_dims(self.position, self.rotation, self.dims)


@dataclass(frozen=True)
class Scene:
    objects: tuple[SceneObject, ...]
    seed: int
    spec_hash: str

    def object(self, name: str) -> SceneObject:
        for o in self.objects:
            if o.name == name:
                return o
        raise KeyError(name)


@dataclass
class SampleStats:
    scenes_requested: int = 0
    scenes_emitted: int = 0
    collision_rejections: int = 0
    hit_and_run_steps_total: int = 0
    wall_time: float = 0.0

    def merge(self, other: "SampleStats") -> "SampleStats":
        return SampleStats(
            self.scenes_requested + other.scenes_requested,
            self.scenes_emitted + other.scenes_emitted,
            self.collision_rejections + other.collision_rejections,
            self.hit_and_run_steps_total + other.hit_and_run_steps_total,
            self.wall_time + other.wall_time,
        )

    def as_dict(self) -> dict:
        return {
            "scenes_requested": self.scenes_requested,
            "scenes_emitted": self.scenes_emitted,
            "collision_rejections": self.collision_rejections,
            "hit_and_run_steps_total": self.hit_and_run_steps_total,
            "wall_time": self.wall_time,
        }


def _plain(v):
    if isinstance(v, np.ndarray):
        return [float(c) for c in v]
    if isinstance(v, (tuple, list)):
        return [_plain(c) for c in v]
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def _from_plain(v):
    if isinstance(v, list):
        return tuple(_from_plain(c) for c in v)
    return v


def scene_to_dict(scene: Scene) -> dict:
    return {
        "version": FORMAT_VERSION,
        "spec_hash": scene.spec_hash,
        "seed": scene.seed,
        "objects": [
            {
                "name": o.name,
                "class": o.cls,
                "position": _plain(o.position),
                "orientation": _plain(o.orientation),
                "dims": _plain(o.dims),
                "properties": {k: _plain(v) for k, v in o.properties.items()},
            }
            for o in scene.objects
        ],
    }


def dumps(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), indent=2) + "\n"


def _fixed(seq, n: int, what: str) -> tuple:
    if not isinstance(seq, list) or len(seq) != n:
        raise ValueError(f"{what} must be an array of {n} numbers")
    return tuple(float(c) for c in seq)


def scene_from_dict(doc: dict) -> Scene:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported scene version {doc.get('version')!r}")
    objects = []
    for o in doc["objects"]:
        q = _fixed(o["orientation"], 4, "orientation")
        if abs(np.linalg.norm(q) - 1.0) > 1e-9:
            raise ValueError(f"orientation of {o['name']!r} is not a unit quaternion")
        objects.append(
            SceneObject(
                o["name"],
                o["class"],
                _fixed(o["position"], 3, "position"),
                q,
                _fixed(o["dims"], 3, "dims"),
                {k: _from_plain(v) for k, v in o.get("properties", {}).items()},
            )
        )
    return Scene(tuple(objects), int(doc["seed"]), str(doc["spec_hash"]))


def loads(text: str) -> Scene:
    return scene_from_dict(json.loads(text))


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
