import dataclasses
import json
from importlib.resources import files

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenespec.errors import BudgetExhausted, RetriesExhausted, SpecSceneMismatch
from scenespec.lang import parse_model, parse_spec
from scenespec.resolve import resolve
from scenespec.scenegen import (
    RejectReason,
    SampleStats,
    Scene,
    baseline_rejection_sample,
    check_scene,
    dumps,
    loads,
    object_rng,
    sample_scene,
)

CORPUS = files("scenespec.corpus")
MODELS = parse_model(CORPUS.joinpath("models.pm").read_text())
SPEC_FILES = ("table_cube.prs", "facing_towards.prs", "shelf_regions.prs")


def load(name):
    return parse_spec(CORPUS.joinpath(name).read_text(), MODELS)


def parse(text):
    return parse_spec(text, MODELS)


TABLE_CUBE = load("table_cube.prs")
TC = resolve(TABLE_CUBE)


def move(scene: Scene, name: str, delta) -> Scene:
    objs = tuple(
        dataclasses.replace(o, position=tuple(np.add(o.position, delta))) if o.name == name else o
        for o in scene.objects
    )
    return dataclasses.replace(scene, objects=objs)


def test_constant_cube():
    spec = parse("c = Cube at V3D(1, 2, 3)")
    scene, stats = sample_scene(resolve(spec), 0)
    assert scene.object("c").position == (1.0, 2.0, 3.0)
    assert stats.collision_rejections == 0 and stats.scenes_emitted == 1


def test_table_cube_samples_validate():
    for seed in range(10):
        scene, _ = sample_scene(TC, seed)
        assert check_scene(TABLE_CUBE, scene) == []


@pytest.mark.parametrize("name", SPEC_FILES)
def test_soundness_every_corpus_spec(name):
    spec = load(name)
    resolved = resolve(spec)
    for seed in range(100):
        scene, _ = sample_scene(resolved, seed)
        assert check_scene(spec, scene) == [], (name, seed)


def test_determinism_same_seed():
    a, _ = sample_scene(TC, 1234)
    b, _ = sample_scene(resolve(load("table_cube.prs")), 1234)
    assert dumps(a) == dumps(b)


def test_seed_independence():
    prev = None
    differ = 0
    for seed in range(101):
        scene, _ = sample_scene(TC, seed)
        pos = np.array([o.position for o in scene.objects])
        if prev is not None and np.max(np.abs(pos - prev)) > 1e-6:
            differ += 1
        prev = pos
    assert differ >= 95


def test_large_seeds_accepted():
    for seed in (2**63, 2**64 - 1, -1):
        scene, _ = sample_scene(TC, seed)
        assert check_scene(TABLE_CUBE, scene) == []


def test_appending_object_keeps_earlier_draws():
    base = parse("a = Cube at V3D((0, 1), (0, 1), 0)")
    more = parse("a = Cube at V3D((0, 1), (0, 1), 0)\nb = Cube at V3D((3, 4), 0, 0)")
    sa, _ = sample_scene(resolve(base), 5)
    sb, _ = sample_scene(resolve(more), 5)
    assert sa.object("a").position == sb.object("a").position


def test_object_streams_are_independent():
    a = object_rng(1, 0, 0).random(4)
    b = object_rng(1, 0, 1).random(4)
    c = object_rng(1, 1, 0).random(4)
    assert not np.allclose(a, b) and not np.allclose(a, c)
    np.testing.assert_array_equal(a, object_rng(1, 0, 0).random(4))


def test_retries_exhausted():
    spec = parse("a = Cube at V3D((0, 0.01), 0, 0)\nb = Cube at V3D((0, 0.01), 0, 0)")
    with pytest.raises(RetriesExhausted) as e:
        sample_scene(resolve(spec), 7, max_retries=3)
    assert e.value.tally == {"ObjectCollision": 4}
    assert e.value.seed == 7


def test_stats_accounting():
    _, stats = sample_scene(TC, 3)
    assert stats.scenes_emitted <= stats.scenes_requested
    assert stats.hit_and_run_steps_total > 0
    merged = stats.merge(stats)
    assert merged.scenes_emitted == 2 and merged.hit_and_run_steps_total == 2 * stats.hit_and_run_steps_total
    assert SampleStats().merge(stats) == stats


# -- validator ------------------------------------------------------------------

def test_cube_moved_off_tray():
    scene, _ = sample_scene(TC, 0)
    bad = move(scene, "_obj0", (0, 0.5, 0))
    found = check_scene(TABLE_CUBE, bad)
    assert [v.reason for v in found] == [RejectReason.CONTAINMENT]
    assert found[0].objects == ("_obj0",)


def test_interpenetrating_trays():
    scene, _ = sample_scene(TC, 0)
    t1, t2 = scene.object("tr_1"), scene.object("tr_2")
    bad = move(scene, "tr_2", np.subtract(t1.position, t2.position) + (0.05, 0, 0))
    found = check_scene(TABLE_CUBE, bad)
    collisions = [v for v in found if v.reason is RejectReason.OBJECT_COLLISION]
    assert [v.objects for v in collisions] == [("tr_1", "tr_2")]


def test_cube_lifted_breaks_contact():
    scene, _ = sample_scene(TC, 0)
    found = check_scene(TABLE_CUBE, move(scene, "_obj0", (0, 0, 1e-3)))
    assert found and all(v.reason is RejectReason.CONTAINMENT for v in found)
    assert check_scene(TABLE_CUBE, move(scene, "_obj0", (0, 0, 1e-8))) == []


def test_directional_violation():
    scene, _ = sample_scene(TC, 0)
    tr1 = scene.object("tr_1")
    # mirror to the right half of the table
    bad = move(scene, "tr_1", (-2 * tr1.position[0], 0, 0))
    bad = move(bad, "_obj0", (-2 * tr1.position[0], 0, 0))
    reasons = {v.reason for v in check_scene(TABLE_CUBE, bad)}
    assert RejectReason.RELATIVE_POSITION in reasons


def test_validator_rejects_mismatched_scene():
    scene, _ = sample_scene(TC, 0)
    with pytest.raises(SpecSceneMismatch):
        check_scene(parse("c = Cube"), scene)


# -- JSON -------------------------------------------------------------------------

def test_json_round_trip_exact():
    for seed in range(5):
        scene, _ = sample_scene(TC, seed)
        again = loads(dumps(scene))
        assert again == scene
        assert dumps(again) == dumps(scene)


def test_json_layout():
    scene, _ = sample_scene(TC, 0)
    doc = json.loads(dumps(scene))
    assert doc["version"] == 1 and doc["seed"] == 0
    assert doc["spec_hash"] == TABLE_CUBE.source_hash
    o = doc["objects"][0]
    assert set(o) == {"name", "class", "position", "orientation", "dims", "properties"}
    assert len(o["orientation"]) == 4 and o["orientation"][0] >= 0
    assert o["properties"] == {"color": "brown"}


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(version=2),
        lambda d: d["objects"][0].update(position=[0, 0]),
        lambda d: d["objects"][0].update(orientation=[1, 1, 0, 0]),
        lambda d: d["objects"][0].pop("dims"),
    ],
)
def test_json_rejects_malformed(mutate):
    scene, _ = sample_scene(TC, 0)
    doc = json.loads(dumps(scene))
    mutate(doc)
    with pytest.raises((ValueError, KeyError)):
        loads(json.dumps(doc))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=3, max_size=3))
def test_float_repr_round_trip(xs):
    scene, _ = sample_scene(resolve(parse("c = Cube")), 0)
    obj = dataclasses.replace(scene.objects[0], position=tuple(xs))
    s = dataclasses.replace(scene, objects=(obj,))
    assert loads(dumps(s)).objects[0].position == tuple(xs)


# -- baseline ----------------------------------------------------------------------

def test_baseline_unconstrained():
    _, counts = baseline_rejection_sample(resolve(parse("c = Cube")), 0)
    assert sum(counts.values()) == 0
    assert set(counts) == {r.value for r in RejectReason}


def test_baseline_infeasible():
    spec = parse("c = Cube at V3D(5, 0, 0), in Cuboid(V3D(0,0,0), V3D(0,1,0), V3D(1,1,1))")
    with pytest.raises(BudgetExhausted) as e:
        baseline_rejection_sample(resolve(spec), 0, budget=10)
    assert e.value.counts["ContainmentViolation"] == 10


def test_baseline_accepted_scene_is_valid():
    scene, counts = baseline_rejection_sample(TC, 0)
    assert check_scene(TABLE_CUBE, scene) == []
    assert sum(counts.values()) > 0


def test_baseline_deterministic():
    a = baseline_rejection_sample(TC, 4)
    b = baseline_rejection_sample(TC, 4)
    assert dumps(a[0]) == dumps(b[0]) and a[1] == b[1]


@pytest.mark.parametrize("name", SPEC_FILES)
def test_baseline_dominance(name):
    resolved = resolve(load(name))
    for seed in range(20):
        _, counts = baseline_rejection_sample(resolved, seed)
        _, stats = sample_scene(resolved, seed)
        assert stats.collision_rejections <= sum(counts.values()), (name, seed)
