"""Command-line front end.

Exit codes: 0 ok, 1 syntax error, 2 semantic error or validation failure,
3 I/O or malformed scene file, 4 retries or baseline budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .errors import (
    BudgetExhausted,
    RetriesExhausted,
    SceneSpecError,
    SpecSceneMismatch,
    SyntaxLevelError,
)
from .geom import AABB
from .lang import parse_model, parse_spec
from .resolve import DEFAULT_WORKSPACE, resolve
from .scenegen import (
    DEFAULT_BUDGET,
    DEFAULT_COLLISION_EPS,
    DEFAULT_MAX_RETRIES,
    RejectReason,
    SampleStats,
    baseline_rejection_sample,
    check_scene,
    dumps,
    loads,
    sample_scene,
    write_atomic,
)

EXIT_OK, EXIT_SYNTAX, EXIT_SEMANTIC, EXIT_IO, EXIT_EXHAUSTED = range(5)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e.strerror or e}") from None


def _workspace(text: str | None) -> AABB:
    if text is None:
        return DEFAULT_WORKSPACE
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 6 or any(hi <= lo for lo, hi in zip(vals[:3], vals[3:])):
        raise CliError(EXIT_SEMANTIC, f"--workspace wants x0,y0,z0,x1,y1,z1 with x0<x1 etc., got {text!r}")
    return AABB(vals[:3], vals[3:])


def _load(args):
    """Parse spec and models and resolve the dependency order."""
    spec_text = _read(args.spec)
    models_path = args.models or str(Path(args.spec).with_name("models.pm"))
    models_text = _read(models_path)
    try:
        models = parse_model(models_text)
        spec = parse_spec(spec_text, models)
        return spec, resolve(spec, _workspace(getattr(args, "workspace", None)))
    except SyntaxLevelError as e:
        raise CliError(EXIT_SYNTAX, str(e)) from None
    except SceneSpecError as e:
        raise CliError(EXIT_SEMANTIC, str(e)) from None


def _sample(resolved, seed: int, args):
    try:
        return sample_scene(
            resolved,
            seed,
            max_retries=args.max_retries,
            mix_iters=args.mix_iters,
            collision_eps=args.collision_eps,
        )
    except RetriesExhausted as e:
        raise CliError(EXIT_EXHAUSTED, str(e)) from None
    except SceneSpecError as e:
        raise CliError(EXIT_SEMANTIC, str(e)) from None


def cmd_check(args) -> int:
    spec, resolved = _load(args)
    # regions depend on sampled values, so build every one of them once
    _sample(resolved, args.seed, args)
    print(f"ok: {len(spec.declarations)} objects, {len(resolved.order)} properties")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.n < 0:
        raise CliError(EXIT_SEMANTIC, "--n must be non-negative")
    _, resolved = _load(args)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot create {out}: {e.strerror or e}") from None
    total = SampleStats()
    for k in range(args.n):
        scene, stats = _sample(resolved, args.seed + k, args)
        total = total.merge(stats)
        _write(out / f"scene_{k}.json", dumps(scene))
    _write(out / "stats.json", json.dumps(total.as_dict(), indent=2) + "\n")
    print(f"wrote {args.n} scenes to {out}")
    return EXIT_OK


def _write(path: Path, text: str) -> None:
    try:
        write_atomic(path, text)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e.strerror or e}") from None


def cmd_baseline(args) -> int:
    if args.n < 1:
        raise CliError(EXIT_SEMANTIC, "--n must be at least 1")
    _, resolved = _load(args)
    naive: Counter = Counter()
    engine: Counter = Counter()
    for k in range(args.n):
        seed = args.seed + k
        try:
            _, counts = baseline_rejection_sample(
                resolved, seed, budget=args.budget, collision_eps=args.collision_eps
            )
        except BudgetExhausted as e:
            raise CliError(EXIT_EXHAUSTED, f"seed {seed}: {e}") from None
        naive.update(counts)
        _, stats = _sample(resolved, seed, args)
        engine[RejectReason.OBJECT_COLLISION.value] += stats.collision_rejections

    def averages(c: Counter) -> dict:
        rows = {r.value: c[r.value] / args.n for r in RejectReason}
        rows["Total"] = sum(c.values()) / args.n
        return rows

    report = {"n": args.n, "seed": args.seed, "naive": averages(naive), "engine": averages(engine)}
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_validate(args) -> int:
    spec, _ = _load(args)
    text = _read(args.scene)
    try:
        scene = loads(text)
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(EXIT_IO, f"malformed scene file {args.scene}: {e}") from None
    try:
        violations = check_scene(spec, scene, collision_eps=args.collision_eps)
    except SpecSceneMismatch as e:
        raise CliError(EXIT_SEMANTIC, str(e)) from None
    print(json.dumps({"violations": [v.as_dict() for v in violations]}, indent=2))
    return EXIT_OK if not violations else EXIT_SEMANTIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scenespec", description="Sample 3D scenes from a scene specification.")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="scene specification (.prs)")
    common.add_argument("--models", help="object model file (default: models.pm next to the spec)")
    common.add_argument("--workspace", help="bounding box x0,y0,z0,x1,y1,z1 (default: 10 m cube)")
    common.add_argument("--collision-eps", type=float, default=DEFAULT_COLLISION_EPS)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--seed", type=int, default=0)
    sampling.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)
    sampling.add_argument("--mix-iters", type=int, default=None, help="hit-and-run steps (default 10*d^3)")

    s = sub.add_parser("check", parents=[common, sampling], help="parse and resolve a spec")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("generate", parents=[common, sampling], help="write sampled scenes as JSON")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--out", default="scenes")
    s.add_argument("--format", choices=["json"], default="json")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("baseline", parents=[common, sampling], help="compare with naive rejection sampling")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_baseline)

    s = sub.add_parser("validate", parents=[common], help="check a scene file against a spec")
    s.add_argument("scene", help="scene JSON file")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        _err(str(e))
        return e.code


if __name__ == "__main__":
    sys.exit(main())
