"""Expression evaluation against already-placed objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .. import convex
from ..errors import MissingProperty, TypeMismatch, UnknownVariable
from ..geom import OBB, anchor_point, rotation_from_forward
from ..lang import ast as A


@dataclass(frozen=True)
class Range:
    lo: float
    hi: float


@dataclass(frozen=True, eq=False)
class RangedVec:
    """A vector whose masked components are uniform ranges."""

    lo: np.ndarray
    hi: np.ndarray
    mask: tuple[bool, bool, bool]

    def shifted(self, offset: np.ndarray) -> "RangedVec":
        return RangedVec(self.lo + offset, self.hi + offset, self.mask)


@dataclass
class ObjectView:
    """Whatever is known so far about one object in the scene being built."""

    name: str
    cls: str
    values: dict = field(default_factory=dict)

    def require(self, prop: str):
        if prop not in self.values:
            raise MissingProperty(f"{self.name}.{prop} is not available yet")
        return self.values[prop]

    @property
    def position(self) -> np.ndarray:
        return self.require(A.POSITION)

    @property
    def rotation(self) -> np.ndarray:
        return self.require(A.ORIENTATION)

    @property
    def dims(self) -> np.ndarray:
        return np.array([float(self.require(k)) for k in A.DIMENSIONS])

    @property
    def obb(self) -> OBB:
        return OBB.from_dims(self.position, self.rotation, self.dims)


Value = float | Range | np.ndarray | RangedVec | str | ObjectView | object


def as_point(v) -> np.ndarray:
    """Coerce an object (its position) or vector value to a concrete point."""
    if isinstance(v, ObjectView):
        return v.position
    if isinstance(v, np.ndarray) and v.shape == (3,):
        return v
    raise TypeMismatch(f"expected a vector or object, got {describe(v)}")


def describe(v) -> str:
    match v:
        case float():
            return "number"
        case Range():
            return "range"
        case str():
            return "string"
        case RangedVec():
            return "vector with ranges"
        case np.ndarray():
            return "vector"
        case ObjectView():
            return f"object {v.name!r}"
    return type(v).__name__


def _vec_component(v) -> float | Range:
    if isinstance(v, (float, int)):
        return float(v)
    if isinstance(v, Range):
        return v
    raise TypeMismatch(f"vector components must be numbers or ranges, got {describe(v)}")


def _arith(op: str, a, b):
    sign = 1.0 if op == "+" else -1.0
    if isinstance(a, ObjectView):
        a = a.position
    if isinstance(b, ObjectView):
        b = b.position
    if isinstance(a, float) and isinstance(b, float):
        return a + sign * b
    if isinstance(a, Range) and isinstance(b, float):
        return Range(a.lo + sign * b, a.hi + sign * b)
    if isinstance(a, float) and isinstance(b, Range) and op == "+":
        return Range(b.lo + a, b.hi + a)
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a + sign * b
    if isinstance(a, RangedVec) and isinstance(b, np.ndarray):
        return a.shifted(sign * b)
    if isinstance(a, np.ndarray) and isinstance(b, RangedVec) and op == "+":
        return b.shifted(a)
    raise TypeMismatch(f"cannot apply {op!r} to {describe(a)} and {describe(b)}")


def eval_expr(e: A.Expr, ctx: Mapping[str, ObjectView]) -> Value:
    match e:
        case A.NumLit(value=v):
            return float(v)
        case A.RangeLit(lo=lo, hi=hi):
            return Range(float(lo), float(hi))
        case A.StringLit(value=s):
            return s
        case A.Vec3Lit():
            comps = [_vec_component(eval_expr(c, ctx)) for c in e.components]
            if not any(isinstance(c, Range) for c in comps):
                return np.array(comps, dtype=float)
            lo = np.array([c.lo if isinstance(c, Range) else c for c in comps])
            hi = np.array([c.hi if isinstance(c, Range) else c for c in comps])
            return RangedVec(lo, hi, tuple(isinstance(c, Range) for c in comps))
        case A.VarRef(name=n):
            if n not in ctx:
                raise UnknownVariable(f"unknown variable {n!r}", e.line or None, e.col or None)
            return ctx[n]
        case A.AnchorExpr(tags=tags, target=t):
            obj = eval_expr(t, ctx)
            return anchor_point(obj.obb, tags)
        case A.BinOp(op=op, left=l, right=r):
            return _arith(op, eval_expr(l, ctx), eval_expr(r, ctx))
        case A.Call(name=name, args=args):
            return _region(name, [eval_expr(a, ctx) for a in args])
    raise TypeError(f"not an expression: {e!r}")


_ARITY = {"Cuboid": 3, "Rect3D": 3, "Halfspace": 2, "All": 0, "Empty": 0}


def _region(name: str, args: list):
    if len(args) != _ARITY[name]:
        raise TypeMismatch(f"{name} takes {_ARITY[name]} arguments, got {len(args)}")
    pts = [as_point(a) for a in args]
    match name:
        case "Cuboid":
            return convex.Cuboid(pts[0], rotation_from_forward(pts[1]), pts[2])
        case "Rect3D":
            return convex.Rect3D(pts[0], rotation_from_forward(pts[1]), pts[2][:2])
        case "Halfspace":
            return convex.Halfspace(pts[0], pts[1])
        case "All":
            return convex.All()
        case "Empty":
            return convex.Empty()
    raise TypeMismatch(f"unknown region constructor {name!r}")


