"""Syntax tree for specs and model files.

Source locations are stored on nodes but excluded from equality, so two
parses of differently formatted but equivalent text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

DIRECTIONS = ("left", "right", "ahead", "behind", "above", "below")
AXES = ("x", "y", "z")
POSITION = "position"
ORIENTATION = "orientation"
DIMENSIONS = ("width", "length", "height")


def _loc():
    return field(default=0, compare=False, repr=False)


# -- expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class NumLit:
    value: float


@dataclass(frozen=True)
class RangeLit:
    lo: float
    hi: float


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class Vec3Lit:
    x: "Expr"
    y: "Expr"
    z: "Expr"

    @property
    def components(self) -> tuple:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class VarRef:
    name: str
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class AnchorExpr:
    tags: tuple[str, ...]
    target: VarRef


@dataclass(frozen=True)
class BinOp:
    op: str  # "+" or "-"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    """Region constructor such as ``Cuboid(...)``."""

    name: str
    args: tuple["Expr", ...]


Expr = Union[NumLit, RangeLit, StringLit, Vec3Lit, VarRef, AnchorExpr, BinOp, Call]


# -- specifiers ----------------------------------------------------------------

@dataclass(frozen=True)
class With:
    name: str
    value: Expr
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class At:
    value: Expr
    relative_to: Expr | None = None
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class Beyond:
    target: Expr
    by: Expr
    origin: Expr
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class In:
    region: Expr
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class Directional:
    direction: str
    of: Expr
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class On:
    target: Expr
    completely: bool = False
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class AlignedWith:
    target: Expr
    axis: str
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class Facing:
    direction: Expr
    line: int = _loc()
    col: int = _loc()


@dataclass(frozen=True)
class FacingToward:
    target: Expr
    line: int = _loc()
    col: int = _loc()


Specifier = Union[With, At, Beyond, In, Directional, On, AlignedWith, Facing, FacingToward]

POSITION_SPECIFIERS = (At, Beyond, In, Directional, On, AlignedWith)
ORIENTATION_SPECIFIERS = (Facing, FacingToward)


def is_position_specifier(s) -> bool:
    return isinstance(s, POSITION_SPECIFIERS) or (isinstance(s, With) and s.name == POSITION)


def is_orientation_specifier(s) -> bool:
    return isinstance(s, ORIENTATION_SPECIFIERS) or (isinstance(s, With) and s.name == ORIENTATION)


# -- declarations --------------------------------------------------------------

@dataclass(frozen=True)
class ModelClass:
    name: str
    defaults: dict[str, Expr]
    line: int = _loc()


@dataclass(frozen=True)
class ObjectDecl:
    binding: str | None
    name: str
    class_name: str
    specifiers: tuple[Specifier, ...]
    line: int = _loc()
    col: int = _loc()

    @property
    def position_specifiers(self) -> list:
        return [s for s in self.specifiers if is_position_specifier(s)]

    @property
    def orientation_specifier(self):
        return next((s for s in self.specifiers if is_orientation_specifier(s)), None)

    def with_value(self, prop: str):
        return next((s.value for s in self.specifiers if isinstance(s, With) and s.name == prop), None)


@dataclass(frozen=True)
class SpecAST:
    model_classes: dict[str, ModelClass]
    declarations: tuple[ObjectDecl, ...]
    source_hash: str = field(default="", compare=False)

    def decl(self, name: str) -> ObjectDecl:
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)

    def properties(self, decl: ObjectDecl) -> list[str]:
        """Every property the object carries: model defaults, ``with`` additions, pose."""
        props = list(self.model_classes[decl.class_name].defaults)
        for s in decl.specifiers:
            if isinstance(s, With) and s.name not in props:
                props.append(s.name)
        for p in (POSITION, ORIENTATION):
            if p not in props:
                props.append(p)
        return props
