"""Dependency ordering and specifier semantics."""

from .core import (
    DEFAULT_WORKSPACE,
    ComponentUniform,
    Constant,
    Derived,
    PropertyDist,
    RegionUniform,
    ResolvedScene,
    UniformScalar,
    resolve,
    resolve_orientation,
    resolve_position,
    resolve_property,
    support_offset,
    support_targets,
)
from .deps import DependencyOrder, build_dependency_order
from .evaluate import ObjectView, Range, RangedVec, eval_expr

__all__ = [
    "DEFAULT_WORKSPACE", "ComponentUniform", "Constant", "Derived", "PropertyDist",
    "RegionUniform", "ResolvedScene", "UniformScalar", "resolve", "resolve_orientation",
    "resolve_position", "resolve_property", "support_offset", "support_targets",
    "DependencyOrder", "build_dependency_order", "ObjectView", "Range", "RangedVec",
    "eval_expr",
]
