"""Exception hierarchy.

Errors fall into two families that the CLI maps to different exit codes:
syntax errors (lexing/parsing) and semantic errors (anything that parses but
cannot be given a meaning or cannot be sampled).
"""

from __future__ import annotations


class SceneSpecError(Exception):
    """Base class for every error raised by this package."""


class LocatedError(SceneSpecError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        if line is None:
            where = ""
        elif col is None:
            where = f"line {line}: "
        else:
            where = f"{line}:{col}: "
        super().__init__(f"{where}{message}")


# -- syntax ------------------------------------------------------------------

class SyntaxLevelError(LocatedError):
    pass


class LexError(SyntaxLevelError):
    pass


class ParseError(SyntaxLevelError):
    pass


# -- semantic ----------------------------------------------------------------

class SemanticError(LocatedError):
    pass


class UnknownClass(SemanticError):
    pass


class UnknownVariable(SemanticError):
    pass


class DuplicateClass(SemanticError):
    pass


class DuplicateProperty(SemanticError):
    pass


class DuplicateVariable(SemanticError):
    pass


class MultipleOrientationSpecifiers(SemanticError):
    pass


class TypeMismatch(SemanticError):
    pass


class CyclicDependency(SemanticError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        nodes = " -> ".join(f"{o}.{p}" for o, p in self.cycle)
        super().__init__(f"cyclic dependency: {nodes}")


class EmptyCombinedRegion(SemanticError):
    def __init__(self, obj: str, specifiers, line: int | None = None):
        self.obj = obj
        self.specifiers = list(specifiers)
        super().__init__(
            f"position region of {obj!r} is empty; contributing specifiers: "
            + "; ".join(self.specifiers),
            line,
        )


class IncompatibleCarriers(SemanticError):
    pass


class ConstantViolatesConstraint(SemanticError):
    pass


class MissingProperty(SemanticError):
    pass


# -- geometry ----------------------------------------------------------------

class GeometryError(SceneSpecError):
    pass


class ZeroVector(GeometryError):
    pass


class ConflictingTags(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class EmptyRegion(GeometryError):
    pass


class UnboundedRegion(GeometryError):
    pass


class UnboundedObject(GeometryError):
    pass


class UnboundedDirection(GeometryError):
    pass


# -- sampling ----------------------------------------------------------------

class RetriesExhausted(SceneSpecError):
    def __init__(self, max_retries: int, tally: dict, seed: int | None = None):
        self.max_retries = max_retries
        self.tally = dict(tally)
        self.seed = seed
        super().__init__(
            f"no collision-free scene after {max_retries} redraws (seed={seed}, tally={self.tally})"
        )


class BudgetExhausted(SceneSpecError):
    def __init__(self, budget: int, counts: dict):
        self.budget = budget
        self.counts = dict(counts)
        super().__init__(f"no accepted scene within {budget} draws (rejections={self.counts})")


class SpecSceneMismatch(SceneSpecError):
    pass
