from typing import Any, Dict, Optional


class SynthDGError(Exception):
    """Root of every error raised by synthdg."""


class UnknownGenerator(SynthDGError, ValueError):
    def __init__(self, name: str, generators: Any = None):
        self.name = name
        known = "" if generators is None else f", known generators are [{', '.join(generators)}]"
        super().__init__(f"Unknown generator [{name}]{known}")


class AlgebraMismatch(SynthDGError, ValueError):
    def __init__(self, expected: Any, actual: Any):
        super().__init__(f"Algebra mismatch: expected [{expected}], got [{actual}]")


class NonMonomialIdeal(SynthDGError, ValueError):
    pass


class NotPointed(SynthDGError, ValueError):
    pass


class RelationViolated(SynthDGError, ValueError):
    def __init__(self, relation: str, value: Any = None):
        self.relation = relation
        detail = "" if value is None else f" (maps to {value})"
        super().__init__(f"Relation [{relation}] does not map to 0{detail}")


class NotWeil(SynthDGError, ValueError):
    def __init__(self, algebra: Any, free: Any = ()):
        self.free = tuple(free)
        names = ", ".join(self.free)
        super().__init__(
            f"Algebra [{algebra}] is not a Weil algebra: no pure power of [{names}] lies in the ideal"
        )


class ComposabilityMismatch(SynthDGError, ValueError):
    pass


class DimensionMismatch(SynthDGError, ValueError):
    def __init__(self, what: str, expected: int, actual: int):
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {actual}")


class InexactPrimitive(SynthDGError, TypeError):
    def __init__(self, primitive: str, value: Any):
        super().__init__(
            f"Primitive [{primitive}] cannot be evaluated exactly at [{value}]; use float scalars"
        )


class NestingMismatch(SynthDGError, ValueError):
    pass


class FreeGeneratorRequired(SynthDGError, ValueError):
    def __init__(self, name: str):
        super().__init__(f"Generator [{name}] occurs in a relation and cannot be instantiated")


class BaseMismatch(SynthDGError, ValueError):
    def __init__(self, first: Any, second: Any):
        super().__init__(f"Tangents live over different base points: {first} and {second}")


class IndexOutOfRange(SynthDGError, IndexError):
    def __init__(self, index: int, low: int, high: int):
        super().__init__(f"Index {index} is outside of [{low}, {high}]")


class AntisymmetryViolated(SynthDGError, ValueError):
    pass


class NaturalityViolated(SynthDGError, ValueError):
    pass


class ConditionViolated(SynthDGError, ValueError):
    def __init__(self, message: str, witness: Optional[Dict[str, str]] = None):
        self.witness = witness or {}
        super().__init__(message)


class NonGenericBody(SynthDGError, TypeError):
    pass


class ExpressionError(SynthDGError, ValueError):
    pass


class DocumentError(SynthDGError, ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
