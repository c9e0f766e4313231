"""Domain exceptions shared across the engine.

Every error carries optional structured context (a curve class, a degree, a
serialized residual) so the command-line layer can emit machine-readable
failure reports without string parsing.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all domain failures raised by this package."""

    module = "core"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def payload(self) -> dict:
        """JSON-ready description of the failure."""
        out = {
            "error": type(self).__name__,
            "module": self.module,
            "message": str(self),
        }
        for key in sorted(self.context):
            out[key] = _jsonable(self.context[key])
        return out


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, int):
        return f"{value.numerator}/{value.denominator}"
    return value


class SpaceMismatch(EngineError):
    """Operands belong to different ambient spaces."""

    module = "ring"


class TruncationMismatch(EngineError):
    """Series operands carry different truncation orders."""

    module = "series"


class NonInvertible(EngineError):
    """Laurent element has no scalar part at any level; no inverse exists."""

    module = "series"


class Unclassifiable(EngineError):
    """Line-bundle multidegree is neither nonnegative nor strictly negative."""

    module = "twist"


class Unsupported(EngineError):
    """Input is valid but outside the supported computational scope."""

    module = "twist"


class StructureViolation(EngineError):
    """Series lacks the two-level structure the normalizer relies on."""

    module = "mirror"


class NotNormalized(EngineError):
    """Series still has nonzero constant-level terms; normalize it first."""

    module = "invariants"


class Infeasible(EngineError):
    """Order-by-order solve hit a degree where no dial reaches the residual."""

    module = "invariants"


class DegreeOutOfScope(EngineError):
    """Fixed-point graph sums are only shipped for degrees 1 and 2."""

    module = "localization"


class WeightCollision(EngineError):
    """Drawn torus weights made a graph denominator vanish; redraw."""

    module = "localization"
