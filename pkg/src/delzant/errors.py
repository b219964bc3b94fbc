"""Exception hierarchy. Every domain error carries a short machine-readable code."""


class DelzantError(Exception):
    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class DimensionMismatch(DelzantError, ValueError):
    code = "dimension_mismatch"


class NoPrimitiveGenerator(DelzantError, ValueError):
    code = "no_primitive_generator"


class DependentGenerators(DelzantError, ValueError):
    code = "dependent_generators"


class EmptyPolytope(DelzantError):
    code = "empty_polytope"


class Unbounded(DelzantError):
    code = "unbounded"


class InvalidParameter(DelzantError, ValueError):
    code = "invalid_parameter"


class NotFullDimensional(DelzantError):
    code = "not_full_dimensional"


class InvalidFan(DelzantError):
    code = "invalid_fan"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

    def to_json(self):
        out = super().to_json()
        if self.witness is not None:
            out["witness"] = [list(c) for c in self.witness]
        return out


class OutsideSupport(DelzantError):
    code = "outside_support"


class UnsupportedCone(DelzantError):
    code = "unsupported_cone"


class UnsupportedInput(DelzantError):
    code = "unsupported_input"


class Unsupported(DelzantError):
    code = "unsupported"


class NotSpanning(DelzantError):
    code = "not_spanning"


class ChopTooLarge(DelzantError):
    code = "chop_too_large"


class NotAVertex(DelzantError):
    code = "not_a_vertex"


class InternalInconsistency(DelzantError, RuntimeError):
    code = "internal_inconsistency"


class Cancelled(DelzantError):
    code = "cancelled"
