"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so that the command
line front end can report it without parsing messages.
"""


class OpGeomError(Exception):
    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(OpGeomError, ValueError):
    """Bad input: malformed spaces, mismatched shapes, violated hypotheses."""

    code = "validation_error"


class InvalidSpace(ValidationError):
    code = "invalid_space"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class HypothesisViolation(ValidationError):
    """The requested result does not apply to the given spaces or operator."""

    code = "hypothesis_violation"


class NotNormOne(HypothesisViolation):
    code = "not_norm_one"


class NotContraction(HypothesisViolation):
    code = "not_contraction"


class StrictlyConvex(HypothesisViolation):
    code = "strictly_convex"


class IsometryHasNoWitness(HypothesisViolation):
    code = "isometry_has_no_witness"


class NumericalFailure(OpGeomError, RuntimeError):
    code = "numerical_failure"


class MultistartFailure(NumericalFailure):
    code = "multistart_failure"
