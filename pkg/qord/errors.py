"""
Error types for qord computations.

Every error carries a stable ``code`` string which is what the command line
front end reports in its JSON diagnostics.
"""

from typing import Any, Dict, List, Optional, Tuple


class QordError(Exception):
    """Base class for all domain errors raised by qord."""

    code = "error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the error to the JSON shape used on standard error.

        Returns:
            Dictionary with the error code, message and optional details
        """
        result = {"error": self.code, "message": self.message}
        if self.details:
            result["details"] = self.details
        return result


class InputError(QordError):
    """Malformed input document or argument."""
    code = "malformed-input"


class DimensionError(QordError):
    code = "dimension"


class ContainmentError(QordError):
    code = "containment"


class InfiniteIndexError(QordError):
    code = "infinite-index"


class NotAUnitError(QordError):
    code = "not-a-unit"


class FieldError(QordError):
    """A required root does not exist over the rationals."""
    code = "field"


class CompositionError(QordError):
    code = "composition"


class InversionError(QordError):
    code = "inversion"


class InvalidCharacteristicError(QordError):
    code = "invalid-characteristic-sequence"


class InconsistentMultiplicityError(QordError):
    code = "inconsistent-multiplicity"


class NotQuasiOrdinaryError(QordError):
    code = "not-quasi-ordinary"


class UnreducedParameterizationError(QordError):
    code = "unreduced-parameterization"


class UnsupportedDimensionError(QordError):
    code = "unsupported-dimension"


class NormalizationRequiredError(QordError):
    code = "normalization-required"


class UnsupportedClassError(QordError):
    code = "unsupported-class"


class InadmissibleChangeError(QordError):
    code = "inadmissible-change"


class ConstraintError(QordError):
    code = "constraint"


class NotEliminableError(QordError):
    code = "not-eliminable"


class UnsupportedError(QordError):
    code = "unsupported"


class IndependenceError(QordError):
    code = "independence"


class ConvergenceError(QordError):
    """The residual loop of an elimination did not reach zero."""
    code = "convergence"


class TemplateMismatchError(QordError):
    """A computed result contradicts the classification tables (a bug)."""
    code = "internal-consistency"


class RejectionReport:
    """Collects every violated condition found while validating input."""

    def __init__(self):
        self.violations: List[Tuple[type, str]] = []

    def add(self, error_type: type, message: str):
        self.violations.append((error_type, message))

    def __bool__(self) -> bool:
        return bool(self.violations)

    def to_list(self) -> List[Dict[str, str]]:
        return [{"code": error_type.code, "message": message}
                for error_type, message in self.violations]

    def raise_first(self):
        """Raise the error of the first violation with the full report attached."""
        if not self.violations:
            return
        error_type, message = self.violations[0]
        raise error_type(message, details={"violations": self.to_list()})
