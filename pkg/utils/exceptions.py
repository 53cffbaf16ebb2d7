class TropmatError(Exception):
    """Base class of every error raised by tropmat."""
    pass


class DimensionError(TropmatError):
    """Raised when vector or weight lengths do not match the ground set."""
    pass


class MatroidError(TropmatError):
    """Raised when a basis family or a query violates matroid axioms or ranges."""
    pass


class CircuitSetError(TropmatError):
    """Raised when a generator list is not a circuit-complete antichain."""
    pass


class CompletionError(TropmatError):
    """Raised when circuit completion exceeds its round cap."""
    pass


class FieldError(TropmatError):
    """Raised on unsupported field orders, field mismatch or enumeration overflow."""
    pass


class TruncationError(TropmatError):
    """Raised when a degree lies beyond the truncation degree or its cap."""
    pass


class HilbertMismatchError(TropmatError):
    """Raised when an initial ideal does not preserve the Hilbert function."""
    pass


class SpecializationError(TropmatError):
    """Raised when a specialized ideal fails the elimination check."""
    pass


class FanError(TropmatError):
    """Raised on weights outside a fan or disagreeing membership criteria."""
    pass


class CertificateError(TropmatError):
    """Raised when a certificate cannot be attempted on the given candidate."""
    pass


class PreconditionError(TropmatError):
    """Raised when an operation is called outside its documented precondition."""
    pass
