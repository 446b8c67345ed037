"""Exception taxonomy for the llogl package."""


class LloglError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LloglError, ValueError):
    """Malformed argument: dimension mismatch, nonpositive scale, etc."""


class InvalidParamsError(LloglError, ValueError):
    """Parameter set violates a structural constraint."""


class OutOfDomainError(LloglError):
    """Query point falls outside the sampled domain."""


class DegenerateDomainError(LloglError):
    """Sample set too small or collapsed for a net construction."""


class UnsupportedModelError(LloglError):
    """Operation not available on this group model."""


class InvalidKernelError(LloglError):
    """Kernel family does not satisfy the precondition (mass, sign, ...)."""


class InvalidApertureError(LloglError):
    """Cone aperture incompatible with the requested operator."""


class DivergentInputError(LloglError):
    """An Orlicz integral overflowed or is non-finite."""


class ConstructionFailureError(LloglError):
    """A numerical construction missed its quality target.

    Carries the measured residual so callers can report it.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DecompositionQualityError(ConstructionFailureError):
    """Atomic decomposition reconstruction residual above threshold."""


class ConfigError(LloglError):
    """Experiment configuration file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
