from typing import Any, ClassVar, Dict, Optional


class RittError(Exception):
    """
    Base class of every error raised by the workbench.
    The ``exit_code`` is what the command line reports when the error
    escapes a run.
    """

    exit_code: ClassVar[int] = 3

    def __init__(self, msg: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(msg)
        self.context = dict(context or {})


class BadParameters(RittError):
    """Raised when an argument is out of its documented range."""

    exit_code = 2


class ConfigError(RittError):
    """Raised for invalid run configurations."""

    exit_code = 2


class ParseError(RittError):
    """Raised when a matrix file cannot be parsed; carries the position."""

    exit_code = 2

    def __init__(self, msg: str, line: int = 0, offset: int = 0):
        super().__init__(msg, {"line": line, "offset": offset})
        self.line = line
        self.offset = offset


class ShapeError(RittError):
    """Raised for non-square matrix input."""

    exit_code = 2


class SingularResolvent(RittError):
    """zI - T has a pivot below tolerance: z is numerically in the spectrum."""


class NoConvergence(RittError):
    """An iteration hit its cap without meeting its tolerance."""


class SpectrumOutsideDisc(RittError):
    """The spectral radius bound exceeds 1 beyond tolerance."""


class EtaTooSmall(RittError):
    """The requested sector angle does not exceed the type angle."""

    exit_code = 2


class Overflow(RittError):
    """Powers of the operator grew past the overflow guard."""


class SpectrumNotUnimodular(RittError):
    """An eigenvalue is off the unit circle."""

    exit_code = 2


class QuadratureStall(RittError):
    """Panel halving exceeded the depth limit without meeting tolerance."""


class DomainError(RittError):
    """A special function was called outside its domain."""

    exit_code = 2


class SpectrumTouchesContour(RittError):
    """A resolvent solve on the integration contour was singular."""


class Divergence(RittError):
    """A square-function partial sum blew past its guard."""


class DegenerateC1(RittError):
    """c_{1,T} vanishes, so the shifted square-norm constant is undefined."""

    exit_code = 2


class PrecisionLoss(RittError):
    """The requested construction cannot be represented in binary64."""

    exit_code = 2
