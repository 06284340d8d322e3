"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by recurb."""


class InputError(GeometryError, ValueError):
    """Malformed input: wrong shapes, unknown ids, out-of-range params."""


class PreconditionError(GeometryError, ValueError):
    """A documented precondition does not hold (e.g. point off the model)."""


class DomainError(GeometryError, ValueError):
    """A finite-difference stencil leaves the chart's parameter domain."""


class EvaluationError(GeometryError, ArithmeticError):
    """The chart returned non-finite values."""


class DegenerateImmersionError(GeometryError, ArithmeticError):
    """Induced metric is singular: the chart is not an immersion here."""


class FrameError(GeometryError, ArithmeticError):
    """The seed basis does not span the normal space; reseed."""


class GaugeError(GeometryError, ArithmeticError):
    """Normal frame flipped sign across a differencing stencil."""


class SamplingError(GeometryError, ValueError):
    """Too few sample points for a grid-level statistic."""


class ConfigError(GeometryError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""
