"""Exception types shared across the toolkit."""


class FocalkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(FocalkitError):
    """Arguments outside an operation's domain (shape/tag mismatch, bad range)."""


class ChartError(FocalkitError):
    """A chart condition is violated (e.g. octonionic line without a real slot)."""


class ImmersionError(FocalkitError):
    """The differential of a chart is rank deficient at a sampled parameter."""


class IntegrationError(FocalkitError):
    """A geodesic left its chart and no atlas transition was available."""

    def __init__(self, message, chart=None, params=None):
        super().__init__(message)
        self.chart = chart
        self.params = params


class UnsupportedAmbientError(FocalkitError):
    """Operation not defined for this ambient model (e.g. circumradius off kappa=0)."""


class PreconditionError(DomainError):
    """A stated precondition failed; carries the violated quantity."""

    def __init__(self, message, quantity=None, value=None):
        super().__init__(message)
        self.quantity = quantity
        self.value = value
