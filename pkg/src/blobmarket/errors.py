class BlobMarketError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(BlobMarketError, ValueError):
    pass


class EmptyParticipationError(BlobMarketError, ValueError):
    """No rollup is available to post blobs."""


class UnsortedRatesError(BlobMarketError, ValueError):
    pass


class InfeasibleTargetError(BlobMarketError):
    """Capped blob supply exceeds the target at every price."""


class NumericalError(BlobMarketError, RuntimeError):
    pass
