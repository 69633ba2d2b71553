"""Exception hierarchy shared by all fr3kit modules."""


class Fr3kitError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(Fr3kitError, ValueError):
    """Invalid band plan, scenario, or configuration document."""

    def __init__(self, message, key_path=None):
        super().__init__(message)
        self.key_path = key_path


class DomainError(Fr3kitError, ValueError):
    """An argument lies outside the domain of a formula."""


class InvalidSchemeError(Fr3kitError, ValueError):
    pass


class ModeMismatchError(Fr3kitError, ValueError):
    pass


class BeamwidthUndefinedError(Fr3kitError):
    """No -3 dB crossing exists within the visible region."""


class NumericalAccuracyError(Fr3kitError):
    pass


class EmptyChannelError(Fr3kitError):
    pass


class NormalizationError(Fr3kitError):
    pass


class ComparisonError(Fr3kitError):
    pass


class ApertureTooSmallError(Fr3kitError):
    pass
