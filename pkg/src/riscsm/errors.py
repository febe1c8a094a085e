"""Exception hierarchy shared by all modules."""


class RISCSMError(ValueError):
    """Base class for every error raised by :mod:`riscsm`."""


class NotHermitian(RISCSMError):
    pass


class IndefiniteMatrix(RISCSMError):
    pass


class NotPowerOfTwo(RISCSMError):
    pass


class InvalidDimensions(RISCSMError):
    pass


class IndexOutOfRange(RISCSMError, IndexError):
    pass


class DimensionMismatch(RISCSMError):
    pass


class LengthMismatch(RISCSMError):
    pass


class TooFewSignatures(RISCSMError):
    pass


class EmptyPilots(RISCSMError):
    pass


class OutOfSupport(RISCSMError):
    pass


class CandidateSetTooLarge(RISCSMError):
    pass


class InvalidParameters(RISCSMError):
    pass


class InsufficientPoints(RISCSMError):
    pass


class ConfigError(RISCSMError):
    """Invalid experiment configuration.

    ``path`` is the dotted location of the offending field (``"sweep.snr.step"``).
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
