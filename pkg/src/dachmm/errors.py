"""Exception types shared across the package."""


class DachmmError(Exception):
    """Base class for all package errors."""


class InvalidParameter(DachmmError, ValueError):
    """A parameter is outside its admissible range."""


class LengthMismatch(DachmmError, ValueError):
    """Two sequences that must have equal length do not."""


class DegenerateObservation(DachmmError):
    """An observation has probability zero under the model."""


class NonErgodicChain(DachmmError):
    """The transition matrix has no unique stationary distribution."""


class DecodeExhausted(DachmmError):
    """The codeword ran out of bits before decoding finished (corrupted input)."""
