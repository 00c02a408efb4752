"""Exception types shared across the pipeline."""


class SoundtexError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SoundtexError):
    """An argument violates an operation's preconditions."""


class PipelineError(SoundtexError):
    """Stages were composed inconsistently (rate mismatch, ragged dims, ...)."""


class DataError(SoundtexError):
    """Input data is unusable (non-finite values, undecodable audio, ...)."""


class FormatError(SoundtexError):
    """A file does not look like the expected format."""


class CorruptionError(SoundtexError):
    """A file has the right format markers but inconsistent contents."""
