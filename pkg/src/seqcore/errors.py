"""Exception hierarchy shared across the toolkit."""


class SeqcoreError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(SeqcoreError):
    """Invalid or inconsistent configuration values."""


class IoError(SeqcoreError):
    """File could not be read or written."""


class FormatError(SeqcoreError):
    """File content does not match the expected binary/JSON layout."""


class VersionError(FormatError):
    """File version is not supported by this build."""


class GeometryError(SeqcoreError):
    """Feature maps disagree on the image geometry they describe."""


class DimensionError(SeqcoreError):
    """Array shapes or vector dimensions do not match."""


class NonFiniteError(SeqcoreError):
    """NaN or infinity where finite values are required."""


class NotFullError(SeqcoreError):
    """Operation requires a bank filled to capacity."""


class MixedExtractorError(SeqcoreError):
    """Banks built from different extractor specs cannot be combined."""


class SizeError(SeqcoreError):
    """Collection is too small for the requested reduction."""


class EmptyValidationError(SeqcoreError):
    """Threshold estimation needs at least one positive ground-truth pixel."""
