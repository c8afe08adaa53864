"""Domain error types shared across the toolkit.

Everything raised on bad inputs or violated contracts derives from
:class:`PcgError`, so callers (and the CLI) can distinguish domain errors
from genuine bugs or I/O failures.
"""


class PcgError(Exception):
    """Base class for all domain errors raised by pcgkit."""


class UnsupportedFormat(PcgError):
    """Audio container is readable but not a supported flavour (mono PCM16)."""


class CorruptHeader(PcgError):
    """Audio container header is malformed or truncated."""


class InvalidCutoff(PcgError):
    """Filter cutoff outside (0, rate/2) or bad tap count."""


class RateMismatch(PcgError):
    """Filter was designed for a different sample rate than the record."""


class InvalidFactor(PcgError):
    """Decimation factor is not a usable positive integer."""


class WindowTooLong(PcgError):
    """Window length exceeds the signal length."""


class NoSidelobe(PcgError):
    """Spectrum has no measurable side lobe above the numerical floor."""


class EmptySequence(PcgError):
    """Classifier input has no time steps."""


class SingleClassDataset(PcgError):
    """Operation requires examples of both classes."""


class LengthMismatch(PcgError):
    """Paired sequences have different lengths."""


class InvalidFraction(PcgError):
    """Split fraction leaves a train or test side empty."""


class InvalidConfig(PcgError):
    """Synthesis or run configuration violates its invariants."""
