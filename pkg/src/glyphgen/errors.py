"""Exception hierarchy shared across the package.

CLI exit codes map onto the three branches: ConfigError -> 2,
DataError -> 3, anything else -> 4.
"""


class GlyphgenError(Exception):
    """Base class for all package errors."""


class ConfigError(GlyphgenError):
    """Invalid or unresolvable configuration."""


class DataError(GlyphgenError):
    """Problems with user-supplied inputs (images, crops, transcriptions)."""


class DegenerateStroke(DataError):
    """A stroke collapsed to a single point and cannot be normalized."""


class InsufficientData(DataError):
    """Not enough samples for the requested fit."""


class InvalidProgram(GlyphgenError):
    """A stroke program references primitives or parts that do not exist."""


class EmptyGlyph(DataError):
    """An image contains no ink after binarization."""


class OffCanvas(GlyphgenError):
    """Too little of a rendered trajectory falls on the canvas."""


class DegenerateOutput(GlyphgenError):
    """A transform would produce an image smaller than one pixel."""


class EmptyLine(DataError):
    """Line composition was asked to place zero symbols."""


class PoolExhausted(DataError):
    """A required (class, source) symbol pool is missing or empty."""


class EmptyReference(DataError):
    """The reference transcription of an evaluated line is empty."""


class EmptyCorpus(DataError):
    """Corpus-level aggregation over zero lines."""


class LineTooNarrow(DataError):
    """A line image is narrower than every prototype."""


class MissingClass(DataError):
    """An ingested class directory contains no usable crops."""
