"""Exception hierarchy. Every error is also a ``ValueError``."""


class SepchkError(ValueError):
    pass


class AmbientMismatchError(SepchkError):
    pass


class DimensionError(SepchkError):
    pass


class InvalidDesignationError(SepchkError):
    pass


class InvalidPairError(SepchkError):
    pass


class InvalidCoverError(SepchkError):
    pass


class NotACycleError(SepchkError):
    pass


class DegenerateCellError(SepchkError):
    pass


class ResolutionError(SepchkError):
    """U's raster came out empty at the chosen cell size."""


class InconsistentExtensionError(SepchkError):
    pass


class FormatError(SepchkError):
    """Malformed input file."""


class GridError(SepchkError):
    """Grid box does not strictly contain the image."""
