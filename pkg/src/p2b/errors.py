"""Exception types shared across the package."""


class P2BError(Exception):
    """Base class for all package errors."""


class SchemaError(P2BError):
    """Parameter vector does not match a style's schema."""


class UnknownStyleError(P2BError):
    """Style id not present in the registry."""


class GeometryError(P2BError):
    """Requested geometry cannot be built (overlaps, overflow, ...)."""


class SilhouetteFormatError(P2BError):
    """Malformed silhouette file. Carries the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ImageDecodeError(P2BError):
    """Byte stream is not a decodable PNG or binary PPM."""


class EmptyMaskError(P2BError):
    """Operation requires at least one set pixel."""


class MaskDimensionError(P2BError):
    """Masks passed to a binary operation have different dimensions."""


class DegenerateCameraError(P2BError):
    """Camera placed inside the mesh bounding sphere."""


class DegenerateHomographyError(P2BError):
    """Quad points are collinear; no homography exists."""


class NoStructureError(P2BError):
    """Image has no usable gradient structure."""


class ValidationError(P2BError):
    """Bad input to an operation (bounds, budget, missing file, ...)."""


class TransitionError(P2BError):
    """Illegal job status transition."""


class JobNotFoundError(P2BError):
    """Unknown job id."""


class RegistrationError(P2BError):
    """Worker registration rejected (duplicate slot or worker id)."""


class LibraryError(P2BError):
    """Style library missing or malformed."""


class StageError(P2BError):
    """A pipeline stage failed. Carries the stage name and diagnostics."""

    def __init__(self, stage: str, message: str, diagnostics=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.diagnostics = diagnostics or {}
