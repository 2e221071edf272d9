"""Exception hierarchy shared across the package.

Every error raised by the library derives from EbcompError so callers (and
the CLI exit-code mapping) can distinguish our failures from genuine bugs.
"""


class EbcompError(Exception):
    """Base class for all ebcomp errors."""


# --- grid / raw file ingestion ---

class IoFailure(EbcompError):
    """Underlying file could not be read or written."""


class SizeMismatch(EbcompError):
    """Raw file length disagrees with the declared dimensions."""


class NonFiniteValue(EbcompError):
    """A NaN or Inf was found in the input data."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"non-finite value at flat index {index}")


class DimsMismatch(EbcompError):
    """Two grids that must share dimensions do not."""


# --- predictor ---

class InvalidStride(EbcompError):
    """Anchor stride is not a power of two >= 2."""


class NoNeighbor(EbcompError):
    """No interpolation neighbor available (traversal bug, not a data condition)."""


class Inconsistent(EbcompError):
    """Quantized field disagrees with the declared dimensions."""


# --- entropy codec ---

class OutOfRange(EbcompError):
    """A quant-code magnitude reaches the radius (predictor contract violation)."""


class EmptyHistogram(EbcompError):
    """Codebook requested for a histogram with no nonzero count."""


class LengthOverflow(EbcompError):
    """A Huffman code length would exceed 32 bits."""


class UnknownSymbol(EbcompError):
    """Symbol has no codebook entry."""


class TruncatedStream(EbcompError):
    """Bitstream ended before the expected symbol count was decoded."""


class MalformedSection(EbcompError):
    """A serialized archive section fails its internal invariants."""


class Corrupt(EbcompError):
    """Pass-2 stream cannot be decoded (literal run overruns input)."""


# --- archive container ---

class BadMagic(EbcompError):
    """Input is not an archive (magic bytes mismatch)."""


class VersionUnsupported(EbcompError):
    """Archive version not understood by this implementation."""


class LengthMismatch(EbcompError):
    """Section/payload lengths in the header disagree with the actual bytes."""


# --- verification ---

class VerificationFailed(EbcompError):
    """A round trip violated the error bound it promised."""
