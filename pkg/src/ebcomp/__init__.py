"""Error-bounded lossy compression for 1-3D float32 scientific arrays.

The main entry points are compress/decompress on Grid values; everything
else (predictor internals, entropy coding, the archive container, metrics)
is importable for finer-grained use.
"""

from .errors import (
    BadMagic,
    Corrupt,
    DimsMismatch,
    EbcompError,
    EmptyHistogram,
    Inconsistent,
    InvalidStride,
    IoFailure,
    LengthMismatch,
    LengthOverflow,
    MalformedSection,
    NonFiniteValue,
    NoNeighbor,
    OutOfRange,
    SizeMismatch,
    TruncatedStream,
    UnknownSymbol,
    VerificationFailed,
    VersionUnsupported,
)
from .grid import Dims, Grid, load_raw, store_raw, value_range
from .predictor import (
    ChunkLayout,
    Code,
    Compress,
    Decompress,
    LevelPlan,
    LevelStep,
    NATURAL,
    NOTAKNOT,
    OUTLIER,
    Outlier,
    PredictorConfig,
    QuantizedField,
    compress_predict,
    count_anchors,
    decompress_predict,
    default_layout,
    gather_anchors,
    interpolate_level,
    plan_levels,
    quantize,
    spline_predict,
)
from .lorenzo import lorenzo_predict_quantize, lorenzo_reconstruct
from .tuning import ProfileStats, compute_alpha, profile_samples, select_config
from .huffman import (
    Codebook,
    Histogram,
    build_codebook,
    build_histogram,
    huffman_decode,
    huffman_encode,
)
from .pass2 import pass2_decode, pass2_encode, register_pass2_codec
from .archive import (
    HEADER_SIZE,
    MAGIC,
    Archive,
    compact_outliers,
    expand_outliers,
    parse_archive,
    serialize_archive,
)
from .pipeline import compress, decompress, thread_count
from .metrics import (
    BoundReport,
    RateDistortionRecord,
    bit_rate,
    compression_ratio,
    psnr,
    rd_sweep,
    transfer_time,
    verify_error_bound,
    write_records_csv,
    write_records_jsonl,
)

__version__ = "0.1.0"
