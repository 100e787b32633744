"""Size-preserving JPEG bitstream encryption.

Encrypts baseline JPEG files without re-encoding them: only the "additional
bits" of Huffman-coded coefficients are XORed with a keyed stream, and only
inside bytes where no setting of those bits can create or destroy an FF byte.
The output is the exact same length as the input, decodes in any JPEG viewer
(as a scrambled image), and decrypts back bit-for-bit under the same key.
"""

from .analysis import ScanReport, TargetStats, compute_report, render_table, trend_check
from .cipher import (
    EncryptionPlan,
    Keystream,
    SecretKey,
    apply_plan,
    build_plan,
    decrypt_file,
    encrypt_file,
    generate_keystream,
)
from .errors import (
    BadKeyLength,
    CorruptScan,
    DecodeError,
    EmptyTable,
    InvalidCode,
    JpegCryptError,
    KeystreamExhausted,
    LengthMismatch,
    MalformedSegment,
    MissingHuffmanTable,
    MissingSOF,
    MissingSOI,
    OverfullTable,
    ParseError,
    RestartMismatch,
    TooManyCoefficients,
    UnexpectedEnd,
    UnexpectedEOF,
    UnsupportedFrame,
    UnsupportedJpeg,
)
from .huffman import (
    AC,
    DC,
    BitStringCursor,
    CoefficientSymbol,
    HuffmanTable,
    additional_bits_to_value,
    build_table,
    decode_symbol,
)
from .markers import (
    BitstreamDocument,
    Element,
    FrameComponent,
    FrameInfo,
    ScanComponent,
    ScanInfo,
    locate_entropy_spans,
    parse_document,
    replace_entropy_span,
    serialize_document,
)
from .scanner import (
    ALL_ADDITIONAL,
    ALL_HUFFMAN,
    FIXED_BITS_ALL_ONES,
    MARKER_OR_PAD,
    NOT_TARGETED,
    STUFFED_ZERO,
    TARGET_AC,
    TARGET_BOTH,
    TARGET_DC,
    TARGETS,
    BitLabel,
    BitLabelMap,
    ByteClass,
    classify_byte,
    classify_entropy_bytes,
    label_document,
    label_span,
)

__version__ = "0.1.0"
