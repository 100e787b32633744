"""Typed errors raised by the parser, the entropy walk, and the cipher."""


class JpegCryptError(Exception):
    """Base class for every deliberate error in this package."""


class ParseError(JpegCryptError):
    """Structural problem in the JPEG container."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = "%s (at byte offset %d)" % (message, offset)
        super().__init__(message)
        self.offset = offset


class MissingSOI(ParseError):
    """File does not start with the FF D8 start-of-image marker."""


class UnexpectedEOF(ParseError):
    """A segment or scan runs past the end of the file."""


class MalformedSegment(ParseError):
    """A marker segment violates its own declared structure."""


class UnsupportedJpeg(ParseError):
    """Valid JPEG construct that is outside the supported baseline subset."""


class UnsupportedFrame(UnsupportedJpeg):
    """SOF marker other than baseline sequential SOF0 (progressive, lossless, ...)."""


class MissingSOF(ParseError):
    """Scan data appears before any frame header."""


class MissingHuffmanTable(ParseError):
    """Scan references a Huffman table id with no earlier DHT definition."""


class OverfullTable(JpegCryptError):
    """DHT declares more codes at some length than canonical assignment allows."""


class EmptyTable(JpegCryptError):
    """DHT declares a table with zero symbols."""


class DecodeError(JpegCryptError):
    """Problem while walking the entropy-coded data."""

    def __init__(self, message, bit_offset=None):
        if bit_offset is not None:
            message = "%s (at scan bit offset %d)" % (message, bit_offset)
        super().__init__(message)
        self.bit_offset = bit_offset


class InvalidCode(DecodeError):
    """Bit pattern matches no entry of the active Huffman table."""


class UnexpectedEnd(DecodeError):
    """Entropy-coded data exhausted in the middle of a code or value."""


class TooManyCoefficients(DecodeError):
    """Block coefficient index ran past 63; the stream is corrupt."""


class RestartMismatch(DecodeError):
    """Expected RSTn marker missing or out of modulo-8 sequence."""


class CorruptScan(DecodeError):
    """Scan violates byte-stuffing or padding rules."""


class LengthMismatch(JpegCryptError):
    """Bit string length does not match the declared category."""


class BadKeyLength(JpegCryptError):
    """Key is not 128 bits or tweak is not 64 bits."""


class KeystreamExhausted(JpegCryptError):
    """Keystream shorter than the number of bits the plan consumes."""
