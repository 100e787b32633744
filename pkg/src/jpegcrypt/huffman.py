"""Canonical Huffman decode tables and symbol decoding for baseline JPEG.

A DHT segment stores a table as 16 code-length counts (BITS) followed by the
symbol values (HUFFVAL).  Codes are assigned canonically: shortest first,
counting upward within a length, shifted left when the length grows.  Decoding
therefore never needs a tree; a (length, code) lookup is enough.
"""

from dataclasses import dataclass, field

from .errors import EmptyTable, InvalidCode, LengthMismatch, OverfullTable, UnexpectedEnd

DC = "DC"
AC = "AC"


@dataclass(frozen=True)
class CoefficientSymbol:
    """Decoded (run, category) pair.

    `run` is the zero-run length ahead of an AC coefficient (always 0 for DC).
    `category` is the group number: the count of additional bits that follow
    the Huffman code and pick the exact value inside the group's range.
    """

    run: int
    category: int

    @property
    def is_eob(self):
        return self.run == 0 and self.category == 0

    @property
    def is_zrl(self):
        return self.run == 15 and self.category == 0


@dataclass(frozen=True)
class HuffmanTable:
    table_class: str              # DC or AC
    table_id: int                 # 0..3
    code_lengths: tuple           # BITS: count of codes per length 1..16
    symbols: tuple                # HUFFVAL in canonical order
    decode_map: dict              # code bit string -> symbol value
    _by_code: dict = field(repr=False)  # (length << 16) | code -> symbol value

    def __len__(self):
        return len(self.symbols)


def build_table(table_class, table_id, code_lengths, symbols):
    """Build a decode table from the BITS counts and HUFFVAL symbol list.

    Raises OverfullTable when some length declares more codes than canonical
    assignment has room for, EmptyTable when there are no symbols at all.
    """
    code_lengths = tuple(code_lengths)
    symbols = tuple(symbols)
    if len(code_lengths) != 16:
        raise ValueError("code_lengths must have 16 entries, got %d" % len(code_lengths))
    if sum(code_lengths) != len(symbols):
        raise ValueError(
            "BITS counts %d codes but %d symbols given" % (sum(code_lengths), len(symbols))
        )
    if not symbols:
        raise EmptyTable("%s table %d has no symbols" % (table_class, table_id))

    decode_map = {}
    by_code = {}
    code = 0
    idx = 0
    for length in range(1, 17):
        for _ in range(code_lengths[length - 1]):
            if code >> length:
                raise OverfullTable(
                    "%s table %d: no room for %d codes of length %d"
                    % (table_class, table_id, code_lengths[length - 1], length)
                )
            decode_map[format(code, "0%db" % length)] = symbols[idx]
            by_code[(length << 16) | code] = symbols[idx]
            code += 1
            idx += 1
        code <<= 1
    return HuffmanTable(table_class, table_id, code_lengths, symbols, decode_map, by_code)


def _decode_raw(table, read_bit):
    """Pull bits from `read_bit` until they form a code; return the raw symbol value."""
    lookup = table._by_code
    code = 0
    for length in range(1, 17):
        code = (code << 1) | read_bit()
        value = lookup.get((length << 16) | code, -1)
        if value >= 0:
            return value, code, length
    raise InvalidCode(
        "bit pattern %s matches no entry of %s table %d"
        % (format(code, "016b"), table.table_class, table.table_id)
    )


def decode_symbol(table, cursor):
    """Decode one symbol from a bit cursor.

    `cursor` is anything with a read_bit() -> 0|1 method.  Returns the decoded
    CoefficientSymbol and the exact code bits consumed, as a string.
    """
    value, code, length = _decode_raw(table, cursor.read_bit)
    if table.table_class == DC:
        if value > 15:
            raise InvalidCode("DC symbol value %d cannot encode a bit count" % value)
        symbol = CoefficientSymbol(0, value)
    else:
        symbol = CoefficientSymbol(value >> 4, value & 0x0F)
    return symbol, format(code, "0%db" % length)


def additional_bits_to_value(category, bits):
    """Apply the sign-extension rule to the additional bits of one coefficient.

    Leading bit 1 means the value is the unsigned reading; otherwise it is the
    unsigned reading minus (2^category - 1).  Category 0 carries no bits and is 0.
    """
    if len(bits) != category:
        raise LengthMismatch("category %d expects %d bits, got %d" % (category, category, len(bits)))
    if category == 0:
        return 0
    value = int(bits, 2)
    if bits[0] == "1":
        return value
    return value - (1 << category) + 1


class BitStringCursor:
    """Bit cursor over a string of '0'/'1' characters; handy for tests and tools."""

    def __init__(self, bits):
        self.bits = bits
        self.pos = 0

    def read_bit(self):
        if self.pos >= len(self.bits):
            raise UnexpectedEnd("bit string exhausted", self.pos)
        bit = 1 if self.bits[self.pos] == "1" else 0
        self.pos += 1
        return bit
