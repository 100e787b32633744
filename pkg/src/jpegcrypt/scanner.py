"""Per-bit labeling of entropy-coded data and the encryptability classification.

The walk decodes the scan exactly as a baseline decoder would — MCU by MCU,
block by block — but instead of reconstructing coefficients it records what
each bit *is*: part of a Huffman code, an additional (amplitude) bit, a
stuffed zero byte, 1-fill padding, or a restart marker.  Classification then
decides per byte whether its additional bits can be XORed without ever
creating or destroying an FF byte, which is what keeps the file size fixed.
"""

import json
import math
from dataclasses import dataclass

from .errors import (
    CorruptScan,
    InvalidCode,
    RestartMismatch,
    TooManyCoefficients,
    UnexpectedEnd,
)
from .huffman import AC, DC, _decode_raw
from .markers import locate_entropy_spans

# Per-bit label codes.
HUFF = 1      # bit of a Huffman code
ADD_DC = 2    # additional bit of a DC difference
ADD_AC = 3    # additional bit of an AC coefficient
STUFF = 4     # bit of a stuffed 00 byte after FF
PAD = 5       # 1-fill bit before a restart marker or at the scan tail
RST = 6       # bit of a restart marker byte

LABEL_CHARS = {HUFF: "H", ADD_DC: "A", ADD_AC: "A", STUFF: "S", PAD: "P", RST: "R"}

# Encryption targets.
TARGET_DC = "dc"
TARGET_AC = "ac"
TARGET_BOTH = "both"
TARGETS = (TARGET_DC, TARGET_AC, TARGET_BOTH)

# Exclusion reasons.
ALL_HUFFMAN = "all-huffman"
ALL_ADDITIONAL = "all-additional"
STUFFED_ZERO = "stuffed-zero"
FIXED_BITS_ALL_ONES = "fixed-bits-all-ones"
MARKER_OR_PAD = "marker-or-pad"
NOT_TARGETED = "not-targeted"

# Reasons that count as "excluded from encryption" in reports: a byte holds
# target additional bits but flipping them could change the FF census.
EXCLUDED_REASONS = frozenset({ALL_ADDITIONAL, FIXED_BITS_ALL_ONES})

_STUFF8 = bytes([STUFF]) * 8
_RST16 = bytes([RST]) * 16


@dataclass(frozen=True)
class BitLabel:
    """Label of a single bit; `coeff_class` and `component` apply to ADD bits."""

    kind: int
    coeff_class: str    # DC, AC, or "" for non-ADD bits
    component: int

    @property
    def char(self):
        return LABEL_CHARS[self.kind]


@dataclass(frozen=True)
class BitLabelMap:
    """Every bit of one entropy span, labeled.

    `labels` holds one label code per bit (8 per span byte); `comps` the
    component index per bit; `symbols` the decoded symbol stream, two bytes
    per symbol: (component << 5 | is_dc << 4 | run, category).
    """

    span_offset: int
    span: bytes
    labels: bytes
    comps: bytes
    symbols: bytes

    def label_at(self, bit_index):
        kind = self.labels[bit_index]
        if kind == ADD_DC:
            return BitLabel(kind, DC, self.comps[bit_index])
        if kind == ADD_AC:
            return BitLabel(kind, AC, self.comps[bit_index])
        return BitLabel(kind, "", 0)

    def byte_view(self, byte_index):
        """(label codes, bit values) of one span byte, MSB first."""
        value = self.span[byte_index]
        labels = tuple(self.labels[byte_index * 8:byte_index * 8 + 8])
        values = tuple((value >> (7 - k)) & 1 for k in range(8))
        return labels, values

    def label_string(self, byte_index):
        return "".join(LABEL_CHARS[c] for c in self.labels[byte_index * 8:byte_index * 8 + 8])


@dataclass(frozen=True)
class ByteClass:
    """Verdict for one span byte: encryptable with a bit mask, or excluded."""

    offset: int         # byte offset within the span
    value: int
    mask: int           # nonzero selects the target additional bits
    reason: str         # exclusion reason; None when encryptable

    @property
    def encryptable(self):
        return self.mask != 0


class _SpanWalk:
    """Bit cursor over span bytes that records a label for every bit it passes.

    Stuffed 00 bytes are skipped transparently (and labeled) the moment an FF
    data byte completes, which mirrors how an encoder emits them.
    """

    def __init__(self, span, labels, comps):
        self.span = span
        self.n = len(span)
        self.labels = labels
        self.comps = comps
        self.byte_i = 0
        self.bit_i = 0
        self.label = HUFF
        self.comp = 0

    def bit_offset(self):
        return (self.byte_i << 3) | self.bit_i

    def read_bit(self):
        i = self.byte_i
        if i >= self.n:
            raise UnexpectedEnd("scan data exhausted mid-symbol", i << 3)
        k = self.bit_i
        pos = (i << 3) | k
        self.labels[pos] = self.label
        self.comps[pos] = self.comp
        if k == 7:
            self._finish_byte()
        else:
            self.bit_i = k + 1
        return (self.span[i] >> (7 - k)) & 1

    def _finish_byte(self):
        i = self.byte_i
        done = self.span[i]
        i += 1
        if done == 0xFF:
            if i >= self.n or self.span[i] != 0x00:
                raise CorruptScan("FF data byte not followed by a stuffed 00", i << 3)
            self.labels[i << 3:(i + 1) << 3] = _STUFF8
            i += 1
        self.byte_i = i
        self.bit_i = 0

    def pad_to_boundary(self):
        if self.bit_i == 0:
            return
        i = self.byte_i
        value = self.span[i]
        for k in range(self.bit_i, 8):
            if not (value >> (7 - k)) & 1:
                raise CorruptScan("padding bit is 0, expected 1-fill", (i << 3) | k)
            self.labels[(i << 3) | k] = PAD
        self._finish_byte()

    def read_restart(self, expected):
        i = self.byte_i
        if i + 2 > self.n:
            raise RestartMismatch("scan ends where RST%d was expected" % expected, i << 3)
        if self.span[i] != 0xFF or self.span[i + 1] != 0xD0 + expected:
            raise RestartMismatch(
                "expected RST%d, found %02X %02X" % (expected, self.span[i], self.span[i + 1]),
                i << 3,
            )
        self.labels[i << 3:(i + 2) << 3] = _RST16
        self.byte_i = i + 2


def _block_template(frame_info, scan_info):
    """Expand the MCU structure into (total_mcus, per-MCU block component indices).

    Interleaved scans contribute h*v blocks per component per MCU; a
    single-component scan is non-interleaved, one block per MCU over the
    component's own block grid.
    """
    by_id = {c.comp_id: (idx, c) for idx, c in enumerate(frame_info.components)}
    if len(scan_info.components) == 1:
        sc = scan_info.components[0]
        idx, fc = by_id[sc.comp_id]
        cols = math.ceil(math.ceil(frame_info.width * fc.h / frame_info.max_h) / 8)
        rows = math.ceil(math.ceil(frame_info.height * fc.v / frame_info.max_v) / 8)
        return cols * rows, ((idx, sc),)
    mcus_x, mcus_y = frame_info.mcu_grid
    template = []
    for sc in scan_info.components:
        idx, fc = by_id[sc.comp_id]
        template.extend([(idx, sc)] * (fc.h * fc.v))
    return mcus_x * mcus_y, tuple(template)


def label_span(span, scan_info, frame_info, tables, span_offset=0):
    """Label every bit of one entropy-coded span.

    `tables` maps (class, id) to HuffmanTable as defined before the SOS.
    Raises the usual decode errors on corrupt data; on success every one of
    the 8 * len(span) bits carries exactly one label.
    """
    nbits = len(span) * 8
    labels = bytearray(nbits)
    comps = bytearray(nbits)
    symbols = bytearray()
    walk = _SpanWalk(span, labels, comps)
    total_mcus, template = _block_template(frame_info, scan_info)
    pairs = tuple(
        (idx, tables[(DC, sc.dc_table_id)], tables[(AC, sc.ac_table_id)]) for idx, sc in template
    )
    interval = scan_info.restart_interval
    read_bit = walk.read_bit

    for mcu in range(total_mcus):
        if interval and mcu and mcu % interval == 0:
            walk.pad_to_boundary()
            walk.read_restart((mcu // interval - 1) & 7)
        for comp_idx, dc_table, ac_table in pairs:
            walk.comp = comp_idx
            walk.label = HUFF
            category, _, _ = _decode_raw(dc_table, read_bit)
            if category > 15:
                raise InvalidCode(
                    "DC symbol value %d cannot encode a bit count" % category, walk.bit_offset()
                )
            symbols.append(comp_idx << 5 | 0x10)
            symbols.append(category)
            if category:
                walk.label = ADD_DC
                for _ in range(category):
                    read_bit()
                walk.label = HUFF
            k = 1
            while k <= 63:
                value, _, _ = _decode_raw(ac_table, read_bit)
                run, category = value >> 4, value & 0x0F
                symbols.append(comp_idx << 5 | run)
                symbols.append(category)
                if category == 0:
                    # run 15 skips 16 zeros (ZRL); anything else ends the block
                    # early (EOB), matching what conformant decoders accept.
                    if run != 15:
                        break
                    k += 16
                    if k > 64:
                        raise TooManyCoefficients("ZRL ran past coefficient 63", walk.bit_offset())
                    continue
                k += run
                if k > 63:
                    raise TooManyCoefficients(
                        "coefficient index %d past end of block" % k, walk.bit_offset()
                    )
                walk.label = ADD_AC
                for _ in range(category):
                    read_bit()
                walk.label = HUFF
                k += 1

    walk.pad_to_boundary()
    if walk.byte_i != walk.n:
        raise CorruptScan(
            "%d bytes of scan data left after the last MCU" % (walk.n - walk.byte_i),
            walk.byte_i << 3,
        )
    return BitLabelMap(span_offset, bytes(span), bytes(labels), bytes(comps), bytes(symbols))


def label_document(doc):
    """Label every entropy span of a parsed document.

    Returns a list of (element index, BitLabelMap); baseline files have at
    most one entry.
    """
    out = []
    for element, scan_info, frame_info in locate_entropy_spans(doc):
        span_index = doc.scan[0]
        out.append(
            (span_index, label_span(element.raw, scan_info, frame_info, doc.huffman_tables, element.offset))
        )
    return out


def classify_byte(labels8, value, target):
    """Classify one labeled byte; returns (mask, reason).

    Encryptable iff the byte carries at least one additional bit of the target
    class, at least one bit that is not an additional bit, and at least one of
    those non-additional bits is 0 — then no setting of the masked bits can
    turn the byte into FF, and the byte cannot have been FF to begin with.
    PAD, RST and STUFF bits count as non-additional fixed bits.
    """
    add_mask = 0
    target_mask = 0
    fixed_zero = False
    has_huff = False
    all_stuff = True
    want_dc = target != TARGET_AC
    want_ac = target != TARGET_DC
    for k in range(8):
        label = labels8[k]
        bit = 0x80 >> k
        if label == ADD_DC:
            add_mask |= bit
            all_stuff = False
            if want_dc:
                target_mask |= bit
        elif label == ADD_AC:
            add_mask |= bit
            all_stuff = False
            if want_ac:
                target_mask |= bit
        else:
            if label == HUFF:
                has_huff = True
            if label != STUFF:
                all_stuff = False
            if not value & bit:
                fixed_zero = True
    if add_mask == 0 and not has_huff:
        return 0, STUFFED_ZERO if all_stuff else MARKER_OR_PAD
    if add_mask == 0:
        return 0, ALL_HUFFMAN
    if target_mask == 0:
        return 0, NOT_TARGETED
    if add_mask == 0xFF:
        return 0, ALL_ADDITIONAL
    if not fixed_zero:
        return 0, FIXED_BITS_ALL_ONES
    return target_mask, None


def classify_entropy_bytes(label_map, target=TARGET_BOTH):
    """Classify every byte of a labeled span for one encryption target."""
    if target not in TARGETS:
        raise ValueError("target must be one of %s" % (TARGETS,))
    span = label_map.span
    labels = label_map.labels
    out = []
    for i in range(len(span)):
        mask, reason = classify_byte(labels[i * 8:i * 8 + 8], span[i], target)
        out.append(ByteClass(i, span[i], mask, reason))
    return out


def dump_byte_rows(label_map, classes):
    """Yield one dict per span byte for the debug dump (text or JSON lines)."""
    for bc in classes:
        yield {
            "offset": label_map.span_offset + bc.offset,
            "span_offset": bc.offset,
            "hex": "%02X" % bc.value,
            "labels": label_map.label_string(bc.offset),
            "verdict": "encrypt" if bc.encryptable else "skip",
            "mask": "%02X" % bc.mask if bc.encryptable else None,
            "reason": bc.reason,
        }


def format_dump_line(row, fmt="text"):
    if fmt == "json":
        return json.dumps(row, sort_keys=True)
    if row["verdict"] == "encrypt":
        tail = "encrypt mask=%s" % row["mask"]
    else:
        tail = "skip    %s" % row["reason"]
    return "%08d  %s  %s  %s" % (row["offset"], row["hex"], row["labels"], tail)
