"""Bit-exact JPEG container parsing: markers, segments, and entropy-coded spans.

The parser splits a file into an ordered list of elements whose raw bytes
concatenate back to the original file, byte for byte.  Only baseline
sequential Huffman JPEG (SOF0, single interleaved scan) is accepted for
encryption; everything else raises a typed error instead of being half-read.
"""

import math
from dataclasses import dataclass

from .errors import (
    MalformedSegment,
    MissingHuffmanTable,
    MissingSOF,
    MissingSOI,
    UnexpectedEOF,
    UnsupportedFrame,
    UnsupportedJpeg,
)
from .huffman import AC, DC, build_table

SOI = 0xD8
EOI = 0xD9
SOS = 0xDA
DHT = 0xC4
DQT = 0xDB
DRI = 0xDD
DNL = 0xDC
COM = 0xFE
TEM = 0x01
RST_FIRST = 0xD0
RST_LAST = 0xD7
SOF0 = 0xC0

SOF_MARKERS = frozenset({0xC0, 0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF})

MARKER_NAMES = {
    0xC0: "SOF0", 0xC1: "SOF1", 0xC2: "SOF2", 0xC3: "SOF3",
    0xC5: "SOF5", 0xC6: "SOF6", 0xC7: "SOF7", 0xC8: "JPG",
    0xC9: "SOF9", 0xCA: "SOF10", 0xCB: "SOF11", 0xCC: "DAC",
    0xCD: "SOF13", 0xCE: "SOF14", 0xCF: "SOF15",
    0xC4: "DHT", 0xD8: "SOI", 0xD9: "EOI", 0xDA: "SOS",
    0xDB: "DQT", 0xDC: "DNL", 0xDD: "DRI", 0xDE: "DHP", 0xDF: "EXP",
    0x01: "TEM", 0xFE: "COM",
}
MARKER_NAMES.update({0xD0 + n: "RST%d" % n for n in range(8)})
MARKER_NAMES.update({0xE0 + n: "APP%d" % n for n in range(16)})
MARKER_NAMES.update({0xF0 + n: "JPG%d" % n for n in range(14)})

MARKER = "marker"
SEGMENT = "segment"
ENTROPY = "entropy"


@dataclass(frozen=True)
class Element:
    """One contiguous slice of the file: a bare marker, a segment, or scan data."""

    kind: str          # MARKER, SEGMENT, or ENTROPY
    marker: int        # second marker byte; 0 for entropy spans
    raw: bytes
    offset: int

    @property
    def name(self):
        if self.kind == ENTROPY:
            return "scan-data"
        return MARKER_NAMES.get(self.marker, "RES%02X" % self.marker)

    def __len__(self):
        return len(self.raw)


@dataclass(frozen=True)
class FrameComponent:
    comp_id: int
    h: int             # horizontal sampling factor
    v: int             # vertical sampling factor
    quant_id: int


@dataclass(frozen=True)
class FrameInfo:
    width: int
    height: int
    precision: int
    components: tuple

    @property
    def max_h(self):
        return max(c.h for c in self.components)

    @property
    def max_v(self):
        return max(c.v for c in self.components)

    @property
    def mcu_grid(self):
        """(columns, rows) of the interleaved MCU grid."""
        return (
            math.ceil(self.width / (8 * self.max_h)),
            math.ceil(self.height / (8 * self.max_v)),
        )


@dataclass(frozen=True)
class ScanComponent:
    comp_id: int
    dc_table_id: int
    ac_table_id: int


@dataclass(frozen=True)
class ScanInfo:
    components: tuple          # ScanComponent, in scan order
    restart_interval: int      # MCUs between RSTn markers, 0 = none


@dataclass(frozen=True)
class BitstreamDocument:
    elements: tuple
    total_length: int
    frame: object              # FrameInfo or None
    scan: object               # (entropy element index, ScanInfo) or None
    huffman_tables: dict       # (class, id) -> HuffmanTable, as defined before SOS


def _be16(data, pos):
    return (data[pos] << 8) | data[pos + 1]


def _parse_sof0(raw, offset):
    if len(raw) < 10:
        raise MalformedSegment("SOF0 segment too short", offset)
    precision = raw[4]
    height = _be16(raw, 5)
    width = _be16(raw, 7)
    ncomp = raw[9]
    if precision != 8:
        raise UnsupportedFrame("baseline frames are 8-bit, got %d-bit" % precision, offset)
    if height == 0:
        raise UnsupportedJpeg("frame height deferred to DNL marker", offset)
    if width == 0:
        raise MalformedSegment("frame width is zero", offset)
    if not 1 <= ncomp <= 4:
        raise MalformedSegment("frame declares %d components" % ncomp, offset)
    if len(raw) != 10 + 3 * ncomp:
        raise MalformedSegment("SOF0 length does not match component count", offset)
    components = []
    for k in range(ncomp):
        cid = raw[10 + 3 * k]
        hv = raw[11 + 3 * k]
        quant_id = raw[12 + 3 * k]
        h, v = hv >> 4, hv & 0x0F
        if not (1 <= h <= 4 and 1 <= v <= 4):
            raise MalformedSegment("component %d sampling factors %dx%d out of range" % (cid, h, v), offset)
        components.append(FrameComponent(cid, h, v, quant_id))
    return FrameInfo(width, height, precision, tuple(components))


def _parse_dht(raw, offset, tables):
    pos = 4
    end = len(raw)
    while pos < end:
        if pos + 17 > end:
            raise MalformedSegment("truncated DHT table header", offset)
        tc, th = raw[pos] >> 4, raw[pos] & 0x0F
        if tc > 1:
            raise MalformedSegment("DHT table class %d is not DC/AC" % tc, offset)
        if th > 3:
            raise MalformedSegment("DHT table id %d out of range" % th, offset)
        counts = raw[pos + 1:pos + 17]
        total = sum(counts)
        if pos + 17 + total > end:
            raise MalformedSegment("DHT symbol list runs past segment end", offset)
        symbols = raw[pos + 17:pos + 17 + total]
        table_class = DC if tc == 0 else AC
        tables[(table_class, th)] = build_table(table_class, th, counts, symbols)
        pos += 17 + total
    if pos != end:
        raise MalformedSegment("garbage after last DHT table", offset)


def _parse_sos(raw, offset):
    if len(raw) < 8:
        raise MalformedSegment("SOS segment too short", offset)
    ncomp = raw[4]
    if not 1 <= ncomp <= 4:
        raise MalformedSegment("scan declares %d components" % ncomp, offset)
    if len(raw) != 8 + 2 * ncomp:
        raise MalformedSegment("SOS length does not match component count", offset)
    components = []
    for k in range(ncomp):
        cid = raw[5 + 2 * k]
        tdta = raw[6 + 2 * k]
        td, ta = tdta >> 4, tdta & 0x0F
        if td > 3 or ta > 3:
            raise MalformedSegment("scan component %d table ids %d/%d out of range" % (cid, td, ta), offset)
        components.append(ScanComponent(cid, td, ta))
    ss, se, ahal = raw[5 + 2 * ncomp:8 + 2 * ncomp]
    if (ss, se, ahal) != (0, 63, 0):
        raise MalformedSegment(
            "baseline scan must cover coefficients 0..63 without approximation", offset
        )
    return tuple(components)


def _scan_span_end(data, start):
    """Return the offset of the marker that terminates scan data at `start`.

    FF 00 (stuffed zero) and FF D0..D7 (restart markers) stay inside the span.
    """
    pos = start
    n = len(data)
    while True:
        ff = data.find(0xFF, pos)
        if ff < 0 or ff + 1 >= n:
            raise UnexpectedEOF("entropy-coded data is not terminated by a marker", start)
        nxt = data[ff + 1]
        if nxt == 0x00 or RST_FIRST <= nxt <= RST_LAST:
            pos = ff + 2
            continue
        return ff


def parse_document(data):
    """Split a JPEG byte string into a BitstreamDocument.

    Re-serializing the document reproduces the input exactly.  SOF0, SOS, DHT
    and DRI are interpreted; APPn, COM, DQT and unknown segments are kept as
    opaque byte runs.
    """
    n = len(data)
    if n < 2 or data[0] != 0xFF or data[1] != SOI:
        raise MissingSOI("file does not start with an SOI marker")

    elements = [Element(MARKER, SOI, bytes(data[0:2]), 0)]
    tables = {}
    frame = None
    scan = None
    scan_tables = None
    restart_interval = 0
    pos = 2

    while True:
        if pos + 2 > n:
            raise UnexpectedEOF("expected a marker before end of file", pos)
        if data[pos] != 0xFF:
            raise MalformedSegment("expected marker, found byte %02X" % data[pos], pos)
        m = data[pos + 1]
        if m == 0x00 or m == 0xFF:
            raise MalformedSegment("invalid marker code FF %02X" % m, pos)

        if m == EOI:
            elements.append(Element(MARKER, EOI, bytes(data[pos:pos + 2]), pos))
            pos += 2
            break
        if m == SOI:
            raise MalformedSegment("unexpected second SOI marker", pos)
        if RST_FIRST <= m <= RST_LAST:
            raise MalformedSegment("restart marker outside entropy-coded data", pos)
        if m == TEM:
            raise MalformedSegment("TEM marker outside arithmetic-coded data", pos)
        if m == DNL:
            raise UnsupportedJpeg("DNL marker is not supported", pos)

        if pos + 4 > n:
            raise UnexpectedEOF("segment header runs past end of file", pos)
        seglen = _be16(data, pos + 2)
        if seglen < 2:
            raise MalformedSegment("segment declares length %d < 2" % seglen, pos)
        end = pos + 2 + seglen
        if end > n:
            raise UnexpectedEOF("segment of length %d runs past end of file" % seglen, pos)
        raw = bytes(data[pos:end])

        if m in SOF_MARKERS:
            if m != SOF0:
                raise UnsupportedFrame(
                    "%s frames are not supported, only baseline SOF0" % MARKER_NAMES.get(m, "unknown"),
                    pos,
                )
            if frame is not None:
                raise MalformedSegment("second SOF marker in one file", pos)
            frame = _parse_sof0(raw, pos)
        elif m == DHT:
            _parse_dht(raw, pos, tables)
        elif m == DRI:
            if seglen != 4:
                raise MalformedSegment("DRI segment must declare length 4", pos)
            restart_interval = _be16(raw, 4)
        elif m == SOS:
            if scan is not None:
                raise UnsupportedJpeg("multiple SOS segments (multi-scan files are out of scope)", pos)
            components = _parse_sos(raw, pos)
            elements.append(Element(SEGMENT, SOS, raw, pos))
            span_start = end
            span_end = _scan_span_end(data, span_start)
            elements.append(Element(ENTROPY, 0, bytes(data[span_start:span_end]), span_start))
            scan = (len(elements) - 1, ScanInfo(components, restart_interval))
            scan_tables = dict(tables)
            pos = span_end
            continue

        elements.append(Element(SEGMENT, m, raw, pos))
        pos = end

    if pos != n:
        raise MalformedSegment("%d trailing bytes after EOI" % (n - pos), pos)

    return BitstreamDocument(
        elements=tuple(elements),
        total_length=n,
        frame=frame,
        scan=scan,
        huffman_tables=scan_tables if scan_tables is not None else tables,
    )


def serialize_document(doc):
    """Concatenate element bytes back into a file; the inverse of parse_document."""
    return b"".join(e.raw for e in doc.elements)


def locate_entropy_spans(doc):
    """Pair each entropy span with its scan and frame context.

    Returns a list of (Element, ScanInfo, FrameInfo) tuples, one per SOS
    (baseline: at most one).  Raises MissingSOF when scan data appears without
    a frame header and MissingHuffmanTable when a referenced table id has no
    DHT definition before the scan.
    """
    if doc.scan is None:
        return []
    span_index, scan_info = doc.scan
    if doc.frame is None:
        raise MissingSOF("scan data present but no SOF0 frame header")
    frame_ids = {c.comp_id for c in doc.frame.components}
    for sc in scan_info.components:
        if sc.comp_id not in frame_ids:
            raise MalformedSegment("scan references unknown component id %d" % sc.comp_id)
        if (DC, sc.dc_table_id) not in doc.huffman_tables:
            raise MissingHuffmanTable("no DC table %d defined before SOS" % sc.dc_table_id)
        if (AC, sc.ac_table_id) not in doc.huffman_tables:
            raise MissingHuffmanTable("no AC table %d defined before SOS" % sc.ac_table_id)
    if len(scan_info.components) != len(doc.frame.components):
        raise UnsupportedJpeg(
            "scan covers %d of %d frame components; only full interleaved scans are supported"
            % (len(scan_info.components), len(doc.frame.components))
        )
    return [(doc.elements[span_index], scan_info, doc.frame)]


def replace_entropy_span(doc, element_index, new_bytes):
    """Return a copy of the document with one entropy span's bytes swapped.

    The replacement must have the same length; everything else about the
    document (offsets, markers, tables) is untouched.
    """
    old = doc.elements[element_index]
    if old.kind != ENTROPY:
        raise ValueError("element %d is %s, not an entropy span" % (element_index, old.kind))
    if len(new_bytes) != len(old.raw):
        raise ValueError(
            "replacement span is %d bytes, original is %d" % (len(new_bytes), len(old.raw))
        )
    elements = list(doc.elements)
    elements[element_index] = Element(ENTROPY, 0, bytes(new_bytes), old.offset)
    return BitstreamDocument(
        elements=tuple(elements),
        total_length=doc.total_length,
        frame=doc.frame,
        scan=doc.scan,
        huffman_tables=doc.huffman_tables,
    )
