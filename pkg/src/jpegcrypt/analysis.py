"""Byte-classification statistics and size-diff reports.

Percentages follow the convention encrypted / (encrypted + excluded) * 100
where "excluded" counts only bytes that hold target additional bits but are
unsafe to touch (all-additional bytes and bytes whose fixed bits are all 1).
Bytes with no additional bits at all are reported separately.
"""

import json
from dataclasses import dataclass

from .markers import parse_document
from .scanner import (
    ALL_HUFFMAN,
    EXCLUDED_REASONS,
    MARKER_OR_PAD,
    STUFFED_ZERO,
    TARGET_BOTH,
    TARGETS,
    classify_entropy_bytes,
    label_document,
)


@dataclass(frozen=True)
class TargetStats:
    """Per-target byte tallies for one file."""

    target: str
    encrypted_bytes: int     # bytes with at least one masked bit
    excluded_bytes: int      # all-additional + fixed-bits-all-ones bytes
    untargeted_bytes: int    # additional bits present, none of the target class
    encrypted_bits: int      # total masked bits (keystream length)

    @property
    def percentage(self):
        total = self.encrypted_bytes + self.excluded_bytes
        if total == 0:
            return 0.0
        return 100.0 * self.encrypted_bytes / total


@dataclass(frozen=True)
class ScanReport:
    """Classification counts plus original/encrypted sizes for one file."""

    original_size: int
    encrypted_size: int
    entropy_bytes: int
    all_huffman_bytes: int
    stuffed_bytes: int
    marker_pad_bytes: int
    targets: dict            # target name -> TargetStats

    @property
    def size_diff(self):
        return self.encrypted_size - self.original_size

    def to_dict(self):
        return {
            "original_size": self.original_size,
            "encrypted_size": self.encrypted_size,
            "size_diff": self.size_diff,
            "entropy_bytes": self.entropy_bytes,
            "all_huffman_bytes": self.all_huffman_bytes,
            "stuffed_bytes": self.stuffed_bytes,
            "marker_pad_bytes": self.marker_pad_bytes,
            "targets": {
                name: {
                    "encrypted_bytes": ts.encrypted_bytes,
                    "excluded_bytes": ts.excluded_bytes,
                    "untargeted_bytes": ts.untargeted_bytes,
                    "encrypted_bits": ts.encrypted_bits,
                    "percentage": round(ts.percentage, 1),
                }
                for name, ts in self.targets.items()
            },
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)


def compute_report(original, encrypted):
    """Classify `original` and compare sizes against its encrypted form."""
    doc = parse_document(original)
    parse_document(encrypted)

    entropy_bytes = 0
    all_huffman = 0
    stuffed = 0
    marker_pad = 0
    per_target = {t: [0, 0, 0, 0] for t in TARGETS}  # enc bytes, excl bytes, untargeted, enc bits

    for _, label_map in label_document(doc):
        entropy_bytes += len(label_map.span)
        for target in TARGETS:
            stats = per_target[target]
            for bc in classify_entropy_bytes(label_map, target):
                if bc.mask:
                    stats[0] += 1
                    stats[3] += bin(bc.mask).count("1")
                elif bc.reason in EXCLUDED_REASONS:
                    stats[1] += 1
                elif bc.reason == ALL_HUFFMAN:
                    if target == TARGET_BOTH:
                        all_huffman += 1
                elif bc.reason == STUFFED_ZERO:
                    if target == TARGET_BOTH:
                        stuffed += 1
                elif bc.reason == MARKER_OR_PAD:
                    if target == TARGET_BOTH:
                        marker_pad += 1
                else:
                    stats[2] += 1

    return ScanReport(
        original_size=len(original),
        encrypted_size=len(encrypted),
        entropy_bytes=entropy_bytes,
        all_huffman_bytes=all_huffman,
        stuffed_bytes=stuffed,
        marker_pad_bytes=marker_pad,
        targets={
            t: TargetStats(t, stats[0], stats[1], stats[2], stats[3])
            for t, stats in per_target.items()
        },
    )


def trend_check(reports, target="both"):
    """True when encrypted-byte percentages do not increase across the reports.

    Pass reports ordered by increasing Q-factor; higher quality leaves more
    all-additional bytes, so the percentage is expected to fall (non-strictly).
    """
    pcts = [r.targets[target].percentage for r in reports]
    return all(a >= b for a, b in zip(pcts, pcts[1:]))


def render_table(report, name=None):
    """Aligned text rendering of one report."""
    lines = []
    if name:
        lines.append(name)
    lines.append(
        "size: original %d, encrypted %d (%+d)"
        % (report.original_size, report.encrypted_size, report.size_diff)
    )
    lines.append(
        "entropy bytes: %d (all-huffman %d, stuffed %d, marker/pad %d)"
        % (report.entropy_bytes, report.all_huffman_bytes, report.stuffed_bytes, report.marker_pad_bytes)
    )
    lines.append("%-6s %12s %12s %12s" % ("target", "excluded", "encrypted", "percent"))
    for target in TARGETS:
        ts = report.targets[target]
        lines.append(
            "%-6s %12d %12d %11.1f%%"
            % (target, ts.excluded_bytes, ts.encrypted_bytes, ts.percentage)
        )
    return "\n".join(lines)
