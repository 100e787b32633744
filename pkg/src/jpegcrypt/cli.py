"""Command-line front end: encrypt, decrypt, stats, verify, dump.

Exit codes: 0 success, 1 usage error, 2 parse/unsupported-format error,
3 verification failure.  The key is 32 hex characters, given with --key or
the JPEGCRYPT_KEY environment variable (the flag wins).  The file carries no
record of the target mode: decrypting with a different --target than the one
used to encrypt silently produces garbage pixels, not an error.
"""

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .analysis import compute_report, render_table
from .cipher import SecretKey, encrypt_file
from .errors import BadKeyLength, JpegCryptError, ParseError
from .markers import ENTROPY, parse_document
from .scanner import (
    TARGET_BOTH,
    TARGETS,
    classify_entropy_bytes,
    dump_byte_rows,
    format_dump_line,
    label_document,
)

KEY_ENV = "JPEGCRYPT_KEY"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_VERIFY = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 by default; usage problems are exit code 1 here
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="jpegcrypt", description="Size-preserving JPEG bitstream encryption")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_key_opts(p):
        p.add_argument("--key", "-k", help="128-bit key as 32 hex characters (or $%s)" % KEY_ENV)
        p.add_argument("--tweak", help="optional 64-bit tweak as 16 hex characters")

    def add_target_opt(p):
        p.add_argument(
            "--target", "-t", choices=TARGETS, default=TARGET_BOTH,
            help="which additional bits to encrypt (default: both)",
        )

    for name, help_text in (("encrypt", "encrypt a JPEG in place of its bitstream"),
                            ("decrypt", "invert encrypt under the same key and target")):
        p = sub.add_parser(name, help=help_text)
        add_key_opts(p)
        add_target_opt(p)
        p.add_argument("--in-place", action="store_true", help="allow output to overwrite input")
        p.add_argument("input", help="input file or directory")
        p.add_argument("output", nargs="?", help="output file or directory (omit with --in-place)")

    p = sub.add_parser("stats", help="print the byte-classification report")
    add_key_opts(p)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("inputs", nargs="+", help="input files")

    p = sub.add_parser("verify", help="check size and structure of an encrypted file")
    p.add_argument("original")
    p.add_argument("encrypted")

    p = sub.add_parser("dump", help="print the per-byte classification of the scan data")
    add_target_opt(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("input")
    return parser


def _secret_from_args(args, required=True):
    key_hex = args.key or os.environ.get(KEY_ENV)
    if not key_hex:
        if required:
            raise _UsageError("a key is required: pass --key or set $%s" % KEY_ENV)
        key_hex = "00" * 16
    if len(key_hex) != 32:
        raise BadKeyLength("key must be 32 hex characters, got %d" % len(key_hex))
    if args.tweak is not None and len(args.tweak) != 16:
        raise BadKeyLength("tweak must be 16 hex characters, got %d" % len(args.tweak))
    return SecretKey.from_hex(key_hex, args.tweak)


def _write_atomic(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, str(path))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _gather_pairs(args):
    """Resolve (input, output) file pairs for encrypt/decrypt, honoring directories."""
    src = Path(args.input)
    if src.is_dir():
        if args.output is None:
            raise _UsageError("directory input needs an output directory")
        dst = Path(args.output)
        if dst.resolve() == src.resolve() and not args.in_place:
            raise _UsageError("output directory equals input directory (use --in-place)")
        pairs = []
        for p in sorted(src.rglob("*")):
            if p.is_file() and p.suffix.lower() in (".jpg", ".jpeg"):
                pairs.append((p, dst / p.relative_to(src)))
        if not pairs:
            raise _UsageError("no *.jpg or *.jpeg files under %s" % src)
        return pairs
    if args.output is None:
        if not args.in_place:
            raise _UsageError("output path required (or pass --in-place)")
        return [(src, src)]
    dst = Path(args.output)
    if dst.exists() and src.exists() and dst.resolve() == src.resolve() and not args.in_place:
        raise _UsageError("output equals input (use --in-place to overwrite)")
    return [(src, dst)]


def _cmd_crypt(args):
    secret = _secret_from_args(args)
    target = args.target
    for src, dst in _gather_pairs(args):
        data = src.read_bytes()
        _write_atomic(dst, encrypt_file(data, secret, target))
    return EXIT_OK


def _cmd_stats(args):
    secret = _secret_from_args(args, required=False)
    out = []
    for name in args.inputs:
        data = Path(name).read_bytes()
        encrypted = encrypt_file(data, secret)
        report = compute_report(data, encrypted)
        if args.format == "json":
            doc = report.to_dict()
            doc["file"] = name
            out.append(json.dumps(doc, sort_keys=True))
        else:
            out.append(render_table(report, name=name))
    print("\n".join(out))
    return EXIT_OK


def _structure_mismatch(a_doc, b_doc):
    """Return a human-readable mismatch description, or None when equal."""
    if len(a_doc.elements) != len(b_doc.elements):
        return "element counts differ (%d vs %d)" % (len(a_doc.elements), len(b_doc.elements))
    for ea, eb in zip(a_doc.elements, b_doc.elements):
        if (ea.kind, ea.marker, ea.offset, len(ea.raw)) != (eb.kind, eb.marker, eb.offset, len(eb.raw)):
            return "element at offset %d differs (%s vs %s)" % (ea.offset, ea.name, eb.name)
        if ea.kind != ENTROPY and ea.raw != eb.raw:
            return "%s segment bytes differ at offset %d" % (ea.name, ea.offset)
    a_spans = label_document(a_doc)
    b_spans = label_document(b_doc)
    for (_, la), (_, lb) in zip(a_spans, b_spans):
        if la.labels != lb.labels:
            bit = next(i for i, (x, y) in enumerate(zip(la.labels, lb.labels)) if x != y)
            return "bit labels differ at scan bit %d (file offset %d)" % (bit, la.span_offset + bit // 8)
        if la.symbols != lb.symbols:
            return "decoded symbol sequences differ"
    return None


def _cmd_verify(args):
    original = Path(args.original).read_bytes()
    encrypted = Path(args.encrypted).read_bytes()
    if len(original) != len(encrypted):
        print(
            "verify: FAIL: sizes differ (%d vs %d)" % (len(original), len(encrypted)),
            file=sys.stderr,
        )
        return EXIT_VERIFY
    mismatch = _structure_mismatch(parse_document(original), parse_document(encrypted))
    if mismatch:
        print("verify: FAIL: %s" % mismatch, file=sys.stderr)
        return EXIT_VERIFY
    print("verify: OK: sizes equal, structure identical")
    return EXIT_OK


def _cmd_dump(args):
    data = Path(args.input).read_bytes()
    doc = parse_document(data)
    for _, label_map in label_document(doc):
        classes = classify_entropy_bytes(label_map, args.target)
        for row in dump_byte_rows(label_map, classes):
            print(format_dump_line(row, args.format))
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("encrypt", "decrypt"):
            return _cmd_crypt(args)
        if args.command == "stats":
            return _cmd_stats(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_dump(args)
    except _UsageError as exc:
        print("jpegcrypt: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except BadKeyLength as exc:
        print("jpegcrypt: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print("jpegcrypt: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print("jpegcrypt: error: %s" % exc, file=sys.stderr)
        return EXIT_FORMAT
    except JpegCryptError as exc:
        print("jpegcrypt: error: %s" % exc, file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
