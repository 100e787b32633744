"""Keyed XOR of the encryptable additional bits; encryption and decryption.

The keystream is pinned to AES-128 in counter mode: block i of the stream is
AES_key(tweak || i) with the 64-bit tweak as counter prefix and i a 64-bit
big-endian block counter starting at 0.  Keystream bytes are consumed MSB
first, and within a masked byte the most significant masked bit takes the
next keystream bit.  Both ends re-derive the identical plan from the Huffman
structure (which encryption never changes), so no positional metadata is
stored and applying the same key twice restores the original file.
"""

from dataclasses import dataclass

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import BadKeyLength, KeystreamExhausted
from .markers import parse_document, replace_entropy_span, serialize_document
from .scanner import TARGET_BOTH, TARGETS, classify_entropy_bytes, label_document

KEY_BYTES = 16
TWEAK_BYTES = 8

_POPCOUNT = [bin(v).count("1") for v in range(256)]


@dataclass(frozen=True)
class SecretKey:
    """128-bit key plus an optional 64-bit tweak (defaults to all-zero)."""

    key: bytes
    tweak: bytes = b"\x00" * TWEAK_BYTES

    def __post_init__(self):
        if len(self.key) != KEY_BYTES:
            raise BadKeyLength("key must be %d bytes, got %d" % (KEY_BYTES, len(self.key)))
        if len(self.tweak) != TWEAK_BYTES:
            raise BadKeyLength("tweak must be %d bytes, got %d" % (TWEAK_BYTES, len(self.tweak)))

    @classmethod
    def from_hex(cls, key_hex, tweak_hex=None):
        try:
            key = bytes.fromhex(key_hex)
        except ValueError:
            raise BadKeyLength("key is not valid hex") from None
        if tweak_hex is None:
            return cls(key)
        try:
            tweak = bytes.fromhex(tweak_hex)
        except ValueError:
            raise BadKeyLength("tweak is not valid hex") from None
        return cls(key, tweak)


@dataclass(frozen=True)
class EncryptionPlan:
    """Which bits get XORed: (span byte offset, bit mask) pairs in file order."""

    entries: tuple      # (offset, mask), offsets strictly increasing, masks nonzero
    target: str
    total_bits: int


class Keystream:
    """Deterministic bit source for one (key, tweak) pair.

    Bits are handed out in order; `position` counts how many were consumed.
    """

    def __init__(self, secret):
        counter0 = secret.tweak + b"\x00" * 8
        self._enc = Cipher(algorithms.AES(secret.key), modes.CTR(counter0)).encryptor()
        self._bits = ""
        self._used = 0
        self.position = 0

    def take(self, nbits):
        """Return the next `nbits` of the stream as a '0'/'1' string."""
        if nbits < 0:
            raise ValueError("nbits must be >= 0")
        avail = len(self._bits) - self._used
        if nbits > avail:
            need_bytes = (nbits - avail + 7) // 8
            block = self._enc.update(b"\x00" * need_bytes)
            self._bits = self._bits[self._used:] + format(
                int.from_bytes(block, "big"), "0%db" % (len(block) * 8)
            )
            self._used = 0
        out = self._bits[self._used:self._used + nbits]
        self._used += nbits
        self.position += nbits
        return out


def generate_keystream(secret, nbits):
    """The first `nbits` keystream bits for a key, as a '0'/'1' string."""
    return Keystream(secret).take(nbits)


def build_plan(classes, target=TARGET_BOTH):
    """Collect the Encryptable verdicts into an ordered plan."""
    if target not in TARGETS:
        raise ValueError("target must be one of %s" % (TARGETS,))
    entries = tuple((bc.offset, bc.mask) for bc in classes if bc.mask)
    total = sum(_POPCOUNT[mask] for _, mask in entries)
    return EncryptionPlan(entries, target, total)


def apply_plan(span, plan, keystream):
    """XOR the plan's masked bits with the keystream; everything else is untouched.

    The keystream is a '0'/'1' string at least plan.total_bits long.  Applying
    the same plan and keystream twice restores the input.
    """
    if len(keystream) < plan.total_bits:
        raise KeystreamExhausted(
            "plan consumes %d bits, keystream has %d" % (plan.total_bits, len(keystream))
        )
    out = bytearray(span)
    ks_i = 0
    for offset, mask in plan.entries:
        xor = 0
        bit = 0x80
        while bit:
            if mask & bit:
                if keystream[ks_i] == "1":
                    xor |= bit
                ks_i += 1
            bit >>= 1
        out[offset] ^= xor
    return bytes(out)


def encrypt_file(data, secret, target=TARGET_BOTH):
    """Encrypt a baseline JPEG in the bitstream domain.

    Output is a conformant JPEG of exactly the same length: only additional
    bits classified as safely encryptable are XORed with the keystream.
    """
    doc = parse_document(data)
    for element_index, label_map in label_document(doc):
        classes = classify_entropy_bytes(label_map, target)
        plan = build_plan(classes, target)
        if plan.total_bits == 0:
            continue
        keystream = generate_keystream(secret, plan.total_bits)
        doc = replace_entropy_span(doc, element_index, apply_plan(label_map.span, plan, keystream))
    return serialize_document(doc)


def decrypt_file(data, secret, target=TARGET_BOTH):
    """Inverse of encrypt_file under the same key and target (XOR involution)."""
    return encrypt_file(data, secret, target)
