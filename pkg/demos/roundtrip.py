#!/usr/bin/env python3
"""Encrypt a JPEG, prove the size never moved, decrypt it back.

Pass a baseline JPEG path to use your own file; with no argument the script
synthesizes a small photo-like test image first (needs numpy + Pillow, the
test extras).  The encrypted copy is written next to the input so you can
open it in any image viewer - it renders as noise at the original size.
"""

import io
import sys
from pathlib import Path

from jpegcrypt import SecretKey, decrypt_file, encrypt_file, parse_document

KEY = SecretKey.from_hex("00112233445566778899aabbccddeeff")


def synthesize(path):
    import numpy as np
    from PIL import Image

    rng = np.random.default_rng(7)
    y, x = np.mgrid[0:160, 0:240] / 160.0
    base = 0.5 + 0.3 * np.sin(x * 9) * np.cos(y * 7) + 0.25 * rng.standard_normal((160, 240))
    rgb = np.stack([base, 1 - base, 0.5 + 0.5 * base], axis=-1).clip(0, 1)
    Image.fromarray((rgb * 255).astype("uint8"), "RGB").save(path, "JPEG", quality=80, subsampling=2)
    print("synthesized test photo -> %s" % path)


def main():
    if len(sys.argv) > 1:
        source = Path(sys.argv[1])
    else:
        source = Path("demo_input.jpg")
        synthesize(source)

    original = source.read_bytes()
    print("original:   %6d bytes, %d elements" % (len(original), len(parse_document(original).elements)))

    encrypted = encrypt_file(original, KEY, "both")
    enc_path = source.with_name(source.stem + ".encrypted.jpg")
    enc_path.write_bytes(encrypted)
    print("encrypted:  %6d bytes -> %s (size diff %+d)" % (len(encrypted), enc_path, len(encrypted) - len(original)))

    changed = sum(a != b for a, b in zip(original, encrypted))
    print("            %d of %d bytes changed, all inside the scan data" % (changed, len(original)))

    try:
        from PIL import Image

        Image.open(io.BytesIO(encrypted)).load()
        print("            a stock decoder accepts the encrypted file")
    except ImportError:
        pass

    restored = decrypt_file(encrypted, KEY, "both")
    print("decrypted:  matches the original byte-for-byte: %s" % (restored == original))


if __name__ == "__main__":
    main()
