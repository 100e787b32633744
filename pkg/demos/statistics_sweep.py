#!/usr/bin/env python3
"""How the encryptable share of scan bytes moves with JPEG quality.

Encodes one synthetic photo at Q 50, 80 and 95 (4:2:0), encrypts each, and
prints the per-target byte tallies.  Higher quality keeps more amplitude
bits per coefficient, so more bytes consist of nothing but additional bits -
those cannot be touched without risking a fake marker, and the encrypted
percentage drops as quality rises.  Requires the numpy + Pillow test extras.
"""

import io

import numpy as np
from PIL import Image

from jpegcrypt import SecretKey, compute_report, encrypt_file, render_table, trend_check

KEY = SecretKey.from_hex("000102030405060708090a0b0c0d0e0f")


def make_photo():
    rng = np.random.default_rng(11)
    y, x = np.mgrid[0:192, 0:256] / 192.0
    base = 0.45 + 0.35 * np.sin(x * 11 + y * 5) + 0.3 * rng.standard_normal((192, 256))
    rgb = np.stack([base + 0.1, base, base - 0.1], axis=-1).clip(0, 1)
    return Image.fromarray((rgb * 255).astype("uint8"), "RGB")


def main():
    photo = make_photo()
    reports = []
    for quality in (50, 80, 95):
        buf = io.BytesIO()
        photo.save(buf, "JPEG", quality=quality, subsampling=2)
        original = buf.getvalue()
        report = compute_report(original, encrypt_file(original, KEY))
        reports.append(report)
        print(render_table(report, name="quality %d" % quality))
        print()

    percentages = [round(r.targets["both"].percentage, 1) for r in reports]
    print("encrypted share by quality: %s -> falling: %s" % (percentages, trend_check(reports)))


if __name__ == "__main__":
    main()
