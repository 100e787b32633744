"""Shared fixtures: a deterministic synthetic photo corpus and cached labelings.

The corpus stands in for the usual photo test set (a smooth portrait, a
fur-like texture, a landscape, ...).  Images are generated from fixed seeds,
then encoded once per session with Pillow (libjpeg) at Q 50/80/95 with 4:2:0
subsampling — that encoder is the pinned reference for every size and
statistics check.  Labeling a span is the expensive step, so parsed documents
and label maps are cached per file for the whole session.
"""

import io

import numpy as np
import pytest
from PIL import Image

import jpegcrypt as jc

QUALITIES = (50, 80, 95)

PHOTO_SIZES = {
    "portrait": (256, 256),
    "fur": (128, 128),
    "landscape": (160, 120),
    "plasma": (144, 144),
    "blocks": (120, 160),
    "grain": (104, 136),
    "waves": (168, 112),
    "meadow": (96, 144),
}
PHOTO_NAMES = tuple(PHOTO_SIZES)
CORPUS_KEYS = tuple("%s_q%d" % (n, q) for n in PHOTO_NAMES for q in QUALITIES)
EXTRA_KEYS = ("gray_q80", "restart_q80", "s422_q80", "s444_q80")
ALL_KEYS = CORPUS_KEYS + EXTRA_KEYS


def _smooth(noise, cutoff):
    """Low-pass filter 2-D noise by masking its spectrum."""
    spec = np.fft.rfft2(noise)
    fy = np.fft.fftfreq(noise.shape[0])[:, None]
    fx = np.fft.rfftfreq(noise.shape[1])[None, :]
    spec[np.hypot(fy, fx) > cutoff] = 0
    out = np.fft.irfft2(spec, s=noise.shape)
    lo, hi = out.min(), out.max()
    return (out - lo) / (hi - lo + 1e-9)


def _photo(name):
    """Deterministic photo-like RGB array for one corpus name.

    Tuned so that, like real photos, each image leaves some all-additional
    and fixed-all-ones bytes at every quality (statistics land in the ranges
    photographs produce).
    """
    w, h = PHOTO_SIZES[name]
    seed = sum(ord(c) for c in name)
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:h, 0:w].astype(float)
    yn, xn = y / h, x / w

    if name == "portrait":
        base = 0.5 + 0.42 * np.exp(-((xn - 0.5) ** 2 + (yn - 0.42) ** 2) / 0.05)
        base -= 0.35 * np.exp(-((xn - 0.3) ** 2 + (yn - 0.75) ** 2) / 0.02)
        base += 0.35 * _smooth(rng.standard_normal((h, w)), 0.15) - 0.17
        base += 0.3 * np.sin(x * 0.35) * np.sin(y * 0.315)
    elif name == "fur":
        base = 0.15 + 0.8 * _smooth(rng.standard_normal((h, w)), 0.45)
    elif name == "landscape":
        base = 0.15 + 0.65 * yn + 0.25 * np.sin(xn * 21) * (yn > 0.45)
        base += 0.3 * _smooth(rng.standard_normal((h, w)), 0.25) - 0.15
        base += 0.22 * np.sin(x * 0.85) * np.cos(y * 0.75)
    elif name == "plasma":
        base = 0.5 + 0.3 * np.sin(xn * 17) + 0.28 * np.cos(yn * 13) + 0.2 * np.sin((xn + yn) * 29)
        base += 0.15 * _smooth(rng.standard_normal((h, w)), 0.3) - 0.07
    elif name == "blocks":
        base = 0.3 + 0.2 * _smooth(rng.standard_normal((h, w)), 0.1)
        for _ in range(24):
            x0, y0 = rng.integers(0, w - 8), rng.integers(0, h - 8)
            bw, bh = rng.integers(6, w // 3), rng.integers(6, h // 3)
            base[y0:y0 + bh, x0:x0 + bw] = rng.random()
        base += 0.2 * _smooth(rng.standard_normal((h, w)), 0.35) - 0.1
    elif name == "grain":
        base = 0.15 + 0.6 * xn + 0.45 * _smooth(rng.standard_normal((h, w)), 0.3) - 0.2
    elif name == "waves":
        base = 0.5 + 0.35 * np.sin((x + y) * 0.35) + 0.25 * _smooth(rng.standard_normal((h, w)), 0.25) - 0.12
    else:  # meadow
        base = 0.35 + 0.6 * _smooth(rng.standard_normal((h, w)), 0.35) + 0.15 * yn - 0.07
        base += 0.22 * np.sin(x * 0.8 + y * 0.7)

    base = np.clip(base, 0.01, 0.99)
    shift = _smooth(rng.standard_normal((h, w)), 0.12) - 0.5
    rgb = np.stack(
        [
            np.clip(base + 0.25 * shift, 0, 1),
            np.clip(base - 0.08 * shift, 0, 1),
            np.clip(base - 0.28 * shift, 0, 1),
        ],
        axis=-1,
    )
    return (rgb * 255).round().astype(np.uint8)


def encode_jpeg(arr, quality, **save_args):
    buf = io.BytesIO()
    mode = "L" if arr.ndim == 2 else "RGB"
    save_args.setdefault("subsampling", 2)
    if mode == "L":
        save_args.pop("subsampling")
    Image.fromarray(arr, mode).save(buf, "JPEG", quality=quality, **save_args)
    return buf.getvalue()


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """{key: Path} of every encoded corpus file."""
    root = tmp_path_factory.mktemp("corpus")
    files = {}
    for name in PHOTO_NAMES:
        arr = _photo(name)
        for q in QUALITIES:
            path = root / ("%s_q%d.jpg" % (name, q))
            path.write_bytes(encode_jpeg(arr, q))
            files["%s_q%d" % (name, q)] = path
    gray = _photo("portrait")[:, :, 1][:120, :104]
    path = root / "gray_q80.jpg"
    path.write_bytes(encode_jpeg(gray, 80))
    files["gray_q80"] = path
    path = root / "restart_q80.jpg"
    path.write_bytes(encode_jpeg(_photo("landscape"), 80, restart_marker_blocks=2))
    files["restart_q80"] = path
    for key, sub in (("s422_q80", 1), ("s444_q80", 0)):
        path = root / (key + ".jpg")
        path.write_bytes(encode_jpeg(_photo("plasma"), 80, subsampling=sub))
        files[key] = path
    return files


@pytest.fixture(scope="session")
def progressive_jpeg(tmp_path_factory):
    path = tmp_path_factory.mktemp("prog") / "progressive.jpg"
    path.write_bytes(encode_jpeg(_photo("plasma"), 80, progressive=True))
    return path


class Workbench:
    """Session cache of parsed documents and label maps, keyed by file path."""

    def __init__(self):
        self._docs = {}
        self._labeled = {}

    def data(self, path):
        return path.read_bytes()

    def doc(self, path):
        if path not in self._docs:
            self._docs[path] = jc.parse_document(path.read_bytes())
        return self._docs[path]

    def labeled(self, path):
        """(element index, BitLabelMap) of the file's single entropy span."""
        if path not in self._labeled:
            spans = jc.label_document(self.doc(path))
            assert len(spans) == 1
            self._labeled[path] = spans[0]
        return self._labeled[path]

    def classes(self, path, target):
        _, lmap = self.labeled(path)
        return jc.classify_entropy_bytes(lmap, target)


@pytest.fixture(scope="session")
def workbench():
    return Workbench()


@pytest.fixture(scope="session")
def test_key():
    return jc.SecretKey(bytes.fromhex("000102030405060708090a0b0c0d0e0f"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance criterion verdicts even when output is captured."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
