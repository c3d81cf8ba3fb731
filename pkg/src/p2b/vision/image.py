"""RGB image buffers with PNG and binary-PPM codecs."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import ImageDecodeError

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass
class ImageBuffer:
    """Row-major RGB pixels, one byte per channel."""

    rgb: np.ndarray  # (h, w, 3) uint8

    def __post_init__(self):
        self.rgb = np.ascontiguousarray(self.rgb, dtype=np.uint8)
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise ImageDecodeError(f"expected (h, w, 3) pixels, got {self.rgb.shape}")
        if self.rgb.shape[0] == 0 or self.rgb.shape[1] == 0:
            raise ImageDecodeError("empty image")

    @property
    def w(self) -> int:
        return int(self.rgb.shape[1])

    @property
    def h(self) -> int:
        return int(self.rgb.shape[0])

    def luminance(self) -> np.ndarray:
        """Rec. 601 luma as float64 in [0, 255]."""
        r, g, b = (self.rgb[:, :, i].astype(np.float64) for i in range(3))
        return 0.299 * r + 0.587 * g + 0.114 * b


def decode_image(data: bytes) -> ImageBuffer:
    """Decode PNG or binary PPM (P6), sniffing the header."""
    if data.startswith(_PNG_MAGIC):
        try:
            with Image.open(io.BytesIO(data)) as im:
                return ImageBuffer(np.asarray(im.convert("RGB")))
        except (UnidentifiedImageError, OSError) as exc:
            raise ImageDecodeError(f"bad PNG data: {exc}") from exc
    if data.startswith(b"P6"):
        return _decode_ppm(data)
    raise ImageDecodeError("unrecognized image format (PNG or binary PPM expected)")


def _decode_ppm(data: bytes) -> ImageBuffer:
    # Header is ASCII tokens (magic, w, h, maxval) with # comments, then raw bytes.
    pos = 0
    tokens = []
    while len(tokens) < 4:
        if pos >= len(data):
            raise ImageDecodeError("truncated PPM header")
        c = data[pos:pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    pos += 1  # single whitespace after maxval
    if tokens[0] != b"P6":
        raise ImageDecodeError("not a binary PPM")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ImageDecodeError("non-numeric PPM header field") from exc
    if w <= 0 or h <= 0 or maxval != 255:
        raise ImageDecodeError(f"unsupported PPM geometry {w}x{h} maxval={maxval}")
    raw = data[pos:pos + 3 * w * h]
    if len(raw) != 3 * w * h:
        raise ImageDecodeError("truncated PPM pixel data")
    return ImageBuffer(np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3))


def encode_ppm(img: ImageBuffer) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.w, img.h) + img.rgb.tobytes()


def encode_png(img: ImageBuffer) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img.rgb, "RGB").save(buf, format="PNG")
    return buf.getvalue()
