"""Image loading and saving: 8-bit PNG (RGB/RGBA) and binary PPM (P6).

Images are numpy uint8 arrays of shape (h, w, 3) or (h, w, 4); an alpha
channel survives a round trip untouched. Pillow does the codec work.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image, UnidentifiedImageError


class ImageFormatError(ValueError):
    """The file is not a PNG/PPM image this toolkit can process."""


def _from_pil(img: Image.Image) -> np.ndarray:
    if img.mode not in ("RGB", "RGBA"):
        img = img.convert("RGBA" if "A" in img.mode or img.mode == "P" else "RGB")
    return np.array(img, dtype=np.uint8)  # fresh writable copy


def load_image(path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return _from_pil(img)
    except (UnidentifiedImageError, OSError) as err:
        raise ImageFormatError(f"cannot read image file {path}: {err}") from err


def save_image(path, pixels: np.ndarray) -> None:
    Image.fromarray(pixels).save(path)


def decode_bytes(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as img:
            return _from_pil(img)
    except (UnidentifiedImageError, OSError) as err:
        raise ImageFormatError(f"cannot decode image payload: {err}") from err


def encode_png_bytes(pixels: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(pixels).save(buf, format="PNG")
    return buf.getvalue()
