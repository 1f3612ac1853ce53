"""PNG reading and writing for images and masks.

On-disk conventions: sample images are 8-bit grayscale, class masks are
8-bit paletted (class id = pixel value), instance masks are 16-bit
grayscale (0 = no instance).
"""

import os

import numpy as np
from PIL import Image

from .classes import PALETTE
from .errors import FormatError, IoError


def quantize(img):
    """Round a float image in [0, 1] to uint8."""
    return np.clip(np.round(np.asarray(img) * 255.0), 0, 255).astype(np.uint8)


def _save(pil_img, path):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        pil_img.save(path)
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def _open(path):
    try:
        img = Image.open(path)
        img.load()
        return img
    except FileNotFoundError as e:
        raise IoError(f"missing file {path}") from e
    except OSError as e:
        raise FormatError(f"cannot decode {path}: {e}") from e


def save_image(path, img):
    """Write a float image in [0, 1] as 8-bit grayscale PNG."""
    _save(Image.fromarray(quantize(img), mode="L"), path)


def load_image(path):
    """Read a grayscale PNG back to float64 in [0, 1]."""
    img = _open(path)
    if img.mode != "L":
        img = img.convert("L")
    return np.asarray(img, dtype=np.float64) / 255.0


def save_class_mask(path, mask):
    """Write a class-id mask as paletted PNG."""
    mask = np.asarray(mask)
    if mask.max(initial=0) > 255:
        raise FormatError("class ids exceed 8-bit palette range")
    pil = Image.fromarray(mask.astype(np.uint8), mode="P")
    flat = [0] * 768
    for cid, (r, g, b) in PALETTE.items():
        flat[3 * cid : 3 * cid + 3] = [r, g, b]
    pil.putpalette(flat)
    _save(pil, path)


def load_class_mask(path):
    img = _open(path)
    if img.mode != "P":
        raise FormatError(f"{path}: expected paletted class mask, got mode {img.mode}")
    return np.asarray(img, dtype=np.uint8)


def save_instance_mask(path, mask):
    """Write instance ids as 16-bit grayscale PNG (0 = none)."""
    mask = np.asarray(mask)
    if mask.max(initial=0) > 0xFFFF:
        raise FormatError("instance ids exceed 16-bit range")
    _save(Image.fromarray(mask.astype(np.uint16)), path)


def load_instance_mask(path):
    img = _open(path)
    arr = np.asarray(img)
    if arr.dtype not in (np.dtype(np.uint16), np.dtype(np.int32), np.dtype(np.uint8)):
        raise FormatError(f"{path}: unexpected instance mask dtype {arr.dtype}")
    return arr.astype(np.uint16)


def save_binary_mask(path, mask):
    """Write a boolean mask as 8-bit PNG with values {0, 255}."""
    _save(Image.fromarray(np.where(np.asarray(mask, bool), 255, 0).astype(np.uint8), mode="L"), path)


def load_binary_mask(path):
    img = _open(path)
    if img.mode != "L":
        img = img.convert("L")
    return np.asarray(img) > 0
