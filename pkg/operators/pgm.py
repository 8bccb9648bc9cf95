"""
PGM (P5, 8-bit grayscale) reader and writer

Images are returned as float64 arrays in [0, 255].
"""

from pathlib import Path

import numpy as np
from loguru import logger
from PIL import Image, UnidentifiedImageError

from utils.constants import PIXEL_MAX
from utils.exceptions import PgmFormatError


def read_pgm(path: Path) -> np.ndarray:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            magic = f.read(2)
    except OSError as e:
        raise PgmFormatError(f"cannot read {path}: {e}") from e
    if magic != b"P5":
        raise PgmFormatError(f"{path} is not a binary PGM (magic {magic!r})")

    try:
        with Image.open(path) as img:
            if img.mode != "L":
                raise PgmFormatError(f"{path} is not 8-bit grayscale (mode {img.mode})")
            data = np.asarray(img, dtype=np.float64)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise PgmFormatError(f"malformed PGM {path}: {e}") from e

    logger.debug(f"Read {data.shape[0]}×{data.shape[1]} PGM from {path}")
    return data.copy()


def write_pgm(path: Path, image: np.ndarray) -> Path:
    """Clip to [0, 255], round, and save as binary PGM"""
    path = Path(path)
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2:
        raise PgmFormatError(f"PGM images are 2-D, got shape {arr.shape}")
    pixels = np.clip(np.rint(arr), 0, PIXEL_MAX).astype(np.uint8)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels).save(path, format="PPM")
    return path
