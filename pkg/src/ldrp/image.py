"""Grayscale image container, resampling, and circular-neighborhood sampling.

All descriptor kernels in this package sample pixels on N rays leaving a
center pixel: ray k points at angle (k-1)*360/N degrees, ray 1 points right,
and angles grow counter-clockwise in display orientation (row 0 at the top).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np


class SamplingMode(str, Enum):
    """How a ray sample at non-integer coordinates is resolved."""

    ROUND = "round"        # snap each offset component to the nearest pixel
    BILINEAR = "bilinear"  # interpolate between the four surrounding pixels

    @property
    def wire_code(self) -> int:
        return 0 if self is SamplingMode.ROUND else 1

    @classmethod
    def from_wire_code(cls, code: int) -> "SamplingMode":
        if code == 0:
            return cls.ROUND
        if code == 1:
            return cls.BILINEAR
        raise ValueError(f"unknown sampling mode code {code}")


@dataclass(frozen=True)
class GrayImage:
    """Immutable single-channel raster with intensities in [0, 2^bit_depth - 1]."""

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"pixels must be 2-D (rows, cols), got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("image must contain at least one pixel")
        if not (1 <= self.bit_depth <= 16):
            raise ValueError(f"bit_depth must be in [1, 16], got {self.bit_depth}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"pixel dtype must be integer, got {arr.dtype}")
        if arr.min() < 0 or arr.max() > self.max_value:
            raise ValueError(
                f"intensities must lie in [0, {self.max_value}] for bit_depth {self.bit_depth}"
            )
        dtype = np.uint8 if self.bit_depth <= 8 else np.uint16
        arr = np.ascontiguousarray(arr, dtype=dtype)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def max_value(self) -> int:
        return (1 << self.bit_depth) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.bit_depth == other.bit_depth and np.array_equal(self.pixels, other.pixels)


def to_grayscale(rgb: np.ndarray) -> GrayImage:
    """Convert an 8-bit RGB raster to grayscale with BT.601 luma weights."""
    arr = np.asarray(rgb)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (rows, cols, 3) raster, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("image must contain at least one pixel")
    luma = (
        0.299 * arr[:, :, 0].astype(np.float64)
        + 0.587 * arr[:, :, 1].astype(np.float64)
        + 0.114 * arr[:, :, 2].astype(np.float64)
    )
    gray = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(gray, bit_depth=8)


def resize(image: GrayImage, new_width: int, new_height: int) -> GrayImage:
    """Bilinear resample to (new_width, new_height), rounding to nearest intensity.

    Output pixel centers map onto input pixel centers; source coordinates are
    clamped at the borders and results rounded half-up then clamped to the
    intensity range.
    """
    if new_width < 1 or new_height < 1:
        raise ValueError(f"target dimensions must be >= 1, got {new_width}x{new_height}")
    if new_width == image.width and new_height == image.height:
        return image

    px = image.pixels.astype(np.float64)
    src_r = _resample_axis(image.height, new_height)
    src_c = _resample_axis(image.width, new_width)

    r0 = np.floor(src_r).astype(np.intp)
    c0 = np.floor(src_c).astype(np.intp)
    fr = (src_r - r0)[:, None]
    fc = (src_c - c0)[None, :]
    r1 = np.minimum(r0 + 1, image.height - 1)
    c1 = np.minimum(c0 + 1, image.width - 1)

    p00 = px[np.ix_(r0, c0)]
    p01 = px[np.ix_(r0, c1)]
    p10 = px[np.ix_(r1, c0)]
    p11 = px[np.ix_(r1, c1)]
    top = p00 + fc * (p01 - p00)
    bottom = p10 + fc * (p11 - p10)
    out = np.clip(np.floor(top + fr * (bottom - top) + 0.5), 0, image.max_value)
    dtype = np.uint8 if image.bit_depth <= 8 else np.uint16
    return GrayImage(out.astype(dtype), bit_depth=image.bit_depth)


def _resample_axis(src_size: int, dst_size: int) -> np.ndarray:
    coords = (np.arange(dst_size, dtype=np.float64) + 0.5) * (src_size / dst_size) - 0.5
    return np.clip(coords, 0.0, src_size - 1.0)


def unit_direction(direction: int, directions: int) -> tuple[float, float]:
    """(cos, sin) of ray ``direction``'s angle, exact under quadrant symmetry.

    Angles are reduced to the first quadrant before calling trig functions so
    that opposite rays are exact negations of each other and axis-aligned rays
    come out as exact 0 / +-1 components.
    """
    if directions < 1:
        raise ValueError("directions must be >= 1")
    if not 1 <= direction <= directions:
        raise ValueError(f"direction must be in [1, {directions}], got {direction}")
    turns = Fraction(direction - 1, directions) % 1
    quadrant, rem = divmod(turns, Fraction(1, 4))
    phi = 2.0 * math.pi * float(rem)
    c, s = math.cos(phi), math.sin(phi)
    if quadrant == 0:
        return c, s
    if quadrant == 1:
        return -s, c
    if quadrant == 2:
        return -c, -s
    return s, -c


def _round_half_away(value: float) -> int:
    if value >= 0.0:
        return int(math.floor(value + 0.5))
    return int(math.ceil(value - 0.5))


def neighbor_offset(
    radius: int, direction: int, directions: int, mode: SamplingMode = SamplingMode.ROUND
) -> tuple[float, float] | tuple[int, int]:
    """Displacement (delta_row, delta_col) of a ray sample from the center.

    Ray 1 points right, rays advance counter-clockwise; rows grow downward, so
    the row component of an upward ray is negative. Under ROUND each component
    is rounded half-away-from-zero to an integer.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    cos_t, sin_t = unit_direction(direction, directions)
    d_col = radius * cos_t
    d_row = -radius * sin_t
    if mode is SamplingMode.ROUND:
        return _round_half_away(d_row), _round_half_away(d_col)
    return d_row, d_col


def bilinear_sample(
    pixels: np.ndarray, base_row: int, base_col: int, frac_row: float, frac_col: float
) -> float:
    """Bilinear interpolation at (base_row + frac_row, base_col + frac_col).

    Uses the two-stage lerp form a + f*(b - a), which returns the shared value
    exactly when both endpoints agree (so constant regions interpolate to the
    constant). Term order matters: the vectorized kernels replicate this exact
    expression so that naive and optimized extraction agree bit for bit.
    """
    r1 = min(base_row + 1, pixels.shape[0] - 1)
    c1 = min(base_col + 1, pixels.shape[1] - 1)
    p00 = float(pixels[base_row, base_col])
    p01 = float(pixels[base_row, c1])
    p10 = float(pixels[r1, base_col])
    p11 = float(pixels[r1, c1])
    top = p00 + frac_col * (p01 - p00)
    bottom = p10 + frac_col * (p11 - p10)
    return top + frac_row * (bottom - top)


def sample_neighbor(
    image: GrayImage,
    row: int,
    col: int,
    radius: int,
    direction: int,
    directions: int,
    mode: SamplingMode = SamplingMode.ROUND,
) -> int | float:
    """Intensity of the ray sample at ``radius`` along ``direction`` from (row, col).

    Callers are expected to keep the sampling footprint inside the image (the
    histogram border rule guarantees this); stepping outside raises IndexError.
    """
    d_row, d_col = neighbor_offset(radius, direction, directions, mode)
    if mode is SamplingMode.ROUND:
        rr = row + d_row
        cc = col + d_col
        if not (0 <= rr < image.height and 0 <= cc < image.width):
            raise IndexError(
                f"sample at ({rr}, {cc}) falls outside {image.height}x{image.width} image"
            )
        return int(image.pixels[rr, cc])

    # Split each offset into integer base plus fraction before touching the
    # pixel coordinate: adding first can round away fraction bits and desync
    # this path from the vectorized kernels.
    base_r = math.floor(d_row)
    base_c = math.floor(d_col)
    fr = d_row - base_r
    fc = d_col - base_c
    r0 = row + base_r
    c0 = col + base_c
    row_ok = 0 <= r0 <= (image.height - 1 if fr == 0.0 else image.height - 2)
    col_ok = 0 <= c0 <= (image.width - 1 if fc == 0.0 else image.width - 2)
    if not (row_ok and col_ok):
        raise IndexError(
            f"sample at ({row + d_row:.3f}, {col + d_col:.3f}) falls outside "
            f"{image.height}x{image.width} image"
        )
    return bilinear_sample(image.pixels, r0, c0, fr, fc)


# ---------------------------------------------------------------------------
# File I/O: PNG/JPEG via Pillow, binary PGM handled directly.
# ---------------------------------------------------------------------------

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".pgm")


def load_image(path: str | Path) -> GrayImage:
    """Load a PNG, JPEG, or binary PGM file as a grayscale image."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)

    from PIL import Image

    with Image.open(path) as img:
        if img.mode == "L":
            return GrayImage(np.asarray(img, dtype=np.uint8), bit_depth=8)
        rgb = np.asarray(img.convert("RGB"), dtype=np.uint8)
    return to_grayscale(rgb)


def read_pgm(path: str | Path) -> GrayImage:
    """Read an 8-bit binary (P5) PGM file."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")

    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # with '#' comments allowed through the end of the line.
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        if pos >= len(data):
            raise ValueError(f"{path}: truncated PGM header")
        ch = data[pos : pos + 1]
        if ch == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            fields.append(int(data[pos:end]))
            pos = end
    pos += 1  # single whitespace byte after maxval

    width, height, maxval = fields
    if not (0 < maxval <= 255):
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    expected = width * height
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise ValueError(f"{path}: expected {expected} raster bytes, found {len(raster)}")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(arr, bit_depth=8)


def write_pgm(image: GrayImage, path: str | Path) -> None:
    """Write an 8-bit image as binary (P5) PGM."""
    if image.bit_depth != 8:
        raise ValueError(f"PGM output supports bit_depth 8, got {image.bit_depth}")
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.pixels.tobytes())
