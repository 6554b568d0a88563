"""Directional relation pattern descriptor.

Per pixel, the descriptor looks along N rays. On each ray it samples the
neighbors at radii 1..M, encodes every ordered radius pair into one bit
(inner sample <= outer sample), packs the bits into a per-ray code, and then
compares each ray code against the center intensity rescaled into the code
range. The N comparison bits form the pattern; per-image histograms of the
pattern are concatenated over a range of M values and normalized to sum 1.

The per-pixel functions here are the readable ground truth used by tests and
by :mod:`ldrp.reference`; the ``*_grid`` functions are the vectorized
production kernels and reproduce the scalar arithmetic bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .image import GrayImage, SamplingMode, neighbor_offset, sample_neighbor

MAX_PAIR_BITS = 63  # per-ray codes are packed into int64


def pair_count(scale: int) -> int:
    """Number of radius pairs on one ray with samples at radii 1..scale."""
    if scale < 2:
        raise ValueError(f"scale must be >= 2 (a single radius forms no pairs), got {scale}")
    return scale * (scale - 1) // 2


def pair_index(r1: int, r2: int, scale: int) -> int:
    """1-based index of the radius pair (r1, r2) in the per-ray bit order.

    Pairs are ordered (1,2), (1,3), ..., (1,M), (2,3), ..., (M-1,M); the index
    is a bijection onto [1, pair_count(scale)].
    """
    if not (1 <= r1 < r2 <= scale):
        raise ValueError(f"need 1 <= r1 < r2 <= scale, got r1={r1}, r2={r2}, scale={scale}")
    if r1 == 1:
        return r2 - r1
    # pairs contributed by rows 1..r1-1, then the offset within row r1
    return r2 - r1 + (r1 - 1) * scale - r1 * (r1 - 1) // 2


def iter_pairs(scale: int) -> Iterator[tuple[int, int, int]]:
    """Yield (index, r1, r2) for every radius pair in index order."""
    for r1 in range(1, scale):
        for r2 in range(r1 + 1, scale + 1):
            yield pair_index(r1, r2, scale), r1, r2


@dataclass(frozen=True)
class LdrpParams:
    """Extraction parameters; fully determine the descriptor dimension."""

    directions: int = 8
    scale_min: int = 3
    scale_max: int = 6
    bit_depth: int = 8
    sampling: SamplingMode = SamplingMode.ROUND

    def __post_init__(self) -> None:
        if self.directions < 2 or self.directions % 2 != 0:
            raise ValueError(f"directions must be even and >= 2, got {self.directions}")
        if self.directions > 20:
            raise ValueError(f"directions > 20 would need >1M histogram bins, got {self.directions}")
        if self.scale_min < 2:
            raise ValueError(f"scale_min must be >= 2, got {self.scale_min}")
        if self.scale_max < self.scale_min:
            raise ValueError(
                f"scale_max must be >= scale_min, got {self.scale_max} < {self.scale_min}"
            )
        if pair_count(self.scale_max) > MAX_PAIR_BITS:
            raise ValueError(f"scale_max {self.scale_max} packs more than {MAX_PAIR_BITS} pair bits")
        if not (1 <= self.bit_depth <= 16):
            raise ValueError(f"bit_depth must be in [1, 16], got {self.bit_depth}")

    @property
    def scales(self) -> range:
        return range(self.scale_min, self.scale_max + 1)

    @property
    def dimension(self) -> int:
        return (self.scale_max - self.scale_min + 1) * (1 << self.directions)

    @property
    def min_image_side(self) -> int:
        return 2 * self.scale_max + 1


@dataclass(frozen=True)
class MultiScaleDescriptor:
    """Concatenated per-scale histograms, normalized to sum 1."""

    values: np.ndarray
    params: LdrpParams

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.params.dimension,):
            raise ValueError(
                f"descriptor length {values.shape} does not match params dimension "
                f"{self.params.dimension}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# Per-pixel operations (readable ground truth).
# ---------------------------------------------------------------------------


def directional_bits(
    image: GrayImage,
    row: int,
    col: int,
    direction: int,
    scale: int,
    directions: int,
    mode: SamplingMode = SamplingMode.ROUND,
) -> tuple[int, ...]:
    """Pair-comparison bits along one ray, ordered by pair index.

    Bit t is 1 when the sample at the pair's inner radius is <= the sample at
    its outer radius. (row, col) must be at least ``scale`` pixels from every
    image border.
    """
    _check_interior(image, row, col, scale)
    samples = [
        sample_neighbor(image, row, col, r, direction, directions, mode)
        for r in range(1, scale + 1)
    ]
    bits = [0] * pair_count(scale)
    for t, r1, r2 in iter_pairs(scale):
        bits[t - 1] = 1 if samples[r1 - 1] <= samples[r2 - 1] else 0
    return tuple(bits)


def direction_code(bits: Sequence[int]) -> int:
    """Pack pair bits into an integer; bit t carries weight 2^(t-1)."""
    code = 0
    for position, bit in enumerate(bits):
        if bit not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {bit!r}")
        code += bit << position
    return code


def transform_center(center: int, pairs: int, bit_depth: int = 8) -> int:
    """Rescale a center intensity into the [0, 2^pairs - 1] range of ray codes."""
    top = (1 << bit_depth) - 1
    if not 0 <= center <= top:
        raise ValueError(f"center {center} outside [0, {top}] for bit_depth {bit_depth}")
    return center * ((1 << pairs) - 1) // top


def relation_pattern(codes: Sequence[int], transformed_center: int) -> int:
    """Pattern built from comparing each ray code against the transformed center.

    Bit k is 1 when codes[k-1] >= transformed_center (ties count as 1).
    """
    pattern = 0
    for k, code in enumerate(codes):
        if code >= transformed_center:
            pattern |= 1 << k
    return pattern


def ldrp_at(
    image: GrayImage,
    row: int,
    col: int,
    scale: int,
    directions: int,
    bit_depth: int = 8,
    mode: SamplingMode = SamplingMode.ROUND,
) -> int:
    """Descriptor code of a single pixel at one scale."""
    codes = [
        direction_code(directional_bits(image, row, col, k, scale, directions, mode))
        for k in range(1, directions + 1)
    ]
    tau = transform_center(int(image.pixels[row, col]), pair_count(scale), bit_depth)
    return relation_pattern(codes, tau)


def _check_interior(image: GrayImage, row: int, col: int, margin: int) -> None:
    if not (margin <= row < image.height - margin and margin <= col < image.width - margin):
        raise IndexError(
            f"pixel ({row}, {col}) is within {margin} of a border of a "
            f"{image.height}x{image.width} image"
        )


# ---------------------------------------------------------------------------
# Vectorized production kernels.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _cached_offset(
    radius: int, direction: int, directions: int, mode: SamplingMode
) -> tuple[float, float] | tuple[int, int]:
    return neighbor_offset(radius, direction, directions, mode)


def _interior_slice(pixels: np.ndarray, margin: int, d_row: int, d_col: int) -> np.ndarray:
    h, w = pixels.shape
    return pixels[margin + d_row : h - margin + d_row, margin + d_col : w - margin + d_col]


def _ray_plane(
    pixels: np.ndarray,
    margin: int,
    radius: int,
    direction: int,
    directions: int,
    mode: SamplingMode,
) -> np.ndarray:
    """Sample values along one ray for every interior pixel at once.

    Under BILINEAR this combines shifted slices with the exact two-stage lerp
    of :func:`ldrp.image.bilinear_sample`. Slices one past an integer offset
    carry a factor of exactly zero, so reusing the base slice there leaves
    IEEE results unchanged while staying inside the image.
    """
    d_row, d_col = _cached_offset(radius, direction, directions, mode)
    if mode is SamplingMode.ROUND:
        return _interior_slice(pixels, margin, d_row, d_col)

    r0 = math.floor(d_row)
    c0 = math.floor(d_col)
    fr = d_row - r0
    fc = d_col - c0
    p00 = _interior_slice(pixels, margin, r0, c0).astype(np.float64)
    p01 = _interior_slice(pixels, margin, r0, c0 + 1).astype(np.float64) if fc > 0.0 else p00
    top = p00 + fc * (p01 - p00)
    if fr == 0.0:
        return top  # adding 0.0 * (bottom - top) cannot change a nonnegative top
    p10 = _interior_slice(pixels, margin, r0 + 1, c0).astype(np.float64)
    p11 = _interior_slice(pixels, margin, r0 + 1, c0 + 1).astype(np.float64) if fc > 0.0 else p10
    bottom = p10 + fc * (p11 - p10)
    return top + fr * (bottom - top)


def direction_code_grid(
    image: GrayImage,
    direction: int,
    scale: int,
    directions: int,
    mode: SamplingMode = SamplingMode.ROUND,
) -> np.ndarray:
    """Ray codes of every interior pixel for one direction, as int64."""
    _check_histogram_size(image, scale)
    planes = [
        _ray_plane(image.pixels, scale, r, direction, directions, mode)
        for r in range(1, scale + 1)
    ]
    shape = planes[0].shape
    codes = np.zeros(shape, dtype=np.int64)
    for t, r1, r2 in iter_pairs(scale):
        codes += (planes[r1 - 1] <= planes[r2 - 1]).astype(np.int64) << (t - 1)
    return codes


def ldrp_code_grid(
    image: GrayImage,
    scale: int,
    directions: int,
    bit_depth: int = 8,
    mode: SamplingMode = SamplingMode.ROUND,
) -> np.ndarray:
    """Descriptor codes of every interior pixel at one scale, as int64."""
    _check_histogram_size(image, scale)
    center = _interior_slice(image.pixels, scale, 0, 0).astype(np.int64)
    tau = center * ((1 << pair_count(scale)) - 1) // ((1 << bit_depth) - 1)
    pattern = np.zeros(center.shape, dtype=np.int64)
    for k in range(1, directions + 1):
        codes = direction_code_grid(image, k, scale, directions, mode)
        pattern += (codes >= tau).astype(np.int64) << (k - 1)
    return pattern


def scale_histogram(
    image: GrayImage,
    scale: int,
    directions: int,
    bit_depth: int = 8,
    mode: SamplingMode = SamplingMode.ROUND,
) -> np.ndarray:
    """Occurrence counts of descriptor codes over all interior pixels.

    Pixels within ``scale`` of a border are excluded, so the counts total
    (height - 2*scale) * (width - 2*scale). Returns int64 counts of length
    2^directions.
    """
    codes = ldrp_code_grid(image, scale, directions, bit_depth, mode)
    return np.bincount(codes.ravel(), minlength=1 << directions).astype(np.int64)


def multiscale_descriptor(image: GrayImage, params: LdrpParams) -> MultiScaleDescriptor:
    """Concatenate per-scale histograms (ascending scale) and normalize to sum 1."""
    if image.bit_depth != params.bit_depth:
        raise ValueError(
            f"image bit_depth {image.bit_depth} does not match params bit_depth {params.bit_depth}"
        )
    counts = np.concatenate(
        [
            scale_histogram(image, scale, params.directions, params.bit_depth, params.sampling)
            for scale in params.scales
        ]
    )
    total = int(counts.sum())
    # total > 0 is guaranteed: scale_histogram rejects images without interior pixels
    return MultiScaleDescriptor(counts / total, params)


def _check_histogram_size(image: GrayImage, scale: int) -> None:
    if scale < 2:
        raise ValueError(f"scale must be >= 2, got {scale}")
    minimum = 2 * scale + 1
    if image.height < minimum or image.width < minimum:
        raise ValueError(
            f"image {image.height}x{image.width} is too small for scale {scale}; "
            f"needs at least {minimum}x{minimum}"
        )
