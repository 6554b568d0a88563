"""Classic local binary pattern, used as the comparison baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .descriptor import _ray_plane  # shared circular sampling kernel
from .image import GrayImage, SamplingMode, sample_neighbor


@dataclass(frozen=True)
class LbpParams:
    """Baseline parameters: P neighbors on a circle of radius R."""

    neighbors: int = 8
    radius: int = 1
    sampling: SamplingMode = SamplingMode.ROUND

    def __post_init__(self) -> None:
        if self.neighbors < 4:
            raise ValueError(f"neighbors must be >= 4, got {self.neighbors}")
        if self.neighbors > 20:
            raise ValueError(f"neighbors > 20 would need >1M histogram bins, got {self.neighbors}")
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")

    @property
    def dimension(self) -> int:
        return 1 << self.neighbors

    @property
    def margin(self) -> int:
        return int(math.ceil(self.radius))

    @property
    def min_image_side(self) -> int:
        return 2 * self.margin + 1


def lbp_code(image: GrayImage, row: int, col: int, params: LbpParams) -> int:
    """Code of one pixel: bit p set when neighbor p >= center (ties count).

    Neighbor 1 sits to the right of the center and neighbors advance
    counter-clockwise, matching the ray convention of the relation descriptor.
    """
    m = params.margin
    if not (m <= row < image.height - m and m <= col < image.width - m):
        raise IndexError(
            f"pixel ({row}, {col}) is within {m} of a border of a "
            f"{image.height}x{image.width} image"
        )
    center = int(image.pixels[row, col])
    code = 0
    for p in range(1, params.neighbors + 1):
        value = sample_neighbor(
            image, row, col, params.radius, p, params.neighbors, params.sampling
        )
        if value >= center:
            code |= 1 << (p - 1)
    return code


def lbp_code_grid(image: GrayImage, params: LbpParams) -> np.ndarray:
    """Codes of every interior pixel, as int64."""
    m = params.margin
    if image.height < params.min_image_side or image.width < params.min_image_side:
        raise ValueError(
            f"image {image.height}x{image.width} is too small for radius {params.radius}; "
            f"needs at least {params.min_image_side}x{params.min_image_side}"
        )
    center = image.pixels[m : image.height - m, m : image.width - m]
    codes = np.zeros(center.shape, dtype=np.int64)
    for p in range(1, params.neighbors + 1):
        plane = _ray_plane(image.pixels, m, params.radius, p, params.neighbors, params.sampling)
        codes += (plane >= center).astype(np.int64) << (p - 1)
    return codes


def lbp_histogram(image: GrayImage, params: LbpParams) -> np.ndarray:
    """Normalized histogram of codes over all interior pixels (sums to 1)."""
    codes = lbp_code_grid(image, params)
    counts = np.bincount(codes.ravel(), minlength=params.dimension).astype(np.int64)
    return counts / int(counts.sum())
