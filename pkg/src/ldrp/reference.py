"""Deliberately naive per-pixel extraction, kept as ground truth.

These walk every interior pixel through the scalar operations in
:mod:`ldrp.descriptor` with no vectorization. They exist so the optimized
kernels can be checked bit for bit and should stay as plain as possible.
"""

from __future__ import annotations

import numpy as np

from .descriptor import (
    LdrpParams,
    MultiScaleDescriptor,
    direction_code,
    directional_bits,
    pair_count,
    relation_pattern,
    transform_center,
)
from .image import GrayImage, SamplingMode


def scale_histogram_reference(
    image: GrayImage,
    scale: int,
    directions: int,
    bit_depth: int = 8,
    mode: SamplingMode = SamplingMode.ROUND,
) -> np.ndarray:
    """Per-pixel recomputation of :func:`ldrp.descriptor.scale_histogram`."""
    minimum = 2 * scale + 1
    if image.height < minimum or image.width < minimum:
        raise ValueError(
            f"image {image.height}x{image.width} is too small for scale {scale}; "
            f"needs at least {minimum}x{minimum}"
        )
    pairs = pair_count(scale)
    counts = np.zeros(1 << directions, dtype=np.int64)
    for row in range(scale, image.height - scale):
        for col in range(scale, image.width - scale):
            codes = [
                direction_code(directional_bits(image, row, col, k, scale, directions, mode))
                for k in range(1, directions + 1)
            ]
            tau = transform_center(int(image.pixels[row, col]), pairs, bit_depth)
            counts[relation_pattern(codes, tau)] += 1
    return counts


def multiscale_descriptor_reference(image: GrayImage, params: LdrpParams) -> MultiScaleDescriptor:
    """Per-pixel recomputation of :func:`ldrp.descriptor.multiscale_descriptor`."""
    blocks = [
        scale_histogram_reference(image, scale, params.directions, params.bit_depth, params.sampling)
        for scale in params.scales
    ]
    counts = np.concatenate(blocks)
    return MultiScaleDescriptor(counts / int(counts.sum()), params)
