import math

import numpy as np
import pytest

from ldrp import (
    GrayImage,
    SamplingMode,
    load_image,
    neighbor_offset,
    read_pgm,
    resize,
    sample_neighbor,
    to_grayscale,
    write_pgm,
)
from ldrp.image import unit_direction


def const_image(value: int, side: int = 9) -> GrayImage:
    return GrayImage(np.full((side, side), value, dtype=np.uint8))


class TestGrayImage:
    def test_validates_range(self):
        with pytest.raises(ValueError):
            GrayImage(np.full((4, 4), 9, dtype=np.uint8), bit_depth=3)

    def test_rejects_non_2d(self):
        with pytest.raises(ValueError):
            GrayImage(np.zeros((4, 4, 3), dtype=np.uint8))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            GrayImage(np.zeros((0, 4), dtype=np.uint8))

    def test_immutable(self):
        img = const_image(7)
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 1

    def test_width_height_orientation(self):
        img = GrayImage(np.zeros((2, 5), dtype=np.uint8))
        assert img.height == 2
        assert img.width == 5


class TestToGrayscale:
    @pytest.mark.parametrize(
        "rgb,expected",
        [((0, 0, 0), 0), ((255, 255, 255), 255), ((100, 100, 100), 100)],
    )
    def test_gray_fixed_points(self, rgb, expected):
        raster = np.full((3, 3, 3), 0, dtype=np.uint8)
        raster[..., 0], raster[..., 1], raster[..., 2] = rgb
        assert to_grayscale(raster).pixels[1, 1] == expected

    def test_luma_weights(self):
        raster = np.zeros((1, 1, 3), dtype=np.uint8)
        raster[0, 0] = (200, 10, 50)
        # 0.299*200 + 0.587*10 + 0.114*50 = 71.37 -> 71
        assert to_grayscale(raster).pixels[0, 0] == 71

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            to_grayscale(np.zeros((4, 4), dtype=np.uint8))


class TestResize:
    def test_identity(self):
        img = GrayImage(np.arange(64 * 64, dtype=np.int64).reshape(64, 64) % 256)
        assert resize(img, 64, 64) == img

    def test_constant_invariant(self):
        img = GrayImage(np.full((2, 2), 50, dtype=np.uint8))
        out = resize(img, 4, 4)
        assert out.width == 4 and out.height == 4
        assert np.all(out.pixels == 50)

    def test_midpoint_rounds_half_up(self):
        # bilinear kernel by hand: the middle output pixel sits exactly between
        # the two inputs, so its value is 0.5*0 + 0.5*255 = 127.5 -> 128
        img = GrayImage(np.array([[0, 255]], dtype=np.uint8))
        assert list(resize(img, 3, 1).pixels[0]) == [0, 128, 255]

    def test_rejects_zero_target(self):
        with pytest.raises(ValueError):
            resize(const_image(1), 0, 4)

    def test_downsample_dimensions(self):
        img = GrayImage(np.random.default_rng(0).integers(0, 256, (92, 112), dtype=np.uint8))
        out = resize(img, 64, 64)
        assert (out.width, out.height) == (64, 64)


class TestNeighborOffset:
    def test_right_neighbor(self):
        assert neighbor_offset(2, 1, 8) == (0, 2)

    def test_up_neighbor(self):
        assert neighbor_offset(2, 3, 8) == (-2, 0)

    def test_diagonal_rounding(self):
        # 3/sqrt(2) = 2.121 rounds to 2 in each component
        assert neighbor_offset(3, 2, 8) == (-2, 2)

    def test_rejects_direction_out_of_range(self):
        with pytest.raises(ValueError):
            neighbor_offset(2, 9, 8)
        with pytest.raises(ValueError):
            neighbor_offset(2, 0, 8)

    @pytest.mark.parametrize("directions", [4, 6, 8, 12, 16])
    def test_norm_is_radius_before_rounding(self, directions):
        for radius in (1, 2, 5):
            for k in range(1, directions + 1):
                d_row, d_col = neighbor_offset(radius, k, directions, SamplingMode.BILINEAR)
                assert math.hypot(d_row, d_col) == pytest.approx(radius, abs=1e-9)

    @pytest.mark.parametrize("directions", [4, 8, 16])
    def test_opposite_directions_negate_exactly(self, directions):
        half = directions // 2
        for radius in (1, 3):
            for k in range(1, half + 1):
                a = neighbor_offset(radius, k, directions, SamplingMode.BILINEAR)
                b = neighbor_offset(radius, k + half, directions, SamplingMode.BILINEAR)
                assert a[0] == -b[0] and a[1] == -b[1]

    def test_axis_directions_are_exact(self):
        for k, expected in [(1, (0, 3)), (3, (-3, 0)), (5, (0, -3)), (7, (3, 0))]:
            d_row, d_col = neighbor_offset(3, k, 8, SamplingMode.BILINEAR)
            assert (d_row, d_col) == expected

    def test_unit_direction_covers_all_quadrants(self):
        angles = [unit_direction(k, 8) for k in range(1, 9)]
        signs = {(np.sign(c), np.sign(s)) for c, s in angles}
        assert len(signs) >= 8  # axes plus all four diagonal quadrants


class TestSampleNeighbor:
    def test_constant_field(self):
        img = const_image(7)
        for mode in SamplingMode:
            for k in range(1, 9):
                for r in (1, 2, 3):
                    assert sample_neighbor(img, 4, 4, r, k, 8, mode) == 7

    def test_direct_lookup_right(self):
        arr = np.zeros((20, 20), dtype=np.uint8)
        arr[10, 12] = 98
        img = GrayImage(arr)
        assert sample_neighbor(img, 10, 10, 2, 1, 8) == 98

    def test_grid_aligned_matches_between_modes(self):
        rng = np.random.default_rng(3)
        img = GrayImage(rng.integers(0, 256, (15, 15), dtype=np.uint8))
        for k in (1, 3, 5, 7):  # multiples of 90 degrees for 8 directions
            for r in (1, 2, 4):
                rounded = sample_neighbor(img, 7, 7, r, k, 8, SamplingMode.ROUND)
                interp = sample_neighbor(img, 7, 7, r, k, 8, SamplingMode.BILINEAR)
                assert rounded == interp

    def test_bilinear_interpolates_between_pixels(self):
        arr = np.zeros((9, 9), dtype=np.uint8)
        arr[4 - 1, 4 + 1] = 100  # the up-right diagonal cell for N=8, r=1
        img = GrayImage(arr)
        value = sample_neighbor(img, 4, 4, 1, 2, 8, SamplingMode.BILINEAR)
        # r=1 diagonal lands at fractional coordinates strictly between pixels
        assert 0.0 < value < 100.0

    def test_out_of_bounds_raises(self):
        img = const_image(1, side=5)
        with pytest.raises(IndexError):
            sample_neighbor(img, 0, 2, 2, 3, 8)  # up by 2 from row 0
        with pytest.raises(IndexError):
            sample_neighbor(img, 4, 4, 1, 1, 8)  # right of the last column


class TestPgmRoundTrip:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(11)
        img = GrayImage(rng.integers(0, 256, (13, 17), dtype=np.uint8))
        path = tmp_path / "x.pgm"
        write_pgm(img, path)
        assert read_pgm(path) == img

    def test_header_comments(self, tmp_path):
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5\n# a comment\n2 2\n255\n\x01\x02\x03\x04")
        img = read_pgm(path)
        assert img.pixels.tolist() == [[1, 2], [3, 4]]

    def test_rejects_ascii_pgm(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n2 2\n255\n1 2 3 4\n")
        with pytest.raises(ValueError):
            read_pgm(path)

    def test_rejects_truncated_raster(self, tmp_path):
        path = tmp_path / "t.pgm"
        path.write_bytes(b"P5\n4 4\n255\n\x00\x00")
        with pytest.raises(ValueError):
            read_pgm(path)


class TestLoadImage:
    def test_png_gray_round_trip(self, tmp_path):
        from PIL import Image

        rng = np.random.default_rng(5)
        arr = rng.integers(0, 256, (10, 12), dtype=np.uint8)
        path = tmp_path / "g.png"
        Image.fromarray(arr, mode="L").save(path)
        assert np.array_equal(load_image(path).pixels, arr)

    def test_png_rgb_uses_luma(self, tmp_path):
        from PIL import Image

        arr = np.zeros((4, 4, 3), dtype=np.uint8)
        arr[..., 0] = 200
        arr[..., 1] = 10
        arr[..., 2] = 50
        path = tmp_path / "c.png"
        Image.fromarray(arr, mode="RGB").save(path)
        assert np.all(load_image(path).pixels == 71)

    def test_pgm_dispatch(self, tmp_path):
        img = GrayImage(np.arange(16, dtype=np.uint8).reshape(4, 4))
        path = tmp_path / "d.pgm"
        write_pgm(img, path)
        assert load_image(path) == img
