import json
import math

import numpy as np
import pytest

from fanct import DiskPrimitive, LineCoords, Phantom
from oracles import ray_march_line_integral


def single_disk(cx, cy, a, mu, R=1.0):
    return Phantom(primitives=(DiskPrimitive(cx, cy, a, mu),), R=R)


class TestConstruction:
    def test_containment_enforced(self):
        with pytest.raises(ValueError, match="containment"):
            single_disk(0.8, 0.0, 0.4, 1.0)

    def test_exact_fit_allowed(self):
        single_disk(0.5, 0.0, 0.5, 1.0)

    def test_negative_total_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.5, 1.0),
                                DiskPrimitive(0.0, 0.0, 0.2, -1.5)), R=1.0)

    def test_nested_contrast_allowed(self):
        ph = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.5, 1.0),
                                 DiskPrimitive(0.0, 0.0, 0.2, -0.6)), R=1.0)
        assert ph.attenuation_at(0.0, 0.0) == pytest.approx(0.4)

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            DiskPrimitive(0.0, 0.0, 0.0, 1.0)

    def test_json_round_trip(self, two_disk_phantom):
        blob = json.dumps(two_disk_phantom.to_dict())
        assert Phantom.from_dict(json.loads(blob)) == two_disk_phantom


class TestAttenuationAt:
    def test_empty_phantom(self):
        ph = Phantom(primitives=(), R=1.0)
        assert ph.attenuation_at(0.2, -0.1) == 0.0

    def test_inside_single_disk(self):
        assert single_disk(0.0, 0.0, 0.5, 1.0).attenuation_at(0.2, 0.0) == 1.0

    def test_boundary_counts_inside(self):
        assert single_disk(0.0, 0.0, 0.5, 1.0).attenuation_at(0.5, 0.0) == 1.0

    def test_overlap_is_additive(self):
        ph = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.5, 0.5),
                                 DiskPrimitive(0.1, 0.0, 0.5, 0.3)), R=1.0)
        assert ph.attenuation_at(0.05, 0.0) == pytest.approx(0.8)

    def test_zero_outside_support(self):
        ph = single_disk(0.0, 0.0, 0.5, 1.0, R=0.6)
        assert ph.attenuation_at(0.7, 0.0) == 0.0

    def test_vectorized_matches_scalar(self, two_disk_phantom, rng):
        xs = rng.uniform(-1, 1, 50)
        ys = rng.uniform(-1, 1, 50)
        arr = two_disk_phantom.attenuation_at(xs, ys)
        for x, y, v in zip(xs, ys, arr):
            assert two_disk_phantom.attenuation_at(float(x), float(y)) == v


class TestLineIntegral:
    def test_diameter_chord(self):
        ph = single_disk(0.0, 0.0, 1.0, 1.0)
        for sigma in (0.0, 0.4, 2.0, 5.5):
            assert ph.line_integral(LineCoords(0.0, sigma)) == pytest.approx(2.0, abs=1e-15)

    def test_three_four_five_chord(self):
        ph = single_disk(0.0, 0.0, 1.0, 1.0)
        for sigma in (0.0, 1.1, 4.0):
            assert ph.line_integral(LineCoords(0.6, sigma)) == pytest.approx(1.6, abs=1e-14)

    def test_offset_disk_against_ray_march(self, offset_disk):
        line = LineCoords(0.1, 0.9)
        got = offset_disk.line_integral(line)
        # spec-scale oracle: 1e5 points resolves a jumpy integrand to ~2e-5
        coarse = ray_march_line_integral(offset_disk, 0.1, 0.9, n_samples=100_001)
        assert got == pytest.approx(coarse, abs=3e-5)
        fine = ray_march_line_integral(offset_disk, 0.1, 0.9, n_samples=4_000_001)
        assert got == pytest.approx(fine, rel=1e-6)

    def test_zero_beyond_support(self, two_disk_phantom):
        assert two_disk_phantom.line_integral(LineCoords(1.0, 0.3)) == 0.0
        assert two_disk_phantom.line_integral(LineCoords(-1.2, 0.3)) == 0.0

    def test_same_line_both_parameterizations(self, two_disk_phantom, rng):
        for _ in range(200):
            eta = rng.uniform(-1.0, 1.0)
            sigma = rng.uniform(0.0, 2.0 * math.pi)
            a = two_disk_phantom.line_integral(LineCoords(eta, sigma))
            b = two_disk_phantom.line_integral(LineCoords(-eta, sigma + math.pi))
            assert abs(a - b) < 1e-12

    def test_additivity_exact(self, rng):
        d1 = DiskPrimitive(-0.2, 0.1, 0.35, 0.5)
        d2 = DiskPrimitive(0.25, -0.15, 0.3, 0.3)
        both = Phantom(primitives=(d1, d2), R=1.0)
        p1 = Phantom(primitives=(d1,), R=1.0)
        p2 = Phantom(primitives=(d2,), R=1.0)
        for _ in range(100):
            line = LineCoords(rng.uniform(-1, 1), rng.uniform(0, 2 * math.pi))
            assert both.line_integral(line) == p1.line_integral(line) + p2.line_integral(line)

    def test_random_lines_against_ray_march(self, rng):
        # single-disk phantoms + exact additivity (above) cover the multi-disk case
        checked = 0
        while checked < 30:
            cx, cy = rng.uniform(-0.4, 0.4, 2)
            a = rng.uniform(0.35, 0.5)
            if math.hypot(cx, cy) + a > 1.0:
                continue
            ph = single_disk(cx, cy, a, 1.0)
            eta = rng.uniform(-1.0, 1.0)
            sigma = rng.uniform(0.0, 2.0 * math.pi)
            got = ph.line_integral(LineCoords(eta, sigma))
            if got < 0.5:
                continue
            oracle = ray_march_line_integral(ph, eta, sigma, n_samples=2_000_001)
            assert got == pytest.approx(oracle, rel=2e-6)
            checked += 1


class TestRaster:
    def test_empty_phantom_all_zero(self):
        img = Phantom(primitives=(), R=1.0).raster(4)
        assert img.values.shape == (4, 4)
        assert np.all(img.values == 0.0)

    def test_piecewise_constant_interior(self):
        img = single_disk(0.0, 0.0, 0.5, 1.0).raster(128)
        rr = img.radius_grid()
        inside = rr <= 0.5
        assert np.all(img.values[inside] == 1.0)
        assert img.values[inside].mean() == 1.0
        assert np.all(img.values[~inside] == 0.0)

    def test_disk_area_quadrature(self):
        img = single_disk(0.0, 0.0, 0.5, 1.0).raster(256)
        pixel_area = (2.0 / 255) ** 2
        measured = np.count_nonzero(img.values) * pixel_area
        assert measured == pytest.approx(math.pi * 0.25, rel=0.02)

    def test_needs_two_pixels(self, unit_support_disk):
        with pytest.raises(ValueError):
            unit_support_disk.raster(1)

    def test_orientation_row_is_y(self):
        img = single_disk(0.0, 0.6, 0.2, 1.0).raster(64)
        ys = img.axis
        top_half = img.values[ys > 0.3, :]
        bottom_half = img.values[ys < -0.3, :]
        assert top_half.sum() > 0
        assert bottom_half.sum() == 0
