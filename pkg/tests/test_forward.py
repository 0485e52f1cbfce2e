import math

import numpy as np
import pytest

from fanct import (DiskPrimitive, FanGeometry, FanSinogram, LineCoords,
                   Phantom, RayCoords, count_floor_clamps, fan_to_line,
                   log_transform, project_fan, project_parallel,
                   rebin_to_parallel, ray_entry_exit)
from oracles import ray_march_fan_exponent


class TestProjectFan:
    def test_empty_phantom_is_flat(self, small_geometry):
        s = project_fan(Phantom(primitives=(), R=1.0), small_geometry)
        kl2 = small_geometry.K / small_geometry.L ** 2
        assert np.all(s.values == kl2)

    def test_central_ray_of_unit_disk(self):
        geom = FanGeometry(D=3.0, L=1.0, R=1.0, K=1.0, n_alpha=33, n_tau=48)
        ph = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 1.0, 1.0),), R=1.0)
        s = project_fan(ph, geom)
        assert s.values[0, 16] == pytest.approx(math.exp(-2.0), rel=1e-14)

    def test_against_dx_prime_ray_march(self):
        # the exact chord integral must match the ray-parameterized exponent
        ph = Phantom(primitives=(DiskPrimitive(0.3, 0.0, 0.2, 1.5),), R=1.0)
        geom = FanGeometry(D=3.0, L=1.0, R=1.0, K=1.0, n_alpha=9, n_tau=8)
        alpha, tau = 0.08, 0.4
        x1, x2 = ray_entry_exit(alpha, geom)
        exponent = ray_march_fan_exponent(ph, alpha, tau, geom.D, x1, x2,
                                          n_samples=6_000_001)
        chord = ph.line_integral(fan_to_line(RayCoords(alpha, tau), geom.D))
        assert chord == pytest.approx(exponent, rel=1e-6)
        got = geom.K / geom.L ** 2 * math.exp(-chord)
        assert got == pytest.approx(math.exp(-exponent), rel=1e-6)

    def test_phantom_must_fit_geometry(self, small_geometry):
        big = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 1.0, 1.0),), R=1.2)
        with pytest.raises(ValueError, match="support"):
            project_fan(big, small_geometry)

    def test_monotone_in_added_disk(self, small_geometry):
        base = Phantom(primitives=(DiskPrimitive(-0.2, 0.1, 0.35, 0.5),), R=1.0)
        more = Phantom(primitives=base.primitives + (DiskPrimitive(0.25, -0.15, 0.3, 0.3),), R=1.0)
        s0 = project_fan(base, small_geometry)
        s1 = project_fan(more, small_geometry)
        assert np.all(s1.values <= s0.values)

    def test_intensity_scaling(self, unit_support_disk):
        g1 = FanGeometry(D=3.0, L=1.0, R=1.0, K=1.0, n_alpha=17, n_tau=24)
        g2 = FanGeometry(D=3.0, L=1.0, R=1.0, K=2.0, n_alpha=17, n_tau=24)
        s1 = project_fan(unit_support_disk, g1)
        s2 = project_fan(unit_support_disk, g2)
        np.testing.assert_allclose(s2.values, 2.0 * s1.values, rtol=1e-15)

    def test_misses_are_exactly_flat(self, small_geometry):
        # rays past the disk see zero attenuation: exp(0) stays exact
        ph = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.2, 1.0),), R=1.0)
        s = project_fan(ph, small_geometry)
        kl2 = small_geometry.K / small_geometry.L ** 2
        eta = small_geometry.D * np.sin(s.alpha_axis)
        far = np.abs(eta) > 0.25
        assert np.all(s.values[:, far] == kl2)


class TestLogTransform:
    def test_flat_maps_to_zero(self, small_geometry):
        s = project_fan(Phantom(primitives=(), R=1.0), small_geometry)
        assert np.all(log_transform(s) == 0.0)

    def test_log_inverse(self, small_geometry):
        kl2 = small_geometry.K / small_geometry.L ** 2
        values = np.full((small_geometry.n_tau, small_geometry.n_alpha), kl2 * math.exp(-2.0))
        phi = log_transform(FanSinogram(geom=small_geometry, values=values))
        np.testing.assert_allclose(phi, 2.0, rtol=1e-14)

    def test_composition_identity(self, two_disk_phantom, small_geometry):
        s = project_fan(two_disk_phantom, small_geometry)
        phi = log_transform(s)
        alpha = s.alpha_axis
        tau = s.tau_axis
        for i in range(0, small_geometry.n_tau, 7):
            for j in range(small_geometry.n_alpha):
                line = fan_to_line(RayCoords(float(alpha[j]), float(tau[i])), small_geometry.D)
                assert phi[i, j] == pytest.approx(
                    two_disk_phantom.line_integral(line), abs=1e-12)

    def test_k_and_l_cancel(self, unit_support_disk):
        gA = FanGeometry(D=3.0, L=1.0, R=1.0, K=1.0, n_alpha=17, n_tau=24)
        gB = FanGeometry(D=3.0, L=2.5, R=1.0, K=7.0, n_alpha=17, n_tau=24)
        phiA = log_transform(project_fan(unit_support_disk, gA))
        phiB = log_transform(project_fan(unit_support_disk, gB))
        np.testing.assert_allclose(phiA, phiB, atol=1e-13)

    def test_floor_clamp_and_error(self, small_geometry):
        kl2 = small_geometry.K / small_geometry.L ** 2
        values = np.full((small_geometry.n_tau, small_geometry.n_alpha), kl2)
        s = FanSinogram(geom=small_geometry, values=values)
        s.values[0, 0] = 1e-320  # subnormal, below the default floor
        assert count_floor_clamps(s) == 1
        phi = log_transform(s)
        assert np.isfinite(phi[0, 0])
        with pytest.raises(ValueError, match="corrupted"):
            log_transform(s, floor=None)
        assert count_floor_clamps(s, floor=0.0) == 0

    def test_positive_intensity_enforced_on_type(self, small_geometry):
        values = np.ones((small_geometry.n_tau, small_geometry.n_alpha))
        values[3, 4] = 0.0
        with pytest.raises(ValueError, match="positive"):
            FanSinogram(geom=small_geometry, values=values)


class TestProjectParallel:
    def test_empty_phantom(self):
        s = project_parallel(Phantom(primitives=(), R=1.0), 16, 12)
        assert np.all(s.values == 0.0)

    def test_centered_disk_chords(self, unit_support_disk):
        s = project_parallel(unit_support_disk, 129, 90)
        eta = s.eta_axis
        expected = np.where(np.abs(eta) <= 0.5, 2.0 * np.sqrt(np.maximum(0.25 - eta ** 2, 0.0)), 0.0)
        np.testing.assert_allclose(s.values, expected[None, :], atol=1e-14)
        mid = np.argmin(np.abs(eta))
        assert np.all(s.values[:, mid] == pytest.approx(1.0, abs=1e-14))

    def test_sigma_flip_symmetry(self, offset_disk):
        s = project_parallel(offset_disk, 129, 360)
        flipped = s.values[(np.arange(360) + 180) % 360][:, ::-1]
        np.testing.assert_allclose(s.values, flipped, atol=1e-12)

    def test_counts_validated(self, unit_support_disk):
        with pytest.raises(ValueError):
            project_parallel(unit_support_disk, 3, 90)


class TestRebinToParallel:
    def test_empty_phantom_rebins_to_zero(self, small_geometry):
        s = project_fan(Phantom(primitives=(), R=1.0), small_geometry)
        reb = rebin_to_parallel(s, 33, 24)
        assert np.all(reb.values == 0.0)

    def test_dense_disk_against_direct_projection(self, unit_support_disk, desk_geometry):
        s = project_fan(unit_support_disk, desk_geometry)
        reb = rebin_to_parallel(s, 129, 360)
        ref = project_parallel(unit_support_disk, 129, 360)
        err = np.abs(reb.values - ref.values)
        # calibrated once and frozen: bilinear interpolation across the disk-edge
        # square-root point dominates (measured 0.0435); off the edge it is ~1e-4
        assert err.max() <= 0.05
        edge_free = np.abs(np.abs(reb.eta_axis) - 0.5) > 0.05
        assert err[:, edge_free].max() <= 1e-3

    def test_support_boundary_zero(self, unit_support_disk, desk_geometry):
        # |eta| = R columns: tangent lines carry no attenuation
        s = project_fan(unit_support_disk, desk_geometry)
        reb = rebin_to_parallel(s, 65, 48)
        assert np.all(reb.values[:, 0] == 0.0)
        assert np.all(reb.values[:, -1] == 0.0)
