"""Parabolic mirror: mode structure, rate modification, two-ray field."""

from math import log, pi, sqrt

import numpy as np
import pytest

from atomfield import free_space, parabolic_mirror as pm
from atomfield.free_space import RadiationZoneWarning, TwoLevelAtom
from atomfield.numerics import QuadratureSpec, integrate_1d


@pytest.fixture
def geometry():
    return pm.ParabolicGeometry(focal_length=50.0, wavenumber=1.0)


class TestGeometry:
    def test_cutoff_angle_identity(self, geometry):
        assert np.tan(geometry.theta0 / 2.0) == pytest.approx(
            1.0 / (2.0 * geometry.kf), rel=1e-15
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            pm.ParabolicGeometry(focal_length=-1.0, wavenumber=1.0)
        with pytest.raises(ValueError):
            pm.ParabolicGeometry(focal_length=1.0, wavenumber=0.0)


class TestParabolicCoordinates:
    def test_surface_is_eta_equals_f(self, geometry):
        f = geometry.focal_length
        for rho in (0.0, 3.0, 20.0):
            pt = pm.ParabolicPoint(z=rho**2 / (4.0 * f), rho=rho)
            assert pt.parabolic_eta(geometry) == pytest.approx(f, rel=1e-12)
            assert not pt.inside(geometry)

    def test_focus_coordinates(self, geometry):
        pt = pm.ParabolicPoint(z=geometry.focal_length, rho=0.0)
        assert pt.parabolic_eta(geometry) == 0.0
        assert pt.focus_distance(geometry) == 0.0

    def test_xi_eta_product(self, geometry):
        # rho^2 = 4 xi eta in these coordinates
        pt = pm.ParabolicPoint(z=12.0, rho=7.0)
        xi = pt.parabolic_xi(geometry)
        eta = pt.parabolic_eta(geometry)
        assert 4.0 * xi * eta == pytest.approx(49.0, rel=1e-12)


class TestModes:
    def test_discretized_mu(self):
        geo = pm.ParabolicGeometry(focal_length=1.0, wavenumber=200.0)
        assert pm.discretized_mu(geo, 3) == pytest.approx(3.0 * pi / log(400.0))
        with pytest.raises(ValueError):
            pm.discretized_mu(geo, 0)

    def test_mode_vanishes_at_cutoff(self):
        geo = pm.ParabolicGeometry(focal_length=1.0, wavenumber=200.0)
        t0 = geo.theta0
        assert pm.discrete_mode(geo, 1, t0 / 2.0) == 0.0
        assert pm.discrete_mode(geo, 1, pi - t0 / 2.0) == 0.0
        assert pm.discrete_mode(geo, 1, pi / 2.0) != 0.0

    def test_mode_orthonormality(self):
        # with the sin(theta) d(theta) weight the discrete angular modes are
        # orthogonal with norm 1 / (2 pi); the log-tangent substitution turns
        # the integrand into a plain Fourier sine over m full periods
        geo = pm.ParabolicGeometry(focal_length=1.0, wavenumber=200.0)
        t0 = geo.theta0
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14, max_subdivisions=400)

        def overlap(m, n):
            val, _ = integrate_1d(
                lambda th: pm.discrete_mode(geo, m, th)
                * pm.discrete_mode(geo, n, th)
                * np.sin(th),
                (t0, pi - t0),
                spec,
            )
            return val

        assert overlap(1, 1) == pytest.approx(1.0 / (2.0 * pi), rel=1e-8)
        assert overlap(2, 2) == pytest.approx(1.0 / (2.0 * pi), rel=1e-8)
        assert abs(overlap(1, 2)) < 1e-10
        assert abs(overlap(1, 3)) < 1e-10

    def test_continuum_angular_function_phase(self):
        # |chi_mu|^2 = 1 / (4 pi^2 sin^2 theta), independent of mu
        val = pm.mode_angular_function(0, 1.7, 0.9, 0.0)
        assert abs(val) ** 2 == pytest.approx(
            1.0 / (4.0 * pi**2 * np.sin(0.9) ** 2), rel=1e-12
        )

    def test_angular_function_domain(self):
        with pytest.raises(ValueError):
            pm.mode_angular_function(0, 1.0, 0.0, 0.0)


class TestRateModification:
    def test_free_space_rate_recovered(self):
        atom = TwoLevelAtom.from_linewidth(1.0, 100.0)
        assert pm.free_space_rate_integral(atom) == pytest.approx(atom.gamma, rel=1e-10)

    def test_on_axis_small_height_law(self, geometry):
        # suppressed rate ~ (2/5)(k z)^2 near the vertex
        for z in (1e-4, 1e-3):
            a = geometry.wavenumber * z
            assert pm.on_axis_eta(geometry, z) == pytest.approx(0.4 * a * a, rel=1e-5)

    def test_series_matches_closed_form_at_crossover(self, geometry):
        k = geometry.wavenumber
        below = pm.on_axis_eta(geometry, 0.99e-2 / k)
        above = pm.on_axis_eta(geometry, 1.01e-2 / k)
        assert above - below == pytest.approx(
            0.4 * ((1.01e-2) ** 2 - (0.99e-2) ** 2), rel=1e-3
        )

    def test_quadrature_matches_closed_form_on_axis(self, geometry):
        for z in (0.3, 2.0, 17.0):
            closed = pm.on_axis_eta(geometry, z)
            quad, err = pm.eta_quadrature(geometry, (0.0, 0.0, z))
            assert quad == pytest.approx(closed, rel=1e-9)
            assert err < 1e-8

    def test_reduction_matches_raw_2d(self, geometry):
        point = (0.3, 0.4, 2.0)
        fast, _ = pm.eta_quadrature(geometry, point, method="auto")
        slow, _ = pm.eta_quadrature(
            geometry, point, QuadratureSpec(rel_tol=1e-9, abs_tol=1e-11), method="quad2d"
        )
        assert fast == pytest.approx(slow, rel=1e-7)

    def test_off_axis_far_field_approaches_unity(self, geometry):
        # many wavelengths from the mirror axis the correction dies off
        quad, _ = pm.eta_quadrature(geometry, (30.0, 0.0, 30.0))
        assert abs(quad - 1.0) < 0.01

    def test_vertex_is_dark(self, geometry):
        quad, _ = pm.eta_quadrature(geometry, (0.0, 0.0, 0.0))
        assert quad == pytest.approx(0.0, abs=1e-12)
        atom = TwoLevelAtom(omega_eg=geometry.wavenumber, dipole=1e-3)
        assert pm.modified_rate(geometry, atom, (0.0, 0.0, 0.0)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_outside_point_rejected(self, geometry):
        with pytest.raises(ValueError):
            pm.eta_quadrature(geometry, (0.0, 0.0, -1.0))
        with pytest.raises(ValueError):
            # below the mirror surface at large rho
            pm.eta_quadrature(geometry, (100.0, 0.0, 1.0))

    def test_rate_requires_matching_wavenumber(self, geometry):
        atom = TwoLevelAtom(omega_eg=2.0 * geometry.wavenumber, dipole=1e-3)
        with pytest.raises(ValueError):
            pm.modified_rate(geometry, atom, (0.0, 0.0, 1.0))

    def test_rate_profile(self, geometry):
        profile = pm.rate_profile(geometry, (0.0, 10.0), 21)
        assert profile.positions.size == 21
        assert profile.eta[0] == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(ValueError):
            pm.rate_profile(geometry, (0.0, 1.0), 1)

    def test_cutoff_correction_asymptote(self):
        # 1.5 * integral of sin^3 up to theta0 ~ (3/8) (kf)^-4 for large kf
        geo = pm.ParabolicGeometry(focal_length=1.0, wavenumber=100.0)
        got = pm.angular_cutoff_correction(geo)
        assert got == pytest.approx(0.375 * 100.0**-4, rel=1e-3)


class TestTwoRayField:
    @pytest.fixture
    def atom(self):
        return TwoLevelAtom.from_linewidth(1.0, 100.0)

    @pytest.fixture
    def mirror(self, atom):
        return pm.ParabolicGeometry(focal_length=10.0, wavenumber=atom.omega_eg)

    def test_causal_silence(self, mirror, atom):
        fld = pm.semiclassical_field(mirror, atom, (12.0, 3.0), 0.5)
        assert fld.spherical == 0.0 and fld.plane == 0.0
        assert fld.energy_density == 0.0

    def test_time_reversal_energy_density(self, mirror, atom):
        for point in ((12.0, 3.0), (4.0, 8.0)):
            u_p = pm.semiclassical_field(mirror, atom, point, 30.0).energy_density
            u_m = pm.semiclassical_field(mirror, atom, point, -30.0).energy_density
            assert u_m == pytest.approx(u_p, rel=1e-12)

    def test_plane_term_rides_on_z_plus_f(self, mirror, atom):
        # equal t - (z + f) at fixed rho gives the identical reflected term
        rho = 4.0
        a = pm.semiclassical_field(mirror, atom, (6.0, rho), 30.0).plane
        b = pm.semiclassical_field(mirror, atom, (11.0, rho), 35.0).plane
        assert b == pytest.approx(a, rel=1e-12)

    def test_near_boundary_flag(self, mirror, atom):
        f = mirror.focal_length
        # point just inside the mirror surface at rho = 2 f
        surface_z = (2.0 * f) ** 2 / (4.0 * f)
        fld = pm.semiclassical_field(mirror, atom, (surface_z + 0.05, 2.0 * f), 30.0)
        assert fld.near_boundary
        center = pm.semiclassical_field(mirror, atom, (f, 1.0), 30.0)
        assert not center.near_boundary

    def test_energy_density_includes_interference(self, mirror, atom):
        fld = pm.semiclassical_field(mirror, atom, (12.0, 14.0), 26.0)
        assert fld.spherical != 0.0 and fld.plane != 0.0
        u_sum = abs(fld.spherical) ** 2 + abs(fld.plane) ** 2
        cross = 2.0 * (fld.spherical * np.conj(fld.plane)).real * fld.cos_theta1
        assert fld.energy_density == pytest.approx(u_sum + cross, rel=1e-12)

    def test_guards(self, mirror, atom):
        with pytest.raises(ValueError):
            pm.semiclassical_field(mirror, atom, (10.0, 0.0), 1.0)  # focus
        with pytest.raises(ValueError):
            pm.semiclassical_field(mirror, atom, (0.05, 50.0), 1.0)  # outside
        small = pm.ParabolicGeometry(focal_length=0.1, wavenumber=atom.omega_eg)
        with pytest.raises(ValueError):
            pm.semiclassical_field(small, atom, (0.05, 0.01), 1.0)
        with pytest.warns(RadiationZoneWarning):
            pm.semiclassical_field(mirror, atom, (10.05, 0.0), 1.0)

    def test_field_map_filters_to_interior(self, mirror, atom):
        z = np.linspace(0.5, 30.0, 8)
        rho = np.linspace(0.0, 40.0, 9)
        fmap = pm.field_map(mirror, atom, z, rho, 25.0)
        f = mirror.focal_length
        for zi, rhoi in fmap.points:
            assert pm.ParabolicPoint(z=zi, rho=rhoi).inside(mirror)
        assert fmap.points.shape[0] < z.size * rho.size

    def test_field_map_empty_outside(self, mirror, atom):
        fmap = pm.field_map(mirror, atom, [0.1], [50.0], 25.0)
        assert fmap.points.shape == (0, 2)

    def test_early_map_matches_free_space(self, mirror, atom):
        # before the reflection returns, only the direct spherical wave exists
        fld = pm.semiclassical_field(mirror, atom, (13.0, 4.0), 8.0)
        pt = pm.ParabolicPoint(z=13.0, rho=4.0)
        r1 = pt.focus_distance(mirror)
        theta1 = np.arcsin(4.0 / r1)
        free = free_space.electric_amplitude(atom, r1, theta1, 8.0)
        assert fld.plane == 0.0
        assert fld.spherical == pytest.approx(free, rel=1e-12)
