import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from frameslab.convex_body import ball, ellipsoid
from frameslab.errors import DomainError, ResourceError
from frameslab.fourier_body import (HERZ_CONSTANT, evaluate, fit_herz_constant, ft_indicator_exact,
                                    ft_indicator_quadrature, ft_radial, herz_error_scan, herz_main_term,
                                    scaled_error_peak)
from frameslab.special_functions import bessel_j_zeros


def radial_oracle(d, r):
    # int_{|x|<=1} cos(2 pi r x_1) dx written as a 1-D integral over x_1
    from frameslab.convex_body import unit_ball_volume
    slab = unit_ball_volume(d - 1)
    a = (d - 1) / 2
    val, _ = integrate.quad(lambda t: math.cos(2 * math.pi * r * t), -1, 1, weight="alg", wvar=(a, a),
                            epsabs=1e-14, limit=400)
    return slab * val


class TestExact:
    def test_dc_value_is_volume(self, backend):
        for body in (ball(2), ball(3), ellipsoid(2, 1), ellipsoid(1, 2, 3), ball(5, 0.7)):
            assert ft_indicator_exact(body, np.zeros(body.dim)) == pytest.approx(body.volume, rel=1e-12)

    def test_small_xi_tends_to_pi(self, backend):
        assert ft_indicator_exact(ball(2), [1e-9, 0]) == pytest.approx(math.pi, rel=1e-12)

    def test_ball3_at_unit_frequency(self, backend):
        assert ft_indicator_exact(ball(3), [0, 1.0, 0]) == pytest.approx(-1 / math.pi, abs=1e-12)

    def test_ellipse_change_of_variables(self, backend):
        for t in (0.3, 1.7, 9.2):
            assert ft_indicator_exact(ellipsoid(2, 1), [0, t]) == pytest.approx(
                2 * ft_indicator_exact(ball(2), [0, t]), rel=1e-13, abs=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_against_radial_integral(self, backend, d):
        for r in (0.1, 0.8, 2.3, 5.0):
            assert ft_indicator_exact(ball(d), np.eye(d)[0] * r) == pytest.approx(radial_oracle(d, r), abs=1e-12)

    def test_scaled_ball(self, backend):
        r0, xi = 1.7, np.array([0.4, 1.1, -0.2])
        want = r0 ** 3 * ft_indicator_exact(ball(3), r0 * xi)
        assert ft_indicator_exact(ball(3, r0), xi) == pytest.approx(want, rel=1e-13)

    def test_radial_matches_exact(self):
        rho = np.linspace(0, 10, 101)
        xi = np.stack([rho, np.zeros_like(rho)], axis=1)
        assert np.array_equal(ft_radial(2, 1.0, rho), ft_indicator_exact(ball(2), xi))

    def test_bounded_by_volume(self, rng):
        body = ellipsoid(2, 1, 0.5)
        xi = rng.uniform(-10, 10, (2000, 3))
        assert np.all(np.abs(ft_indicator_exact(body, xi)) <= body.volume)

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            ft_indicator_exact(ball(2), [np.nan, 0])

    def test_ball_zeros_at_bessel_zero_radii(self):
        r = bessel_j_zeros(1, 20) / (2 * math.pi)
        vals = ft_indicator_exact(ball(2), np.stack([r, 0 * r], axis=1))
        assert np.max(np.abs(vals)) <= 1e-13


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=3, max_size=3))
def test_even_exactly(xi):
    body = ellipsoid(1.3, 0.4, 2.0)
    assert ft_indicator_exact(body, xi) == ft_indicator_exact(body, -np.asarray(xi))


class TestQuadrature:
    def test_unit_disk_e1(self):
        assert ft_indicator_quadrature(ball(2), [1.0, 0.0], 1e-8) == pytest.approx(
            ft_indicator_exact(ball(2), [1.0, 0.0]), abs=1e-8)

    def test_dc(self):
        assert ft_indicator_quadrature(ball(2), [0.0, 0.0], 1e-10) == pytest.approx(math.pi, abs=1e-10)

    def test_ellipse(self):
        xi = [0.3, 0.7]
        assert ft_indicator_quadrature(ellipsoid(2, 1), xi, 1e-9) == pytest.approx(
            ft_indicator_exact(ellipsoid(2, 1), xi), abs=1e-9)

    def test_three_dim_ellipsoid(self):
        xi = [0.9, -0.4, 1.3]
        body = ellipsoid(1.5, 1.0, 0.6)
        assert ft_indicator_quadrature(body, xi, 1e-9) == pytest.approx(ft_indicator_exact(body, xi), abs=1e-9)

    def test_budget_exceeded_carries_estimate(self):
        with pytest.raises(ResourceError) as info:
            ft_indicator_quadrature(ball(3), [30.0, 10.0, 5.0], 1e-10, max_nodes=64 ** 3)
        assert info.value.estimate is not None
        assert info.value.error_bound is not None and info.value.error_bound > 0

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            ft_indicator_quadrature(ball(2), [1, 0], 1e-12)


class TestMainTerm:
    def test_vanishes_on_phase_grid(self):
        for d in (2, 3, 5):
            for m in (3, 10, 41):
                r = m / 2 + (d - 1) / 8
                assert abs(herz_main_term(ball(d), np.eye(d)[0] * r)) <= 1e-15

    def test_disk_at_ten(self):
        want = -(math.sqrt(2) / 2) / math.pi * 10 ** -1.5
        got = herz_main_term(ball(2), [10.0, 0.0])
        assert got == pytest.approx(want, rel=1e-12)
        assert abs(ft_indicator_exact(ball(2), [10.0, 0.0]) - got) <= 10 ** -2.5

    def test_ball3_at_ten(self):
        want = -1 / math.pi * 1e-2
        got = herz_main_term(ball(3), [0, 0, 10.0])
        assert got == pytest.approx(want, rel=1e-12)
        assert abs(ft_indicator_exact(ball(3), [0, 0, 10.0]) - got) <= 10 ** -3

    def test_guard(self):
        with pytest.raises(DomainError):
            herz_main_term(ball(2), [0.5, 0.5])

    def test_evaluate_splits_exactly(self):
        ev = evaluate(ellipsoid(2, 1), [3.0, 4.0])
        assert ev.exact == ev.main_term + ev.error_term

    @pytest.mark.parametrize("body", [ball(2), ball(3), ellipsoid(2, 1), ellipsoid(1, 2, 0.5)])
    def test_fitted_constant(self, body):
        direction = np.ones(body.dim)
        c = fit_herz_constant(body, direction=direction)
        assert c == pytest.approx(HERZ_CONSTANT, rel=1e-3)


class TestErrorScan:
    def test_disk_scan_finite(self):
        scan = herz_error_scan(ball(2), 4, 64, 200)
        assert np.all(np.isfinite(scan.scaled_error))
        assert scan.max_scaled_error < 3 / (16 * math.pi ** 2) * 1.0001

    def test_ball3_against_value_near_eight(self):
        scan = herz_error_scan(ball(3), 4, 64, 200)
        c8 = scaled_error_peak(ball(3), 7.5, 8.5)
        assert scan.max_scaled_error <= 2 * c8

    def test_ball3_remainder_closed_form(self):
        # exact - main = sin(2 pi r) / (2 pi^2 r^3) for the unit 3-ball
        scan = herz_error_scan(ball(3), 4, 64, 500)
        want = np.sin(2 * math.pi * scan.radii) / (2 * math.pi ** 2 * scan.radii ** 3)
        assert np.max(np.abs(scan.error - want) * scan.radii ** 3) <= 1e-10

    def test_ellipse_bounded_against_quadrature(self):
        body = ellipsoid(2, 1)
        scan = herz_error_scan(body, 4, 64, 200, direction=[1.0, 0.0])
        assert scan.max_scaled_error <= 2 * scan.window_max(4, 16)
        for r in (4.0, 6.5):
            q = ft_indicator_quadrature(body, [r, 0.0], 1e-9)
            assert q == pytest.approx(ft_indicator_exact(body, [r, 0.0]), abs=2e-9)

    def test_peak_beats_grid(self):
        scan = herz_error_scan(ball(2), 4, 16, 200)
        assert scaled_error_peak(ball(2), 4, 16) >= scan.max_scaled_error

    def test_bad_range(self):
        with pytest.raises(DomainError):
            herz_error_scan(ball(2), 0.5, 4, 10)
