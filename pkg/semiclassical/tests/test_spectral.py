import math

import numpy as np
from django.test import SimpleTestCase

from ..exceptions import FieldError, GridError, ScheduleError
from ..spectral import (
    SpectralField,
    TripleNormAccumulator,
    WeightSchedule,
    analytic_norm,
    analyticity_width,
    denoise,
    derivative,
    linf_embedding_ratio,
    make_grid,
    norm_evolution_residual,
    product,
    quadrature_square,
    random_band_limited,
    sobolev_norm,
    tail_mass,
    transform_forward,
    triple_norm,
    weight_at,
    weighted_square,
)


class FourierGridTests(SimpleTestCase):
    def test_odd_mode_count_rejected(self):
        """Grids need an even number of modes."""
        with self.assertRaises(GridError):
            make_grid(33, 2 * math.pi)

    def test_nonpositive_length_rejected(self):
        """The period must be positive."""
        with self.assertRaises(GridError):
            make_grid(32, 0.0)

    def test_indices_in_fft_order(self):
        """Mode numbers run 0..n/2 then -n/2+1..-1."""
        grid = make_grid(8, 2 * math.pi)
        self.assertEqual(list(grid.indices), [0, 1, 2, 3, 4, -3, -2, -1])

    def test_dealias_mask_keeps_two_thirds(self):
        """Only modes with |j| <= n/3 survive the 2/3 rule."""
        grid = make_grid(32, 2 * math.pi)
        kept = sorted(abs(j) for j in grid.indices[grid.dealias_mask])
        self.assertEqual(max(kept), 10)
        self.assertEqual(int(np.count_nonzero(grid.dealias_mask)), 21)

    def test_spectral_derivative_of_sine(self):
        """d/dx sin(2x) = 2 cos(2x) to roundoff."""
        grid = make_grid(32, 2 * math.pi)
        field = SpectralField.from_function(grid, lambda x: np.sin(2 * x), real=True)
        np.testing.assert_allclose(derivative(field).values.real, 2 * np.cos(2 * grid.points), atol=1e-12)

    def test_derivative_on_scaled_period(self):
        """Wavenumbers account for the domain length."""
        grid = make_grid(32, 4.0)
        k = 2 * math.pi / 4.0
        field = SpectralField.from_function(grid, lambda x: np.cos(k * x), real=True)
        np.testing.assert_allclose(derivative(field, 2).values.real, -(k**2) * np.cos(k * grid.points), atol=1e-12)

    def test_second_derivative_of_exp_cos(self):
        """d2/dx2 exp(cos x) = (sin^2 x - cos x) exp(cos x)."""
        grid = make_grid(64, 2 * math.pi)
        x = grid.points
        field = SpectralField.from_function(grid, lambda x: np.exp(np.cos(x)), real=True)
        expected = (np.sin(x) ** 2 - np.cos(x)) * np.exp(np.cos(x))
        np.testing.assert_allclose(derivative(field, 2).values.real, expected, atol=1e-10)


class SpectralFieldTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(16, 2 * math.pi)

    def test_real_field_requires_hermitian_coefficients(self):
        """A lone positive mode is not the transform of a real function."""
        coeffs = np.zeros(16, dtype=complex)
        coeffs[1] = 1.0
        with self.assertRaises(FieldError):
            SpectralField(self.grid, coeffs, real=True)

    def test_wrong_length_rejected(self):
        with self.assertRaises(FieldError):
            SpectralField(self.grid, np.zeros(8))

    def test_non_finite_rejected(self):
        coeffs = np.zeros(16, dtype=complex)
        coeffs[2] = np.nan
        with self.assertRaises(FieldError):
            SpectralField(self.grid, coeffs)

    def test_arithmetic_on_mismatched_grids(self):
        """Fields on different grids cannot be combined."""
        other = SpectralField.zeros(make_grid(16, 3.0))
        with self.assertRaises(FieldError):
            SpectralField.zeros(self.grid) + other

    def test_transform_round_trip(self):
        """Values survive forward and inverse transforms."""
        samples = np.exp(np.cos(self.grid.points))
        field = transform_forward(self.grid, samples, real=True)
        np.testing.assert_allclose(field.values.real, samples, atol=1e-13)
        self.assertTrue(field.real)

    def test_coefficients_are_read_only(self):
        field = SpectralField.zeros(self.grid)
        with self.assertRaises(ValueError):
            field.coeffs[0] = 1.0


class NormTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(32, 2 * math.pi)
        self.rng = np.random.default_rng(7)

    def test_constant_field_norm(self):
        """||1||_{H^l_w} = sqrt(L) e^w since <0> = 1."""
        one = transform_forward(self.grid, np.ones(32), real=True)
        for w in (0.0, 0.5, 2.0):
            self.assertAlmostEqual(analytic_norm(one, w, 3.0), math.sqrt(2 * math.pi) * math.exp(w), places=10)

    def test_parseval(self):
        """The w = 0, l = 0 norm matches the rectangle rule for |psi|^2."""
        field = random_band_limited(self.grid, self.rng, real=False)
        self.assertAlmostEqual(weighted_square(field, 0.0, 0.0) / quadrature_square(field), 1.0, places=12)

    def test_monotone_in_weight_and_regularity(self):
        """Norms grow with w and with l."""
        field = random_band_limited(self.grid, self.rng)
        self.assertLess(analytic_norm(field, 0.1, 2), analytic_norm(field, 0.2, 2))
        self.assertLess(analytic_norm(field, 0.1, 2), analytic_norm(field, 0.1, 2.5))

    def test_sobolev_below_analytic(self):
        """||psi||_{H^l} <= ||psi||_{H^l_w} for every w >= 0."""
        for _ in range(20):
            field = random_band_limited(self.grid, self.rng)
            for w in (0.0, 0.1, 1.0):
                self.assertLessEqual(sobolev_norm(field, 2), analytic_norm(field, w, 2) * (1 + 1e-14))

    def test_large_weight_does_not_overflow(self):
        """A weight e^{2 w <xi>} beyond the float range is balanced by a tiny coefficient."""
        coeffs = np.zeros(32, dtype=complex)
        coeffs[10] = 1e-150
        field = SpectralField(self.grid, coeffs)
        value = weighted_square(field, 40.0, 2.0)
        bracket = math.sqrt(101.0)
        expected_log = math.log(2 * math.pi) + 4 * math.log(bracket) + 80 * bracket - 300 * math.log(10)
        self.assertTrue(math.isfinite(value))
        self.assertAlmostEqual(math.log(value), expected_log, places=8)

    def test_negative_weight_rejected(self):
        with self.assertRaises(ScheduleError):
            analytic_norm(SpectralField.zeros(self.grid), -0.1, 1.0)

    def test_negative_regularity_rejected(self):
        with self.assertRaises(FieldError):
            analytic_norm(SpectralField.zeros(self.grid), 0.1, -1.0)

    def test_zero_field_norm(self):
        self.assertEqual(analytic_norm(SpectralField.zeros(self.grid), 1.0, 2.0), 0.0)

    def test_embedding_ratio_decreases_with_weight(self):
        """||psi||_inf / ||psi||_{H^l_w} is largest at w = 0."""
        field = random_band_limited(self.grid, self.rng)
        self.assertLessEqual(linf_embedding_ratio(field, 1.0, 1.0), linf_embedding_ratio(field, 0.0, 1.0))


class SpectralDiagnosticsTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(64, 2 * math.pi)

    def test_analyticity_width_of_exponential_decay(self):
        """Coefficients exp(-0.7 <xi>) decay at rate 0.7."""
        coeffs = np.where(self.grid.dealias_mask, np.exp(-0.7 * self.grid.bracket), 0.0)
        field = SpectralField(self.grid, coeffs, real=True)
        self.assertAlmostEqual(analyticity_width(field), 0.7, places=8)

    def test_analyticity_width_of_trigonometric_polynomial(self):
        """Fewer than three significant modes give an infinite width."""
        field = SpectralField.from_function(self.grid, np.cos, real=True)
        self.assertEqual(analyticity_width(field), math.inf)

    def test_tail_mass(self):
        """Mass outside the band is reported as a fraction of the total."""
        coeffs = np.zeros(64, dtype=complex)
        coeffs[1] = 1.0
        coeffs[30] = 0.5
        field = SpectralField(self.grid, coeffs)
        self.assertAlmostEqual(tail_mass(field), 0.25 / 1.25)

    def test_denoise_keeps_symmetry(self):
        """Small coefficients are zeroed on both sides of a real field."""
        coeffs = np.zeros(64, dtype=complex)
        coeffs[[1, -1]] = 1.0
        coeffs[[5, -5]] = 1e-16
        cleaned = denoise(coeffs, 1e-14)
        self.assertEqual(cleaned[5], 0.0)
        self.assertEqual(cleaned[-5], 0.0)
        self.assertEqual(cleaned[1], 1.0)
        SpectralField(self.grid, cleaned, real=True)

    def test_denoise_clears_fields_that_are_zero_up_to_roundoff(self):
        """The floor never drops below floor * 1, whatever the field's own peak."""
        coeffs = np.zeros(64, dtype=complex)
        coeffs[[3, -3]] = 7e-19
        coeffs[[40, -40]] = 1e-22
        self.assertFalse(np.any(denoise(coeffs, 1e-14)))

    def test_denoise_keeps_small_but_resolved_fields(self):
        coeffs = np.zeros(64, dtype=complex)
        coeffs[[2, -2]] = 1e-6
        np.testing.assert_array_equal(denoise(coeffs, 1e-14), coeffs)

    def test_random_fields_are_band_limited(self):
        field = random_band_limited(self.grid, np.random.default_rng(1), real=True)
        self.assertTrue(np.all(field.coeffs[np.abs(self.grid.indices) > 15] == 0))
        self.assertTrue(field.real)


class ProductTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(64, 2 * math.pi)

    def single_mode(self, index, value=1.0):
        coeffs = np.zeros(64, dtype=complex)
        coeffs[index] = value
        return SpectralField(self.grid, coeffs)

    def test_matches_pointwise_product(self):
        rng = np.random.default_rng(21)
        p = random_band_limited(self.grid, rng, real=False)
        q = random_band_limited(self.grid, rng, real=False)
        expected = transform_forward(self.grid, p.values * q.values, real=False)
        np.testing.assert_allclose(product(p, q).coeffs, expected.coeffs, atol=1e-14)

    def test_real_factors_give_real_product(self):
        rng = np.random.default_rng(22)
        p, q = random_band_limited(self.grid, rng), random_band_limited(self.grid, rng)
        self.assertTrue(product(p, q).real)

    def test_no_roundoff_outside_the_support(self):
        """Two single modes multiply into exactly one mode, so high weights see nothing else."""
        result = product(self.single_mode(3, 0.5), self.single_mode(-7, 2.0j))
        self.assertEqual(np.count_nonzero(result.coeffs), 1)
        self.assertEqual(result.coeffs[-4], 1.0j)
        expected = 2 * math.pi * 17**2 * math.exp(60 * math.sqrt(17))
        self.assertTrue(math.isclose(analytic_norm(result, 30.0, 2.0) ** 2, expected, rel_tol=1e-12))

    def test_modes_beyond_the_grid_are_dropped(self):
        result = product(self.single_mode(20), self.single_mode(20))
        self.assertFalse(np.any(result.coeffs))

    def test_grid_mismatch(self):
        other = SpectralField.zeros(make_grid(32, 2 * math.pi))
        with self.assertRaises(FieldError):
            product(self.single_mode(1), other)


class WeightScheduleTests(SimpleTestCase):
    def test_weight_must_stay_positive(self):
        """T must be strictly below w0 / M."""
        with self.assertRaises(ScheduleError):
            WeightSchedule(w0=1.0, M=2.0, T=0.5)

    def test_constant_weight_allowed(self):
        schedule = WeightSchedule(w0=1.0, M=0.0, T=3.0)
        self.assertEqual(weight_at(schedule, 2.0), 1.0)

    def test_linear_decrease(self):
        schedule = WeightSchedule(w0=1.0, M=2.0, T=0.4)
        self.assertAlmostEqual(schedule.weight(0.25), 0.5)

    def test_time_outside_interval(self):
        schedule = WeightSchedule(w0=1.0, M=2.0, T=0.4)
        with self.assertRaises(ScheduleError):
            weight_at(schedule, 0.5)


class TripleNormTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(32, 2 * math.pi)

    def test_constant_weight_gives_sup_norm(self):
        """With M = 0 only the supremum term is active."""
        rng = np.random.default_rng(3)
        fields = [random_band_limited(self.grid, rng) for _ in range(5)]
        schedule = WeightSchedule(w0=0.5, M=0.0, T=1.0)
        expected = max(analytic_norm(f, 0.5, 2.0) for f in fields)
        self.assertAlmostEqual(triple_norm(np.linspace(0, 1, 5), fields, schedule, 2.0), expected, places=12)

    def test_static_mean_mode(self):
        """For a constant field the supremum sqrt(L) e^{w0} dominates the integral term."""
        one = transform_forward(self.grid, np.ones(32), real=True)
        schedule = WeightSchedule(w0=1.0, M=1.0, T=0.5)
        times = np.linspace(0, 0.5, 101)
        value = triple_norm(times, [one] * len(times), schedule, 2.0)
        self.assertAlmostEqual(value, math.sqrt(2 * math.pi) * math.e, places=10)

    def test_integral_branch_of_single_mode(self):
        """Trapezoid accumulation of 2M int ||psi||^2_{l+1/2,w(s)} ds against its closed form."""
        coeffs = np.zeros(32, dtype=complex)
        coeffs[1] = 0.5
        field = SpectralField(self.grid, coeffs)
        schedule = WeightSchedule(w0=0.5, M=0.5, T=0.4)
        acc = TripleNormAccumulator.for_schedule(schedule, 2.0)
        for t in np.linspace(0.0, 0.4, 401):
            acc.observe(float(t), field, schedule)
        b = math.sqrt(2.0)
        density = 2 * math.pi * 0.25 * b**5
        expected = density * math.exp(2 * 0.5 * b) * (1 - math.exp(-2 * 0.5 * 0.4 * b)) / (2 * 0.5 * b)
        self.assertTrue(math.isclose(acc.integral_term, expected, rel_tol=1e-6))
        self.assertEqual(acc.samples, 401)

    def test_time_regression_rejected(self):
        one = transform_forward(self.grid, np.ones(32), real=True)
        schedule = WeightSchedule(w0=1.0, M=1.0, T=0.5)
        with self.assertRaises(ScheduleError):
            triple_norm([0.2, 0.1], [one, one], schedule, 1.0)


class NormEvolutionTests(SimpleTestCase):
    def setUp(self):
        self.grid = make_grid(32, 2 * math.pi)
        self.field = random_band_limited(self.grid, np.random.default_rng(11), max_index=7)

    def test_decaying_field_at_constant_weight(self):
        """psi(t) = e^{-t} psi0 satisfies the identity with w' = 0."""
        schedule = WeightSchedule(w0=0.5, M=0.0, T=1.0)
        times = np.linspace(0, 1, 101)
        fields = [self.field * math.exp(-t) for t in times]
        residual = norm_evolution_residual(times, fields, [-f for f in fields], schedule, 2.0)
        self.assertLess(residual, 1e-3)

    def test_static_field_under_shrinking_weight(self):
        """A constant-in-time field loses norm only through w'(t) = -M."""
        schedule = WeightSchedule(w0=1.0, M=1.0, T=0.5)
        times = np.linspace(0, 0.5, 501)
        zero = SpectralField.zeros(self.grid, real=True)
        residual = norm_evolution_residual(
            times, [self.field] * len(times), [zero] * len(times), schedule, 2.0
        )
        self.assertLess(residual, 1e-3)

    def test_needs_three_samples(self):
        schedule = WeightSchedule(w0=1.0, M=0.0, T=1.0)
        with self.assertRaises(FieldError):
            norm_evolution_residual([0.0, 1.0], [self.field] * 2, [self.field] * 2, schedule, 1.0)
