import numpy as np
from django.test import SimpleTestCase

from ..exceptions import NonlinearityError
from ..nonlinearity import (
    NonlinearitySpec,
    eval_f,
    eval_g,
    eval_h,
    eval_Q,
    taylor_remainder_f,
    taylor_remainder_g,
    taylor_remainder_integral,
)


class NonlinearitySpecTests(SimpleTestCase):
    def test_monomials(self):
        spec = NonlinearitySpec(alpha=2.0, gamma=2, lam=-1.5, sigma=3)
        self.assertAlmostEqual(eval_g(spec, 3.0), 18.0)
        self.assertAlmostEqual(eval_f(spec, 2.0), -12.0)
        self.assertAlmostEqual(spec.g_prime(3.0), 12.0)
        self.assertAlmostEqual(spec.g_second(3.0), 4.0)
        self.assertAlmostEqual(spec.f_prime(2.0), -18.0)

    def test_h_is_g_over_s(self):
        """h(s) = g(s) / s, finite at s = 0."""
        spec = NonlinearitySpec(alpha=1.5, gamma=3)
        s = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(eval_h(spec, s), 1.5 * s**2)
        np.testing.assert_allclose(eval_h(spec, s[1:]) * s[1:], eval_g(spec, s[1:]))

    def test_pressure_for_cubic_derivative_term(self):
        """gamma = 1: Q(rho) = rho g(rho) - 1/2 int_0^rho g = 3/4 alpha rho^2."""
        spec = NonlinearitySpec(alpha=2.0)
        np.testing.assert_allclose(eval_Q(spec, np.array([0.0, 1.0, 3.0])), [0.0, 1.5, 13.5])

    def test_vanishing_derivative_nonlinearity(self):
        """alpha = 0 switches the derivative term and Q off."""
        spec = NonlinearitySpec(alpha=0.0)
        self.assertEqual(eval_g(spec, 4.0), 0.0)
        self.assertEqual(eval_Q(spec, 4.0), 0.0)

    def test_negative_argument_rejected(self):
        with self.assertRaises(NonlinearityError):
            eval_g(NonlinearitySpec(), np.array([1.0, -0.1]))

    def test_exponents_must_be_positive_integers(self):
        for kwargs in ({"gamma": 0}, {"sigma": 1.5}, {"gamma": True}):
            with self.subTest(**kwargs), self.assertRaises(NonlinearityError):
                NonlinearitySpec(**kwargs)

    def test_non_finite_coefficient_rejected(self):
        with self.assertRaises(NonlinearityError):
            NonlinearitySpec(lam=float("inf"))


class TaylorRemainderTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_linear_g_remainder_is_delta_squared(self):
        """g(s) = s leaves exactly |delta|^2."""
        spec = NonlinearitySpec(alpha=1.0, gamma=1)
        a, delta = 0.7 - 0.2j, 0.3 + 0.4j
        self.assertAlmostEqual(taylor_remainder_g(spec, a, delta), 0.25, places=14)

    def test_integral_form_agrees(self):
        """The integral form matches the direct remainder for g and f."""
        spec = NonlinearitySpec(alpha=1.3, gamma=3, lam=0.8, sigma=2)
        for _ in range(10):
            a = complex(*self.rng.normal(size=2))
            delta = complex(*self.rng.normal(scale=0.5, size=2))
            direct_g = taylor_remainder_g(spec, a, delta)
            direct_f = taylor_remainder_f(spec, a, delta)
            self.assertAlmostEqual(taylor_remainder_integral(spec, a, delta), direct_g, delta=1e-10 * max(1, abs(direct_g)))
            self.assertAlmostEqual(
                taylor_remainder_integral(spec, a, delta, which="f"), direct_f, delta=1e-10 * max(1, abs(direct_f))
            )

    def test_quadratic_scaling(self):
        """Halving delta divides the remainder by about four."""
        spec = NonlinearitySpec(alpha=1.0, gamma=2)
        a, delta = 0.9 + 0.1j, 0.2 - 0.3j
        ratio = taylor_remainder_g(spec, a, 1e-3 * delta) / taylor_remainder_g(spec, a, 5e-4 * delta)
        self.assertAlmostEqual(ratio, 4.0, delta=1e-2)

    def test_quadratic_scaling_for_every_power(self):
        a, delta = 0.9 + 0.1j, 0.2 - 0.3j
        for gamma in (1, 2, 3):
            for sigma in (1, 2, 3):
                spec = NonlinearitySpec(alpha=1.0, gamma=gamma, lam=1.0, sigma=sigma)
                for remainder in (taylor_remainder_g, taylor_remainder_f):
                    with self.subTest(gamma=gamma, sigma=sigma, remainder=remainder.__name__):
                        ratio = remainder(spec, a, 1e-3 * delta) / remainder(spec, a, 5e-4 * delta)
                        self.assertAlmostEqual(ratio, 4.0, delta=2e-2)

    def test_unknown_function_rejected(self):
        with self.assertRaises(NonlinearityError):
            taylor_remainder_integral(NonlinearitySpec(), 1.0, 0.1, which="h")
