"""
Monomial nonlinearities g(s) = alpha s^gamma, f(s) = lambda s^sigma.

Every scalar function the phase/amplitude systems need is an exact polynomial
built once with ``numpy.polynomial.Polynomial`` and evaluated in Horner form.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from .exceptions import NonlinearityError


def _monomial(coefficient, degree):
    coef = np.zeros(degree + 1)
    coef[degree] = coefficient
    return Polynomial(coef)


def _check_argument(s):
    if np.any(np.asarray(s) < 0):
        raise NonlinearityError("nonlinearities are defined for s >= 0 only")


@dataclass(frozen=True)
class NonlinearitySpec:
    alpha: float = 1.0
    gamma: int = 1
    lam: float = 1.0
    sigma: int = 1

    def __post_init__(self):
        for name in ("gamma", "sigma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise NonlinearityError(f"{name} must be a positive integer, got {value!r}")
        for name in ("alpha", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise NonlinearityError(f"{name} must be finite")

    @cached_property
    def g_poly(self):
        return _monomial(self.alpha, self.gamma)

    @cached_property
    def f_poly(self):
        return _monomial(self.lam, self.sigma)

    @cached_property
    def g_prime_poly(self):
        return self.g_poly.deriv()

    @cached_property
    def g_second_poly(self):
        return self.g_poly.deriv(2)

    @cached_property
    def f_prime_poly(self):
        return self.f_poly.deriv()

    @cached_property
    def f_second_poly(self):
        return self.f_poly.deriv(2)

    @cached_property
    def h_poly(self):
        # g(s)/s with the removable singularity at 0 resolved
        return _monomial(self.alpha, self.gamma - 1)

    @cached_property
    def Q_poly(self):
        # rho g(rho) - 1/2 int_0^rho g
        rho = Polynomial([0.0, 1.0])
        return rho * self.g_poly - 0.5 * self.g_poly.integ()

    def g(self, s):
        _check_argument(s)
        return self.g_poly(s)

    def f(self, s):
        _check_argument(s)
        return self.f_poly(s)

    def g_prime(self, s):
        _check_argument(s)
        return self.g_prime_poly(s)

    def g_second(self, s):
        _check_argument(s)
        return self.g_second_poly(s)

    def f_prime(self, s):
        _check_argument(s)
        return self.f_prime_poly(s)

    def h(self, s):
        _check_argument(s)
        return self.h_poly(s)

    def Q(self, rho):
        _check_argument(rho)
        return self.Q_poly(rho)


def eval_g(spec, s):
    return spec.g(s)


def eval_f(spec, s):
    return spec.f(s)


def eval_g_prime(spec, s):
    return spec.g_prime(s)


def eval_g_second(spec, s):
    return spec.g_second(s)


def eval_f_prime(spec, s):
    return spec.f_prime(s)


def eval_h(spec, s):
    return spec.h(s)


def eval_Q(spec, rho):
    return spec.Q(rho)


def _functions(spec, which):
    if which == "g":
        return spec.g, spec.g_prime, spec.g_second_poly
    if which == "f":
        return spec.f, spec.f_prime, spec.f_second_poly
    raise NonlinearityError(f"unknown nonlinearity {which!r}; use 'g' or 'f'")


def _taylor_remainder(spec, a, delta, which):
    value, slope, _ = _functions(spec, which)
    base = abs(a) ** 2
    return float(
        value(abs(a + delta) ** 2) - value(base) - 2 * slope(base) * (np.conj(a) * delta).real
    )


def taylor_remainder_g(spec, a, delta):
    """g(|a+d|^2) - g(|a|^2) - 2 g'(|a|^2) Re(conj(a) d)."""
    return _taylor_remainder(spec, a, delta, "g")


def taylor_remainder_f(spec, a, delta):
    return _taylor_remainder(spec, a, delta, "f")


def taylor_remainder_integral(spec, a, delta, which="g"):
    """Integral form int_0^1 (1-s) F''(s) ds of the same remainder, F(s) = g(|a+s d|^2)."""
    _, slope, curvature = _functions(spec, which)

    def second_derivative(s):
        point = a + s * delta
        projection = (np.conj(point) * delta).real
        modulus = abs(point) ** 2
        return 4 * curvature(modulus) * projection**2 + 2 * slope(modulus) * abs(delta) ** 2

    value, _ = integrate.quad(lambda s: (1 - s) * second_derivative(s), 0.0, 1.0)
    return value
