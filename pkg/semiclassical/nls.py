"""
Direct solver for the semiclassical derivative NLS

    i eps u_t = -(eps^2 / 2) u_xx - (i eps / 2) (g(|u|^2) u)_x + f(|u|^2) u

written as u_t = (i eps / 2) u_xx - 1/2 (g u)_x - (i / eps) f u. The free
propagator is applied exactly in Fourier space and RK4 advances the rest.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .exceptions import FieldError, ResolutionError, ScheduleError
from .grenier import march, time_grid
from .spectral import SpectralField, tail_mass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveField:
    u: SpectralField
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ScheduleError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.u.real:
            object.__setattr__(self, "u", self.u.with_coeffs(self.u.coeffs, real=False))

    @property
    def grid(self):
        return self.u.grid

    @property
    def values(self):
        return self.u.values

    @classmethod
    def from_values(cls, grid, values, epsilon):
        return cls(SpectralField(grid, grid.to_spectral(np.asarray(values, dtype=complex))), epsilon)

    def arrays(self):
        return (self.u.coeffs,)

    def project(self, arrays):
        return arrays

    def with_arrays(self, arrays):
        return type(self)(SpectralField(self.grid, arrays[0]), self.epsilon)

    def rotate(self, theta):
        """Constant gauge rotation u -> exp(i theta) u."""
        return type(self)(self.u * np.exp(1j * theta), self.epsilon)


def assemble_initial(state0, eps):
    """WKB initial datum a0 exp(i phi0 / eps) on the collocation grid."""
    if not state0.phi.real:
        raise FieldError("initial phase must be real")
    if not eps > 0:
        raise ScheduleError(f"epsilon must be positive, got {eps}")
    phase = state0.phi.values
    return WaveField.from_values(state0.grid, state0.a.values * np.exp(1j * phase / eps), eps)


def resolution_guard(field, t=None, threshold=None):
    """Raise ``ResolutionError`` when the spectral tail mass exceeds ``threshold``."""
    if threshold is None:
        threshold = settings.WKB_TAIL_MASS_THRESHOLD
    fraction = tail_mass(field.u)
    if fraction > threshold:
        raise ResolutionError(
            f"tail mass {fraction:.3g} above {threshold:.3g}; increase n_modes", time=t
        )
    return fraction


def plane_wave(grid, amplitude, k, eps):
    """A exp(i k x / eps); k L / eps must be a multiple of 2 pi."""
    index = k * grid.length / (2 * math.pi * eps)
    if abs(index - round(index)) > 1e-9:
        raise FieldError(f"k L / eps = {2 * math.pi * index:g} is not a multiple of 2 pi")
    position = int(round(index)) % grid.n_modes
    if not grid.dealias_mask[position]:
        raise FieldError(f"plane wave mode {round(index)} lies outside the 2/3 band on n={grid.n_modes}")
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    coeffs[position] = amplitude
    return WaveField(SpectralField(grid, coeffs), eps)


def plane_wave_frequency(spec, amplitude, k):
    """omega = k^2 / 2 + (k / 2) g(A^2) + f(A^2)."""
    rho = abs(amplitude) ** 2
    return 0.5 * k**2 + 0.5 * k * float(spec.g(rho)) + float(spec.f(rho))


def plane_wave_exact(grid, spec, amplitude, k, eps, t):
    omega = plane_wave_frequency(spec, amplitude, k)
    initial = plane_wave(grid, amplitude, k, eps)
    return initial.rotate(-omega * t / eps)


def nls_terms(grid, spec, eps, u_hat):
    u = grid.to_physical(u_hat)
    rho = np.abs(u) ** 2
    flux = grid.to_spectral(spec.g(rho) * u)
    potential = grid.to_spectral(spec.f(rho) * u)
    return (grid.dealias(-0.5 * grid.first_derivative * flux - (1j / eps) * potential),)


def substep_count(dt, eps, factor=None):
    """Internal steps per output step so that the step stays below factor * eps."""
    if factor is None:
        factor = settings.WKB_DT_EPSILON_FACTOR
    return max(1, math.ceil(dt / (factor * eps) - 1e-9))


def integrate_nls(u0, spec, T, dt):
    """Trajectory of ``u0`` on [0, T], stored every ``dt``."""
    eps = u0.epsilon
    grid = u0.grid
    times = time_grid(T, dt)
    substeps = substep_count(times[1] - times[0], eps)
    resolution_guard(u0, t=0.0)
    logger.info(
        "NLS solve: eps=%g n=%d steps=%d substeps=%d T=%g",
        eps, grid.n_modes, len(times) - 1, substeps, T,
    )

    def nonlinear(t, y):
        return nls_terms(grid, spec, eps, y[0])

    def inspect(t, state):
        resolution_guard(state, t=t)

    return march(
        u0,
        times,
        None,
        eps,
        (0.5j * eps * grid.second_derivative,),
        nonlinear,
        f"NLS eps={eps:g}",
        substeps=substeps,
        inspect=inspect,
    )


def mass(field):
    """Integral of |u|^2 over the period."""
    return field.grid.length * float(np.sum(np.abs(field.u.coeffs) ** 2))


def mass_drift(trajectory):
    """Largest relative deviation of the mass from its initial value."""
    masses = np.array([mass(state) for state in trajectory.states])
    if masses[0] == 0.0:
        return float(np.max(np.abs(masses)))
    return float(np.max(np.abs(masses - masses[0])) / masses[0])
