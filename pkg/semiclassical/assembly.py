"""
WKB approximants, quadratic observables and the error metrics of a sweep.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import AlignmentError, FieldError
from .nls import WaveField
from .spectral import SpectralField, transform_forward, triple_norm

logger = logging.getLogger(__name__)

DENSITY_FLOOR = -1e-10


@dataclass(frozen=True)
class Observables:
    """Position density rho, momentum density J and velocity v."""

    rho: SpectralField
    J: SpectralField
    v: SpectralField

    def __post_init__(self):
        if not (self.rho.real and self.J.real and self.v.real):
            raise FieldError("observables must be real fields")
        lowest = float(np.min(self.rho.values))
        if lowest < DENSITY_FLOOR:
            raise FieldError(f"negative density {lowest:.3g}")


def _require_real(*fields):
    for field in fields:
        if not field.real:
            raise FieldError("phases must be real fields")


def approximant_leading(phi, a, eps):
    """a exp(i phi / eps)."""
    _require_real(phi)
    return WaveField.from_values(a.grid, a.values * np.exp(1j * phi.values / eps), eps)


def approximant_corrected(phi, a, phi1, eps):
    """a exp(i phi1) exp(i phi / eps); the amplitude corrector does not enter."""
    _require_real(phi, phi1)
    phase = phi1.values + phi.values / eps
    return WaveField.from_values(a.grid, a.values * np.exp(1j * phase), eps)


def _real_field(grid, values):
    return transform_forward(grid, np.asarray(values, dtype=float), real=True)


def _derivative_values(field):
    grid = field.grid
    return grid.to_physical(grid.first_derivative * field.coeffs)


def observables(wave):
    """rho = |u|^2, J = Im(eps conj(u) u_x), v = J / rho where rho > 0."""
    grid = wave.grid
    u = wave.values
    rho = np.abs(u) ** 2
    J = (wave.epsilon * np.conj(u) * _derivative_values(wave.u)).imag
    v = np.divide(J, rho, out=np.zeros_like(J), where=rho > 0)
    return Observables(_real_field(grid, rho), _real_field(grid, J), _real_field(grid, v))


def observables_limit(phi, a):
    """rho = |a|^2, J = |a|^2 phi_x, v = phi_x."""
    _require_real(phi)
    grid = a.grid
    rho = np.abs(a.values) ** 2
    v = _derivative_values(phi).real
    return Observables(_real_field(grid, rho), _real_field(grid, rho * v), _real_field(grid, v))


def _time_derivative(samples, dt):
    """Centered differences at interior samples: fourth order with five or more samples."""
    count = len(samples)
    if count >= 5:
        return {
            k: (-samples[k + 2] + 8 * samples[k + 1] - 8 * samples[k - 1] + samples[k - 2]) / (12 * dt)
            for k in range(2, count - 2)
        }
    return {k: (samples[k + 1] - samples[k - 1]) / (2 * dt) for k in range(1, count - 1)}


def _l2(grid, values):
    return math.sqrt(grid.cell * float(np.sum(np.abs(values) ** 2)))


def _physical_derivative(grid, values):
    return grid.to_physical(grid.first_derivative * grid.to_spectral(values)).real


def euler_residual(trajectory, spec):
    """Residuals of the generalized Euler system along a limit trajectory.

    With rho = |a|^2 and v = phi_x returns the largest L2 norms over interior
    samples of

        v_t + v v_x + 1/2 (g(rho) v)_x + f(rho)_x
        rho_t + (rho v)_x + Q(rho)_x
    """
    if len(trajectory) < 3:
        raise FieldError("the Euler residual needs at least three samples")
    grid = trajectory.grid
    dt = trajectory.dt
    velocities = [_derivative_values(state.phi).real for state in trajectory.states]
    densities = [np.abs(state.a.values) ** 2 for state in trajectory.states]
    v_t = _time_derivative(velocities, dt)
    rho_t = _time_derivative(densities, dt)

    def d(values):
        return _physical_derivative(grid, values)

    momentum, continuity = 0.0, 0.0
    for k in v_t:
        v, rho = velocities[k], densities[k]
        r_v = v_t[k] + v * d(v) + 0.5 * d(spec.g(rho) * v) + d(spec.f(rho))
        r_rho = rho_t[k] + d(rho * v) + d(spec.Q(rho))
        momentum = max(momentum, _l2(grid, r_v))
        continuity = max(continuity, _l2(grid, r_rho))
    return momentum, continuity


def _check_aligned(truth, approx):
    if len(truth) != len(approx) or not np.allclose(truth.times, approx.times, rtol=0, atol=1e-12):
        raise AlignmentError("trajectories are sampled at different times")
    if truth.grid != approx.grid:
        raise AlignmentError("trajectories live on different grids")


def error_metrics(truth, approx):
    """sup_t of the spatial L2 and Linf distances between two wave trajectories."""
    _check_aligned(truth, approx)
    grid = truth.grid
    l2, linf = 0.0, 0.0
    for u, w in zip(truth.states, approx.states):
        difference = u.values - w.values
        l2 = max(l2, _l2(grid, difference))
        linf = max(linf, float(np.max(np.abs(difference))))
    return l2, linf


def observable_errors(truth, limit):
    """sup_t L1 and Linf errors of rho and J between a wave trajectory and the limit."""
    _check_aligned(truth, limit)
    grid = truth.grid
    errors = {"rho_L1": 0.0, "rho_Linf": 0.0, "J_L1": 0.0, "J_Linf": 0.0}
    for wave, state in zip(truth.states, limit.states):
        exact = observables(wave)
        approx = observables_limit(state.phi, state.a)
        for name, lhs, rhs in (("rho", exact.rho, approx.rho), ("J", exact.J, approx.J)):
            difference = np.abs(lhs.values - rhs.values)
            errors[f"{name}_L1"] = max(errors[f"{name}_L1"], grid.cell * float(np.sum(difference)))
            errors[f"{name}_Linf"] = max(errors[f"{name}_Linf"], float(np.max(difference)))
    return errors


def triple_error(truth, approx, schedule, ell):
    """(|||phi_truth - phi_approx|||_{l+1,T}, |||a_truth - a_approx|||_{l,T})."""
    _check_aligned(truth, approx)
    pairs = list(zip(truth.states, approx.states))
    phi_error = triple_norm(truth.times, [t.phi - a.phi for t, a in pairs], schedule, ell + 1)
    a_error = triple_norm(truth.times, [t.a - a.a for t, a in pairs], schedule, ell)
    return phi_error, a_error


@dataclass(frozen=True)
class DensityBound:
    density_error: float
    bound: float
    holds: bool


def density_bound(truth, limit):
    """|| |a_eps|^2 - |a|^2 ||_L1 <= ||a_eps + a||_L2 ||a_eps - a||_L2 at every sample."""
    _check_aligned(truth, limit)
    grid = truth.grid
    worst_error, worst_bound, holds = 0.0, 0.0, True
    for exact, approx in zip(truth.states, limit.states):
        a_eps, a = exact.a.values, approx.a.values
        lhs = grid.cell * float(np.sum(np.abs(np.abs(a_eps) ** 2 - np.abs(a) ** 2)))
        rhs = _l2(grid, a_eps + a) * _l2(grid, a_eps - a)
        holds = holds and lhs <= rhs * (1 + 1e-12) + 1e-15
        worst_error = max(worst_error, lhs)
        worst_bound = max(worst_bound, rhs)
    return DensityBound(worst_error, worst_bound, holds)
