"""
First corrector: the phase/amplitude system linearized about the limit solution.

The system carries no eps, so one corrector solve serves a whole sweep.
"""

import logging

import numpy as np

from .exceptions import AlignmentError, NonFiniteError
from .grenier import WKBState, march, time_grid

logger = logging.getLogger(__name__)


class CorrectorState(WKBState):
    """Corrector pair (phi1, a1); phi1 is real."""

    @property
    def phi1(self):
        return self.phi

    @property
    def a1(self):
        return self.a


def linearized_terms(grid, spec, background, phi1_hat, a1_hat):
    d1 = grid.first_derivative
    d2 = grid.second_derivative
    phi_hat, a_hat = background
    phi_x = grid.to_physical(d1 * phi_hat).real
    phi_xx = grid.to_physical(d2 * phi_hat).real
    a = grid.to_physical(a_hat)
    a_x = grid.to_physical(d1 * a_hat)
    rho = np.abs(a) ** 2
    g = spec.g(rho)
    g_prime = spec.g_prime(rho)

    p1_x = grid.to_physical(d1 * phi1_hat).real
    p1_xx = grid.to_physical(d2 * phi1_hat).real
    a1 = grid.to_physical(a1_hat)
    a1_x = grid.to_physical(d1 * a1_hat)
    coupling = (np.conj(a) * a1).real

    dphi1 = -(phi_x + 0.5 * g) * p1_x - (g_prime * phi_x + 2 * spec.f_prime(rho)) * coupling
    da1 = -phi_x * a1_x - 0.5 * a1 * phi_xx - a_x * p1_x - 0.5 * a * p1_xx
    flux = g * a1 + 2 * a * g_prime * coupling
    da1_hat = grid.to_spectral(da1) - 0.5 * d1 * grid.to_spectral(flux) + 0.5j * d2 * a_hat
    return (
        grid.hermitian(grid.dealias(grid.to_spectral(dphi1))),
        grid.dealias(da1_hat),
    )


def rhs_linearized(corr, background, spec):
    """Time derivative of the corrector, including the (i/2) a_xx source."""
    if corr.grid != background.grid:
        raise AlignmentError("corrector and background live on different grids")
    grid = corr.grid
    dphi1, da1 = linearized_terms(grid, spec, background.arrays(), *corr.arrays())
    if not (np.all(np.isfinite(dphi1)) and np.all(np.isfinite(da1))):
        raise NonFiniteError("corrector right-hand side is not finite")
    return CorrectorState.from_arrays(grid, dphi1, da1)


def integrate_corrector(corr0, background, spec, dt):
    """Integrate the corrector along ``background`` with classical RK4.

    Stage values of the background between its samples come from cubic
    interpolation in time.
    """
    if not isinstance(corr0, CorrectorState):
        corr0 = CorrectorState(corr0.phi, corr0.a)
    if corr0.grid != background.grid:
        raise AlignmentError("corrector and background live on different grids")
    grid = corr0.grid
    T = float(background.times[-1])
    times = time_grid(T, dt)
    sampler = background.sampler()
    logger.info("corrector solve: n=%d steps=%d T=%g", grid.n_modes, len(times) - 1, T)

    def nonlinear(t, y):
        return linearized_terms(grid, spec, sampler(t), *y)

    return march(corr0, times, background.schedule, None, (None, None), nonlinear, "corrector")
