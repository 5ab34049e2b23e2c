"""
Phase/amplitude (Grenier) system, its eps = 0 limit and the iterative scheme.

    phi_t = -1/2 phi_x^2 - 1/2 g(|a|^2) phi_x - f(|a|^2)
    a_t   = -phi_x a_x - 1/2 a phi_xx - 1/2 (g(|a|^2) a)_x + (i eps / 2) a_xx

Derivatives are spectral, products are formed on the collocation grid and
every nonlinear term is truncated with the 2/3 rule. The dispersive term is
removed exactly by an integrating factor so the step is eps-independent.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .exceptions import FieldError, InstabilityError, NonFiniteError, ScheduleError
from .spectral import (
    SpectralField,
    WeightSchedule,
    analytic_norm,
    denoise,
    triple_norm,
    uniform_step,
)
from .timestepping import IntegratingFactorRK4, TrajectorySampler

logger = logging.getLogger(__name__)


def coefficient_norm(grid, arrays):
    """Combined L2 norm of a tuple of coefficient arrays."""
    return math.sqrt(grid.length * sum(float(np.sum(np.abs(c) ** 2)) for c in arrays))


@dataclass(frozen=True)
class WKBState:
    """Real phase ``phi`` and complex amplitude ``a`` on one grid."""

    phi: SpectralField
    a: SpectralField

    def __post_init__(self):
        if not self.phi.real:
            raise FieldError("phase must be a real field")
        if self.phi.grid != self.a.grid:
            raise FieldError("phase and amplitude live on different grids")

    @property
    def grid(self):
        return self.phi.grid

    @classmethod
    def from_arrays(cls, grid, phi_hat, a_hat):
        return cls(SpectralField(grid, phi_hat, real=True), SpectralField(grid, a_hat))

    @classmethod
    def zeros(cls, grid):
        return cls(SpectralField.zeros(grid, real=True), SpectralField.zeros(grid))

    def arrays(self):
        return (self.phi.coeffs, self.a.coeffs)

    def project(self, arrays):
        phi_hat, a_hat = arrays
        floor = settings.WKB_SPECTRAL_FLOOR
        return (denoise(self.grid.hermitian(phi_hat), floor), denoise(a_hat, floor))

    def with_arrays(self, arrays):
        return type(self).from_arrays(self.grid, *arrays)

    def l2_norm(self):
        return coefficient_norm(self.grid, self.arrays())

    def __add__(self, other):
        return type(self)(self.phi + other.phi, self.a + other.a)

    def __sub__(self, other):
        return type(self)(self.phi - other.phi, self.a - other.a)

    def __mul__(self, scalar):
        """Scale by a real number; a complex factor would make the phase complex."""
        if np.iscomplexobj(scalar):
            raise FieldError(f"states scale by real numbers only, got {scalar!r}")
        return type(self)(self.phi * float(scalar), self.a * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class Trajectory:
    """Uniform time samples on [0, T] with one state per sample."""

    times: np.ndarray
    states: tuple
    schedule: WeightSchedule = None
    epsilon: float = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if len(times) != len(self.states):
            raise FieldError("one state per sample time is required")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise FieldError("trajectory times must be strictly increasing")
        grids = {state.grid for state in self.states}
        if len(grids) > 1:
            raise FieldError("trajectory mixes grids")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    @property
    def dt(self):
        return uniform_step(self.times)

    @property
    def grid(self):
        return self.states[0].grid

    @property
    def initial(self):
        return self.states[0]

    @property
    def final(self):
        return self.states[-1]

    def map(self, transform, epsilon=None):
        return Trajectory(
            self.times,
            tuple(transform(state) for state in self.states),
            self.schedule,
            self.epsilon if epsilon is None else epsilon,
        )

    def sampler(self):
        return TrajectorySampler(self.times, [state.arrays() for state in self.states])


@dataclass
class SchemeDiagnostics:
    phi_differences: list = field(default_factory=list)
    a_differences: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    converged: bool = False
    diverged: bool = False

    @property
    def iterations(self):
        return len(self.phi_differences)

    @property
    def differences(self):
        return [p + a for p, a in zip(self.phi_differences, self.a_differences)]

    def record(self, phi_difference, a_difference):
        previous = self.differences[-1] if self.phi_differences else None
        self.phi_differences.append(phi_difference)
        self.a_differences.append(a_difference)
        if previous:
            self.ratios.append((phi_difference + a_difference) / previous)

    def expanding(self, patience):
        recent = self.ratios[-patience:]
        return len(recent) == patience and all(r > 1 for r in recent)


def check_epsilon(eps):
    if not 0.0 <= eps <= 1.0:
        raise ScheduleError(f"epsilon must lie in [0, 1], got {eps}")


def time_grid(T, dt):
    """Uniform samples on [0, T]; the step is shrunk so it divides T."""
    if not dt > 0:
        raise ScheduleError(f"time step must be positive, got {dt}")
    steps = max(1, math.ceil(T / dt - 1e-9))
    return np.linspace(0.0, T, steps + 1)


class RunMonitor:
    """Aborts a run on non-finite coefficients or norm growth beyond the limit."""

    def __init__(self, initial_norm, label, growth_limit=None):
        if growth_limit is None:
            growth_limit = settings.WKB_GROWTH_LIMIT
        self.ceiling = growth_limit * max(initial_norm, 1.0)
        self.label = label

    def check(self, t, norm, *arrays):
        if not all(np.all(np.isfinite(arr)) for arr in arrays):
            raise NonFiniteError(f"{self.label}: non-finite coefficients", time=t)
        if norm > self.ceiling:
            raise InstabilityError(
                f"{self.label}: norm {norm:.3g} exceeds {self.ceiling:.3g}", time=t
            )


def grenier_terms(grid, spec, phi_hat, a_hat):
    """Dealiased nonlinear right-hand side, without the dispersive term."""
    d1 = grid.first_derivative
    phi_x = grid.to_physical(d1 * phi_hat).real
    phi_xx = grid.to_physical(grid.second_derivative * phi_hat).real
    a = grid.to_physical(a_hat)
    a_x = grid.to_physical(d1 * a_hat)
    rho = np.abs(a) ** 2
    g = spec.g(rho)

    dphi = -0.5 * phi_x**2 - 0.5 * g * phi_x - spec.f(rho)
    da = -phi_x * a_x - 0.5 * a * phi_xx
    dphi_hat = grid.hermitian(grid.dealias(grid.to_spectral(dphi)))
    da_hat = grid.dealias(grid.to_spectral(da) - 0.5 * d1 * grid.to_spectral(g * a))
    return dphi_hat, da_hat


def dispersion(grid, eps):
    """Diagonal of (i eps / 2) d_xx."""
    return 0.5j * eps * grid.second_derivative


def rhs_grenier(state, eps, spec):
    check_epsilon(eps)
    grid = state.grid
    dphi_hat, da_hat = grenier_terms(grid, spec, *state.arrays())
    da_hat = da_hat + dispersion(grid, eps) * state.a.coeffs
    if not (np.all(np.isfinite(dphi_hat)) and np.all(np.isfinite(da_hat))):
        raise NonFiniteError("phase/amplitude right-hand side is not finite")
    return WKBState.from_arrays(grid, dphi_hat, da_hat)


def march(state0, times, schedule, eps, linear, nonlinear, label, substeps=1, inspect=None):
    """Step ``state0`` across ``times`` with ``substeps`` IF-RK4 steps per sample.

    ``inspect(t, state)`` runs on every stored sample after the finiteness
    and growth checks.
    """
    h = (times[1] - times[0]) / substeps
    stepper = IntegratingFactorRK4(linear, h)
    monitor = RunMonitor(coefficient_norm(state0.grid, state0.arrays()), label)
    y = state0.arrays()
    states = [state0]
    for k in range(1, len(times)):
        for s in range(substeps):
            y = state0.project(stepper.step(times[k - 1] + s * h, y, nonlinear))
        monitor.check(times[k], coefficient_norm(state0.grid, y), *y)
        state = state0.with_arrays(y)
        if inspect is not None:
            inspect(times[k], state)
        states.append(state)
    return Trajectory(times, tuple(states), schedule, eps)


def integrate(state0, eps, spec, schedule, dt):
    """Integrate the phase/amplitude system on [0, schedule.T]."""
    check_epsilon(eps)
    grid = state0.grid
    times = time_grid(schedule.T, dt)
    logger.info(
        "phase/amplitude solve: eps=%g n=%d steps=%d T=%g", eps, grid.n_modes, len(times) - 1, schedule.T
    )

    def nonlinear(t, y):
        return grenier_terms(grid, spec, *y)

    return march(state0, times, schedule, eps, (None, dispersion(grid, eps)), nonlinear, f"grenier eps={eps:g}")


def solve_limit(state0, spec, schedule, dt):
    return integrate(state0, 0.0, spec, schedule, dt)


def _frozen_terms(grid, spec, frozen, phi_hat, a_hat):
    """Right-hand side of one step of the scheme, linear in (phi_hat, a_hat)."""
    d1 = grid.first_derivative
    phi_j_hat, a_j_hat = frozen
    pj_x = grid.to_physical(d1 * phi_j_hat).real
    pj_xx = grid.to_physical(grid.second_derivative * phi_j_hat).real
    a_j = grid.to_physical(a_j_hat)
    a_j_x = grid.to_physical(d1 * a_j_hat)
    rho_j = np.abs(a_j) ** 2
    g_j = spec.g(rho_j)
    g_j_x = grid.to_physical(d1 * grid.to_spectral(g_j)).real

    phi_x = grid.to_physical(d1 * phi_hat).real
    a = grid.to_physical(a_hat)
    a_x = grid.to_physical(d1 * a_hat)

    dphi = -0.5 * pj_x * phi_x - 0.5 * g_j * phi_x - spec.f(rho_j)
    da = (
        -pj_x * a_x
        - 0.5 * a * pj_xx
        - 0.5 * g_j_x * a
        - 0.5 * spec.h(rho_j) * np.conj(a_j) * a * a_j_x
    )
    return (
        grid.hermitian(grid.dealias(grid.to_spectral(dphi))),
        grid.dealias(grid.to_spectral(da)),
    )


def _scheme_step(state0, previous, eps, spec):
    grid = state0.grid
    sampler = previous.sampler()

    def nonlinear(t, y):
        return _frozen_terms(grid, spec, sampler(t), *y)

    return march(
        state0,
        previous.times,
        previous.schedule,
        eps,
        (None, dispersion(grid, eps)),
        nonlinear,
        f"scheme eps={eps:g}",
    )


def iterate_scheme(state0, eps, spec, schedule, dt, j_max=30, tol=1e-10, ell=None):
    """Fixed-point iteration with coefficients frozen at the previous iterate.

    Starts from the time-independent iterate equal to the initial data and
    stops once |||dphi|||_{l+1,T} + |||da|||_{l,T} < tol, after ``j_max``
    iterations, or when the differences grow for
    ``WKB_DIVERGENCE_PATIENCE`` consecutive iterations.
    """
    check_epsilon(eps)
    if j_max < 2:
        raise ScheduleError(f"j_max must be at least 2, got {j_max}")
    if ell is None:
        ell = settings.WKB_DEFAULT_ELL
    times = time_grid(schedule.T, dt)
    current = Trajectory(times, (state0,) * len(times), schedule, eps)
    diagnostics = SchemeDiagnostics()
    patience = settings.WKB_DIVERGENCE_PATIENCE

    for j in range(j_max):
        following = _scheme_step(state0, current, eps, spec)
        d_phi = triple_norm(times, [n.phi - c.phi for n, c in zip(following.states, current.states)], schedule, ell + 1)
        d_a = triple_norm(times, [n.a - c.a for n, c in zip(following.states, current.states)], schedule, ell)
        diagnostics.record(d_phi, d_a)
        logger.debug("scheme iteration %d: |||dphi|||=%.3e |||da|||=%.3e", j + 1, d_phi, d_a)
        current = following
        if d_phi + d_a < tol:
            diagnostics.converged = True
            break
        if diagnostics.expanding(patience):
            diagnostics.diverged = True
            logger.warning(
                "iterative scheme diverging at eps=%g: ratios %s", eps, diagnostics.ratios[-patience:]
            )
            break
    else:
        logger.warning("iterative scheme stopped at j_max=%d without reaching tol=%g", j_max, tol)
    return current, diagnostics


def tame_constant(ell, kappa=None):
    """C(l) = kappa 2^l, increasing in l."""
    if kappa is None:
        kappa = settings.WKB_TAME_CONSTANT
    return kappa * 2.0**ell


def select_M_T(ell, phi0_norm, a0_norm, w0, spec, safety=None, kappa=None):
    """Smallest M meeting the boundedness conditions of the scheme, times a safety factor.

    With A = ||phi0||_{H^{l+1}_{w0}} and B = ||a0||_{H^l_{w0}} the conditions are
        4A^2 + (4C^2/M^2)(2B^2)^(2 sigma) <= M^2 / (16 C^2),   (2B^2)^gamma <= M / (4C),
    together with C A / M <= 1/4 and C B^(2 gamma) / M <= 1/4. T = 0.9 w0 / M.
    """
    if ell <= 1:
        raise ScheduleError(f"regularity index must exceed 1, got {ell}")
    if safety is None:
        safety = settings.WKB_SAFETY_FACTOR
    C = tame_constant(ell, kappa)
    A, B = float(phi0_norm), float(a0_norm)
    doubled = 2 * B**2
    pressure = doubled ** (2 * spec.sigma)
    candidates = (
        C,
        C * math.sqrt(32 * A**2 + 8 * math.sqrt(16 * A**4 + pressure)),
        4 * C * doubled**spec.gamma,
        4 * C * A,
        4 * C * B ** (2 * spec.gamma),
    )
    M = safety * max(candidates)
    return WeightSchedule(w0=w0, M=M, T=0.9 * w0 / M)


@dataclass(frozen=True)
class AprioriBounds:
    a_value: float
    a_bound: float
    phi_value: float
    phi_bound: float

    @property
    def holds(self):
        return self.a_value <= self.a_bound and self.phi_value <= self.phi_bound


def a_priori_bounds(trajectory, ell, spec):
    """|||a|||^2_{l,T} <= 2||a0||^2 and |||phi|||^2_{l+1,T} <= 4||phi0||^2 + ||a0||^(4 sigma)."""
    schedule = trajectory.schedule
    times = trajectory.times
    a0 = analytic_norm(trajectory.initial.a, schedule.w0, ell)
    phi0 = analytic_norm(trajectory.initial.phi, schedule.w0, ell + 1)
    a_tri = triple_norm(times, [s.a for s in trajectory.states], schedule, ell)
    phi_tri = triple_norm(times, [s.phi for s in trajectory.states], schedule, ell + 1)
    return AprioriBounds(
        a_value=a_tri**2,
        a_bound=2 * a0**2,
        phi_value=phi_tri**2,
        phi_bound=4 * phi0**2 + a0 ** (4 * spec.sigma),
    )
