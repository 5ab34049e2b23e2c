"""
Periodic Fourier discretization, analytic norms and time-weighted norms.

Coefficients are stored in FFT order and normalized so that ``coeffs[p]`` is
the amplitude of ``exp(i xi_p x)``::

    psi(x_m) = sum_p coeffs[p] * exp(i xi_p x_m)

With this choice the discrete squared norm ``L * sum |c_p|^2`` equals the
rectangle-rule quadrature of ``|psi|^2`` on the collocation grid, which is the
``(L / n^2) * sum |fft|^2`` normalization of the unnormalized transform.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as sp_fft
from scipy.special import logsumexp

from .exceptions import FieldError, GridError, ScheduleError

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12
MIN_MODES = 8


def _read_only(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FourierGrid:
    """Uniform periodic grid of ``n_modes`` points on ``[0, length)``."""

    n_modes: int
    length: float

    def __post_init__(self):
        n = self.n_modes
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise GridError(f"n_modes must be an integer, got {n!r}")
        if n < MIN_MODES or n % 2:
            raise GridError(f"n_modes must be even and >= {MIN_MODES}, got {n}")
        if not (math.isfinite(self.length) and self.length > 0):
            raise GridError(f"domain length must be positive, got {self.length}")

    @cached_property
    def indices(self):
        """Mode numbers j in FFT order, ``{0..n/2, -n/2+1..-1}``."""
        n = self.n_modes
        j = np.concatenate([np.arange(0, n // 2 + 1), np.arange(-n // 2 + 1, 0)])
        return _read_only(j)

    @cached_property
    def wavenumbers(self):
        return _read_only(2 * np.pi * self.indices / self.length)

    @cached_property
    def points(self):
        return _read_only(np.arange(self.n_modes) * self.length / self.n_modes)

    @cached_property
    def bracket(self):
        """Japanese bracket <xi> = sqrt(1 + xi^2)."""
        return _read_only(np.sqrt(1.0 + self.wavenumbers**2))

    @cached_property
    def nyquist(self):
        return self.n_modes // 2

    @cached_property
    def dealias_mask(self):
        """2/3 rule: keep modes with |j| <= n/3."""
        return _read_only(np.abs(self.indices) <= self.n_modes // 3)

    @cached_property
    def first_derivative(self):
        d = 1j * self.wavenumbers
        d[self.nyquist] = 0.0
        return _read_only(d)

    @cached_property
    def second_derivative(self):
        d = -(self.wavenumbers**2).astype(complex)
        d[self.nyquist] = 0.0
        return _read_only(d)

    @property
    def cell(self):
        return self.length / self.n_modes

    def to_physical(self, coeffs):
        return sp_fft.ifft(coeffs) * self.n_modes

    def to_spectral(self, values):
        return sp_fft.fft(values) / self.n_modes

    def mirror(self, coeffs):
        """Coefficients reindexed j -> -j."""
        return np.roll(coeffs[::-1], 1)

    def hermitian(self, coeffs):
        """Projection onto coefficients of a real function."""
        return 0.5 * (coeffs + np.conj(self.mirror(coeffs)))

    def dealias(self, coeffs):
        return np.where(self.dealias_mask, coeffs, 0.0)


def make_grid(n_modes, length):
    return FourierGrid(n_modes, float(length))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Immutable periodic field held as Fourier coefficients.

    ``real`` asserts Hermitian symmetry; it is checked on construction and the
    coefficients are then symmetrized exactly.
    """

    grid: FourierGrid
    coeffs: np.ndarray
    real: bool = False

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (self.grid.n_modes,):
            raise FieldError(
                f"expected {self.grid.n_modes} coefficients, got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise FieldError("coefficients must be finite")
        if self.real:
            mirrored = np.conj(self.grid.mirror(coeffs))
            scale = max(float(np.max(np.abs(coeffs))), np.finfo(float).tiny)
            asymmetry = float(np.max(np.abs(coeffs - mirrored)))
            if asymmetry > HERMITIAN_TOLERANCE * scale:
                raise FieldError(
                    f"coefficients are not Hermitian (relative asymmetry {asymmetry / scale:.3g})"
                )
            coeffs = 0.5 * (coeffs + mirrored)
        object.__setattr__(self, "coeffs", _read_only(coeffs))

    @classmethod
    def zeros(cls, grid, real=False):
        return cls(grid, np.zeros(grid.n_modes, dtype=complex), real)

    @classmethod
    def from_function(cls, grid, function, real=None):
        return transform_forward(grid, function(grid.points), real=real)

    @property
    def values(self):
        return transform_inverse(self)

    def with_coeffs(self, coeffs, real=None):
        return SpectralField(self.grid, coeffs, self.real if real is None else real)

    def _check_grid(self, other):
        if other.grid != self.grid:
            raise FieldError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if not isinstance(other, SpectralField):
            return NotImplemented
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs, self.real and other.real)

    def __sub__(self, other):
        if not isinstance(other, SpectralField):
            return NotImplemented
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs, self.real and other.real)

    def __neg__(self):
        return SpectralField(self.grid, -self.coeffs, self.real)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralField):
            return NotImplemented
        real = self.real and np.isreal(scalar)
        return SpectralField(self.grid, self.coeffs * scalar, bool(real))

    __rmul__ = __mul__

    def norm(self, w=0.0, ell=0.0):
        return analytic_norm(self, w, ell)

    def __repr__(self):
        kind = "real" if self.real else "complex"
        return f"<SpectralField {kind} n={self.grid.n_modes} L={self.grid.length:g}>"


def transform_forward(grid, samples, real=None):
    samples = np.asarray(samples)
    if samples.shape != (grid.n_modes,):
        raise FieldError(
            f"expected {grid.n_modes} samples, got shape {samples.shape}"
        )
    if real is None:
        real = not np.iscomplexobj(samples)
    return SpectralField(grid, grid.to_spectral(samples), real)


def transform_inverse(field):
    values = field.grid.to_physical(field.coeffs)
    if field.real:
        return values.real
    return values


def derivative(field, order=1):
    if order == 1:
        multiplier = field.grid.first_derivative
    elif order == 2:
        multiplier = field.grid.second_derivative
    else:
        raise FieldError(f"unsupported derivative order {order!r}; use 1 or 2")
    return SpectralField(field.grid, field.coeffs * multiplier, field.real)


def _weights(grid, w, ell):
    return np.exp(2 * ell * np.log(grid.bracket) + 2 * w * grid.bracket)


def _check_norm_arguments(w, ell):
    if w < 0:
        raise ScheduleError(f"analytic weight must be nonnegative, got {w}")
    if ell < 0:
        raise FieldError(f"regularity index must be nonnegative, got {ell}")


def weighted_square(field, w, ell):
    """``||psi||^2`` in H_w^ell, summed in log space so large weights do not overflow."""
    _check_norm_arguments(w, ell)
    power = np.abs(field.coeffs) ** 2
    present = power > 0
    if not present.any():
        return 0.0
    bracket = field.grid.bracket[present]
    log_terms = 2 * ell * np.log(bracket) + 2 * w * bracket + np.log(power[present])
    return field.grid.length * math.exp(logsumexp(log_terms))


def analytic_norm(field, w, ell):
    return math.sqrt(weighted_square(field, w, ell))


def sobolev_norm(field, s):
    return analytic_norm(field, 0.0, s)


def analytic_inner(psi, chi, w, ell):
    """<psi, chi> in H_w^ell, linear in the first argument."""
    _check_norm_arguments(w, ell)
    psi._check_grid(chi)
    weights = _weights(psi.grid, w, ell)
    return psi.grid.length * complex(np.sum(weights * psi.coeffs * np.conj(chi.coeffs)))


def quadrature_square(field):
    """Rectangle-rule quadrature of |psi|^2 on the collocation points."""
    return field.grid.cell * float(np.sum(np.abs(field.values) ** 2))


def tail_mass(field):
    """Fraction of the L2 mass carried by modes outside the 2/3 band."""
    power = np.abs(field.coeffs) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return 0.0
    return float(np.sum(power[~field.grid.dealias_mask])) / total


def band_limit(field):
    return field.with_coeffs(field.grid.dealias(field.coeffs))


def product(first, second):
    """Coefficients of ``first * second`` by direct convolution, truncated to the grid.

    Each output coefficient carries roundoff relative to its own terms, so
    analytic norms of products of fast-decaying fields stay accurate at any
    weight. Modes beyond the grid are dropped instead of aliased.
    """
    first._check_grid(second)
    grid = first.grid
    n = grid.n_modes
    full = np.convolve(sp_fft.fftshift(first.coeffs), sp_fft.fftshift(second.coeffs))
    coeffs = sp_fft.ifftshift(full[n // 2 : n // 2 + n])
    real = first.real and second.real
    if real:
        coeffs = grid.hermitian(coeffs)
    return SpectralField(grid, coeffs, real=real)


def denoise(coeffs, floor, scale=1.0):
    """Zero coefficients smaller than ``floor * max(peak, scale)``.

    Keeps roundoff in high modes from dominating analytic norms, whose weight
    grows like exp(w <xi>). The absolute ``scale`` also clears fields that are
    zero up to roundoff. Hermitian symmetry is preserved.
    """
    magnitude = np.abs(coeffs)
    peak = float(np.max(magnitude)) if magnitude.size else 0.0
    if peak == 0.0:
        return coeffs
    return np.where(magnitude < floor * max(peak, scale), 0.0, coeffs)


def analyticity_width(field, floor=1e-13):
    """Exponential decay rate of |psi_j| against <xi_j>.

    The field lies in H_w for every w below the returned rate. Band-limited
    fields with fewer than three significant modes return ``inf``.
    """
    magnitude = np.abs(field.coeffs)
    peak = float(np.max(magnitude)) if magnitude.size else 0.0
    significant = magnitude > floor * peak
    if peak == 0.0 or np.count_nonzero(significant) < 3:
        return math.inf
    slope, _ = np.polyfit(field.grid.bracket[significant], np.log(magnitude[significant]), 1)
    return max(-float(slope), 0.0)


def linf_embedding_ratio(field, w, ell):
    norm = analytic_norm(field, w, ell)
    if norm == 0.0:
        return 0.0
    return float(np.max(np.abs(field.values))) / norm


def random_band_limited(grid, rng, max_index=None, real=True, decay=0.5):
    """Random field with modes |j| <= max_index and geometric decay in |j|."""
    if max_index is None:
        max_index = grid.n_modes // 4 - 1
    j = grid.indices
    envelope = np.where(np.abs(j) <= max_index, np.exp(-decay * np.abs(j)), 0.0)
    coeffs = envelope * (rng.standard_normal(grid.n_modes) + 1j * rng.standard_normal(grid.n_modes))
    if real:
        coeffs = grid.hermitian(coeffs)
        coeffs[grid.nyquist] = 0.0
    return SpectralField(grid, coeffs, real)


@dataclass(frozen=True)
class WeightSchedule:
    """Analyticity radius w(t) = w0 - M t on [0, T].

    ``M = 0`` is accepted as the constant-weight schedule.
    """

    w0: float
    M: float
    T: float

    def __post_init__(self):
        if not self.w0 > 0:
            raise ScheduleError(f"w0 must be positive, got {self.w0}")
        if self.M < 0:
            raise ScheduleError(f"M must be nonnegative, got {self.M}")
        if not self.T > 0:
            raise ScheduleError(f"T must be positive, got {self.T}")
        if self.M > 0 and not self.T < self.w0 / self.M:
            raise ScheduleError(
                f"T={self.T} must be below w0/M={self.w0 / self.M} so that w(t) > 0"
            )

    @property
    def rate(self):
        return -self.M

    def weight(self, t):
        return weight_at(self, t)


def weight_at(schedule, t):
    slack = 1e-12 * max(1.0, schedule.T)
    if t < -slack or t > schedule.T + slack:
        raise ScheduleError(f"t={t} outside [0, {schedule.T}]")
    return schedule.w0 - schedule.M * t


class TripleNormAccumulator:
    """Running max(sup_s ||psi||^2_{l,w(s)}, 2M int_0^t ||psi||^2_{l+1/2,w(s)} ds).

    The time integral uses the composite trapezoid rule over the observed
    samples. Single owner; not for sharing across workers.
    """

    def __init__(self, ell, M):
        self.ell = ell
        self.M = M
        self.sup_term = 0.0
        self.integral_term = 0.0
        self.last_time = None
        self._last_density = 0.0
        self.samples = 0

    @classmethod
    def for_schedule(cls, schedule, ell):
        return cls(ell, schedule.M)

    def observe(self, t, field, schedule):
        if schedule.M != self.M:
            raise ScheduleError(f"schedule M={schedule.M} differs from accumulator M={self.M}")
        if self.last_time is not None and t < self.last_time:
            raise ScheduleError(f"time regression: {t} after {self.last_time}")
        w = weight_at(schedule, t)
        value = weighted_square(field, w, self.ell)
        density = weighted_square(field, w, self.ell + 0.5)
        self.sup_term = max(self.sup_term, value)
        if self.last_time is not None:
            self.integral_term += 0.5 * (t - self.last_time) * (density + self._last_density)
        self.last_time = t
        self._last_density = density
        self.samples += 1
        return self

    def finalize(self):
        return math.sqrt(max(self.sup_term, 2 * self.M * self.integral_term))


def triple_norm_observe(acc, t, field, schedule):
    return acc.observe(t, field, schedule)


def triple_norm_finalize(acc):
    return acc.finalize()


def triple_norm(times, fields, schedule, ell):
    acc = TripleNormAccumulator.for_schedule(schedule, ell)
    for t, field in zip(times, fields):
        acc.observe(float(t), field, schedule)
    return acc.finalize()


def uniform_step(times):
    times = np.asarray(times, dtype=float)
    steps = np.diff(times)
    if steps.size == 0 or np.any(steps <= 0):
        raise FieldError("sample times must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise FieldError("sample times must be uniform")
    return float(steps[0])


def norm_evolution_residual(times, fields, derivatives, schedule, ell):
    """Largest mismatch in d/dt ||psi||^2_{l,w} = 2 Re<psi, psi_t>_{l,w} + 2 w' ||psi||^2_{l+1/2,w}.

    The left side is a centered difference of the sampled norms; each mismatch
    is taken relative to max(1, |right side|) at interior times.
    """
    if len(fields) < 3:
        raise FieldError("norm evolution needs at least three samples")
    if not (len(times) == len(fields) == len(derivatives)):
        raise FieldError("times, fields and derivatives must have equal length")
    dt = uniform_step(times)
    squares = [weighted_square(f, weight_at(schedule, t), ell) for t, f in zip(times, fields)]
    worst = 0.0
    for k in range(1, len(fields) - 1):
        w = weight_at(schedule, times[k])
        lhs = (squares[k + 1] - squares[k - 1]) / (2 * dt)
        rhs = 2 * analytic_inner(fields[k], derivatives[k], w, ell).real
        rhs += 2 * schedule.rate * weighted_square(fields[k], w, ell + 0.5)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst
