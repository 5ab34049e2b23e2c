"""
Integrating-factor RK4 stepping and time interpolation of stored trajectories.
"""

import math

import numpy as np

from .spectral import uniform_step


def _scale(factors, arrays):
    return tuple(y if e is None else e * y for e, y in zip(factors, arrays))


def _axpy(arrays, increments, h):
    return tuple(y + h * k for y, k in zip(arrays, increments))


class IntegratingFactorRK4:
    """Classical RK4 applied after removing a diagonal linear part exactly.

    Solves ``y' = Lambda y + N(t, y)`` where ``y`` is a tuple of coefficient
    arrays and ``linear`` holds one diagonal of ``Lambda`` per component
    (``None`` for components without a linear part). With every diagonal
    ``None`` this is plain RK4.
    """

    def __init__(self, linear, dt):
        self.dt = dt
        self.half = tuple(None if lin is None else np.exp(0.5 * dt * lin) for lin in linear)
        self.full = tuple(None if e is None else e * e for e in self.half)

    def step(self, t, state, nonlinear):
        h = self.dt
        k1 = nonlinear(t, state)
        k2 = nonlinear(t + h / 2, _scale(self.half, _axpy(state, k1, h / 2)))
        k3 = nonlinear(t + h / 2, _axpy(_scale(self.half, state), k2, h / 2))
        k4 = nonlinear(t + h, _axpy(_scale(self.full, state), _scale(self.half, k3), h))

        advanced = _scale(self.full, state)
        first = _scale(self.full, k1)
        middle = _scale(self.half, tuple(b + c for b, c in zip(k2, k3)))
        return tuple(
            y + (h / 6) * (a + 2 * m + d)
            for y, a, m, d in zip(advanced, first, middle, k4)
        )


def lagrange_weights(nodes, x):
    weights = np.ones(len(nodes))
    for i, xi in enumerate(nodes):
        for j, xj in enumerate(nodes):
            if i != j:
                weights[i] *= (x - xj) / (xi - xj)
    return weights


class TrajectorySampler:
    """Coefficient arrays of a stored trajectory at any time in its span.

    Sample times are returned exactly; other times use cubic Lagrange
    interpolation on the four nearest samples (one-sided at the ends), which
    keeps the RK4 stage values fourth-order consistent.
    """

    def __init__(self, times, arrays):
        self.times = np.asarray(times, dtype=float)
        self.arrays = list(arrays)
        self.dt = uniform_step(self.times)
        self._cache = (None, None)

    def __call__(self, t):
        if self._cache[0] == t:
            return self._cache[1]
        position = (t - self.times[0]) / self.dt
        nearest = int(round(position))
        count = len(self.arrays)
        if abs(position - nearest) < 1e-9 and 0 <= nearest < count:
            return self.arrays[nearest]
        width = min(4, count)
        start = min(max(math.floor(position) - 1, 0), count - width)
        nodes = np.arange(start, start + width, dtype=float)
        weights = lagrange_weights(nodes, position)
        samples = self.arrays[start:start + width]
        value = tuple(
            sum(wgt * sample[c] for wgt, sample in zip(weights, samples))
            for c in range(len(samples[0]))
        )
        self._cache = (t, value)
        return value
