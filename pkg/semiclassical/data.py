"""
Initial data: named presets, explicit coefficient lists and eps-dependent perturbations.
"""

import numpy as np
from django.conf import settings

from .corrector import CorrectorState
from .exceptions import ConfigError
from .grenier import WKBState
from .spectral import SpectralField, band_limit, denoise, transform_forward


def _clean(field):
    return field.with_coeffs(denoise(band_limit(field).coeffs, settings.WKB_SPECTRAL_FLOOR))


def analytic_bump(grid):
    """phi0 = 0.3 sin(2 pi x / L), a0 = exp(0.5 (cos(2 pi x / L) - 1)), cut to the 2/3 band."""
    x = 2 * np.pi * grid.points / grid.length
    phi0 = transform_forward(grid, 0.3 * np.sin(x), real=True)
    a0 = transform_forward(grid, np.exp(0.5 * (np.cos(x) - 1.0)), real=False)
    return WKBState(_clean(phi0), _clean(a0))


def constant(grid, value=1.0):
    """phi0 = 0, a0 = value."""
    samples = np.full(grid.n_modes, value, dtype=complex)
    return WKBState(SpectralField.zeros(grid, real=True), _clean(transform_forward(grid, samples, real=False)))


PRESET_BUILDERS = {
    "analytic-bump": analytic_bump,
    "constant": constant,
}


def coefficients(grid, triples, real, key=None):
    """Coefficient array from ``(index, re, im)`` triples.

    For real fields a missing partner -j is filled with the conjugate of j.
    """
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    given = set()
    for index, re, im in triples:
        coeffs[index % grid.n_modes] += complex(re, im)
        given.add(index % grid.n_modes)
    if real:
        for position in list(given):
            partner = (-grid.indices[position]) % grid.n_modes
            if partner not in given:
                coeffs[partner] = np.conj(coeffs[position])
        if abs(coeffs[0].imag) > 0:
            raise ConfigError("the mean of a real field must be real", key=key)
    return coeffs


def _field(grid, triples, real, key):
    if not triples:
        return SpectralField.zeros(grid, real=real)
    try:
        return SpectralField(grid, coefficients(grid, triples, real, key), real=real)
    except ValueError as exc:
        raise ConfigError(str(exc), key=key) from exc


def initial_state(config):
    """eps-independent data (phi0, a0)."""
    grid = config.grid
    if config.preset:
        return PRESET_BUILDERS[config.preset](grid)
    return WKBState(
        _field(grid, config.phi0, True, "data.phi0"),
        _field(grid, config.a0, False, "data.a0"),
    )


def initial_corrector(config):
    """(phi10, a10); zero unless given explicitly."""
    grid = config.grid
    return CorrectorState(
        _field(grid, config.phi10, True, "data.phi10"),
        _field(grid, config.a10, False, "data.a10"),
    )


def perturbed_state(config, state0, eps):
    """(phi0^eps, a0^eps): ``state0`` plus every delta * eps^p perturbation."""
    if not config.perturbation:
        return state0
    grid = state0.grid
    phi_triples = [(i, re * eps**p, im * eps**p) for name, i, re, im, p in config.perturbation if name == "phi0"]
    a_triples = [(i, re * eps**p, im * eps**p) for name, i, re, im, p in config.perturbation if name == "a0"]
    return WKBState(
        state0.phi + _field(grid, phi_triples, True, "data.perturbation"),
        state0.a + _field(grid, a_triples, False, "data.perturbation"),
    )
