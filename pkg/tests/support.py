# tests/support.py
"""
Shared fixtures for the test suites.
"""

import numpy as np

from src.core.fock import ModeSpec, PureState
from src.main.constants import BEC_G, BEC_OMEGA_B, OPTICAL_G
from src.physics.model import SystemParams


def bec_params(ratio=0.0, **extra):
    return SystemParams.from_ratio(BEC_OMEGA_B, ratio, BEC_G, **extra)


def optical_params(ratio=0.0):
    return SystemParams.from_ratio(BEC_OMEGA_B, ratio, OPTICAL_G)


def random_pure(rng, dims, support=None):
    """Normalised random state; with `support` only the lowest levels of every factor are filled."""
    shape = tuple(dims)
    amps = np.zeros(shape, dtype=complex)
    window = tuple(slice(0, min(support, d)) if support else slice(None) for d in shape)
    sub = amps[window]
    amps[window] = rng.normal(size=sub.shape) + 1j * rng.normal(size=sub.shape)
    state = PureState(amps.reshape(-1), tuple(ModeSpec(d) for d in shape))
    return state.normalized()


def random_density(rng, dimension, support=None, rank=3):
    """Mixture of `rank` random pure states of one mode."""
    weights = rng.random(rank)
    weights /= weights.sum()
    matrix = np.zeros((dimension, dimension), dtype=complex)
    for w in weights:
        psi = random_pure(rng, (dimension,), support).amplitudes
        matrix += w * np.outer(psi, psi.conj())
    return matrix
