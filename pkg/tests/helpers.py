"""Basis states shared by the test modules."""

import numpy as np
from src.models.operators import ModeState, SpinBosonState


def fock(k, dim):
    amplitudes = np.zeros(dim, dtype=complex)
    amplitudes[k] = 1.0
    return amplitudes


def spin_fock(spin, k, dim):
    """|spin, k> on the product space"""
    zero = np.zeros(dim, dtype=complex)
    branches = (fock(k, dim), zero) if spin == "e" else (zero, fock(k, dim))
    return SpinBosonState.from_branches(*branches, normalized=True)


def mode_fock(k, dim):
    return ModeState(fock(k, dim), normalized=True)
