"""Helpers on the (two-level ion) x (Fock space) product space.

Comparisons between truncated operators are only meaningful away from the
truncation edge, so most helpers here act on the guarded subspace: spin
blocks restricted to Fock levels n < N - guard.
"""

import logging
from typing import Tuple
import numpy as np
from ..models.operators import SpinBosonOperator, SpinBosonState
from ..utils.validators import InputValidator
from .fock import ladder

logger = logging.getLogger(__name__)


def guarded_indices(mode_dim: int, guard: int) -> np.ndarray:
    """Indices (e, n) and (g, n) with n below the guard band"""
    InputValidator.validate_guard(guard, mode_dim)
    low = np.arange(mode_dim - guard)
    return np.concatenate([low, mode_dim + low])


def restrict(matrix: np.ndarray, mode_dim: int, guard: int) -> np.ndarray:
    """P M P as a dense submatrix"""
    idx = guarded_indices(mode_dim, guard)
    return matrix[np.ix_(idx, idx)]


def guarded_norm(matrix: np.ndarray, mode_dim: int, guard: int) -> float:
    """Spectral norm of P M P"""
    return float(np.linalg.norm(restrict(matrix, mode_dim, guard), ord=2))


def guarded_distance(first: SpinBosonOperator, second: SpinBosonOperator, guard: int) -> float:
    """||P (A - B) P||"""
    InputValidator.validate_same_dim(first, second)
    return guarded_norm(first.matrix - second.matrix, first.mode_dim, guard)


def guarded_distance_modulo_identity(first: SpinBosonOperator, second: SpinBosonOperator,
                                     guard: int) -> Tuple[float, float]:
    """
    min_c ||P (A - B - c I) P|| with c fitted by the trace.

    Returns the residual norm and the fitted constant c.
    """
    InputValidator.validate_same_dim(first, second)
    diff = restrict(first.matrix - second.matrix, first.mode_dim, guard)
    shift = float(np.trace(diff).real / diff.shape[0])
    residual = float(np.linalg.norm(diff - shift * np.eye(diff.shape[0]), ord=2))
    return residual, shift


def guarded_unitarity_error(op: SpinBosonOperator, guard: int) -> float:
    """||P (U^dagger U - I) P||"""
    product = op.matrix.conj().T @ op.matrix
    return guarded_norm(product - np.eye(op.dim), op.mode_dim, guard)


def conjugate(u: SpinBosonOperator, h: SpinBosonOperator) -> SpinBosonOperator:
    """U H U^dagger; stays Hermitian-flagged if H is"""
    InputValidator.validate_same_dim(u, h)
    return SpinBosonOperator.from_blocks(
        *_split(u.matrix @ h.matrix @ u.matrix.conj().T), hermitian=h.hermitian
    )


def _split(matrix: np.ndarray):
    n = matrix.shape[0] // 2
    return matrix[:n, :n], matrix[:n, n:], matrix[n:, :n], matrix[n:, n:]


def excitation_number(dim: int) -> SpinBosonOperator:
    """n + sigma_z/2, conserved by Jaynes-Cummings dynamics"""
    n = ladder(dim)[2].matrix
    half = 0.5 * np.eye(dim)
    return SpinBosonOperator.from_spin_terms(n, half, np.zeros((dim, dim)), np.zeros((dim, dim)),
                                             hermitian=True)


def commutator_norm(first: SpinBosonOperator, second: SpinBosonOperator) -> float:
    """||[A, B]|| over the full truncated space"""
    InputValidator.validate_same_dim(first, second)
    return float(np.linalg.norm(first.matrix @ second.matrix - second.matrix @ first.matrix, ord=2))


def spin_tail_mass(state: SpinBosonState, guard: int) -> float:
    """Population with n >= N - guard, summed over both spin states"""
    InputValidator.validate_guard(guard, state.mode_dim)
    cut = state.mode_dim - guard
    return float(sum(np.sum(np.abs(state.spin_block(s)[cut:]) ** 2) for s in ("e", "g")))
