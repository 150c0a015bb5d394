"""Truncated Fock-space linear algebra: ladder operators, spectral operator
functions, displacement operators and displaced number states."""

import logging
from functools import lru_cache
from typing import Callable, Tuple
import numpy as np
import scipy.linalg as la
from ..exceptions import TruncationError
from ..models.operators import ModeOperator, ModeState, _DenseOperator
from ..utils.config import Config
from ..utils.validators import InputValidator

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 8


def ladder(dim: int) -> Tuple[ModeOperator, ModeOperator, ModeOperator]:
    """
    Annihilation, creation and number operators on |0>..|N-1>.

    a[n-1, n] = sqrt(n); the number operator is exactly diag(0..N-1).
    """
    a = _annihilation(InputValidator.validate_dim(dim))
    return (
        ModeOperator(a),
        ModeOperator(a.conj().T),
        ModeOperator(np.diag(np.arange(dim, dtype=float)), hermitian=True),
    )


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def spectral_apply(matrix: np.ndarray, func: Callable[[np.ndarray], np.ndarray],
                   spectrum: Tuple[np.ndarray, np.ndarray] = None) -> np.ndarray:
    """V f(L) V^dagger for a Hermitian matrix with eigendecomposition V L V^dagger"""
    eig_val, eig_vec = spectrum if spectrum is not None else la.eigh(matrix)
    return np.einsum('ij,j,kj->ik', eig_vec, func(eig_val), eig_vec.conj())


def hermitian_function(op: _DenseOperator, func: Callable[[np.ndarray], np.ndarray]) -> _DenseOperator:
    """
    Apply a scalar function to a Hermitian operator through its eigendecomposition.

    The result is flagged Hermitian when func is real on the spectrum.
    Works for mode and spin-boson operators alike.
    """
    InputValidator.validate_hermitian(op.matrix)
    spectrum = op.spectrum if op.hermitian else la.eigh(op.matrix)
    real_valued = np.isrealobj(func(spectrum[0][:1]))
    result = spectral_apply(op.matrix, func, spectrum)
    if real_valued:
        result = 0.5 * (result + result.conj().T)
    return type(op)(result, hermitian=bool(real_valued))


@lru_cache(maxsize=16)
def _quadrature_spectrum(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    # K = i(a^dagger - a), generator of displacements along the imaginary axis
    a = _annihilation(dim)
    generator = 1j * (a.conj().T - a)
    logger.debug(f"Diagonalizing displacement generator for N={dim}")
    return la.eigh(generator)


def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """
    exp(beta a^dagger - beta* a) as a dense matrix.

    With beta = r e^{i theta}, the Hermitian generator i(beta a^dagger - beta* a)
    equals r R K R^dagger, where K = i(a^dagger - a) and R = exp(i theta n), so
    every amplitude reuses one cached eigendecomposition per dimension.
    """
    dim = InputValidator.validate_dim(dim)
    r, theta = abs(beta), float(np.angle(beta))
    if r == 0.0:
        return np.eye(dim, dtype=complex)
    eig_val, eig_vec = _quadrature_spectrum(dim)
    core = np.einsum('ij,j,kj->ik', eig_vec, np.exp(-1j * r * eig_val), eig_vec.conj())
    phases = np.exp(1j * theta * np.arange(dim))
    return phases[:, None] * core * phases.conj()[None, :]


def displace_many(betas: np.ndarray, amplitudes: np.ndarray) -> np.ndarray:
    """Rows D(beta_k) psi for a batch of amplitudes, without forming D"""
    dim = InputValidator.validate_dim(amplitudes.shape[0])
    betas = np.asarray(betas, dtype=complex).ravel()
    eig_val, eig_vec = _quadrature_spectrum(dim)
    levels = np.arange(dim)
    phases = np.exp(1j * np.outer(np.angle(betas), levels))
    rotated = (phases.conj() * amplitudes[None, :]) @ eig_vec.conj()
    rotated *= np.exp(-1j * np.outer(np.abs(betas), eig_val))
    return phases * (rotated @ eig_vec.T)


@lru_cache(maxsize=256)
def displacement(beta: complex, dim: int) -> ModeOperator:
    """Displacement operator D(beta) on the truncated Fock space"""
    return ModeOperator(displacement_matrix(complex(beta), dim))


def basis_state(k: int, dim: int) -> ModeState:
    """Fock state |k>"""
    dim = InputValidator.validate_dim(dim)
    if not 0 <= k < dim:
        raise TruncationError(f"Fock level {k} outside truncation N={dim}")
    amplitudes = np.zeros(dim, dtype=complex)
    amplitudes[k] = 1.0
    return ModeState(amplitudes, normalized=True)


def displaced_number_state(beta: complex, k: int, dim: int, guard: int = DEFAULT_GUARD) -> ModeState:
    """D(beta)|k>; k must stay below the guard band"""
    dim = InputValidator.validate_dim(dim)
    InputValidator.validate_guard(guard, dim)
    if k < 0 or k > dim - guard:
        raise TruncationError(
            f"Fock level {k} is inside the guard band of N={dim} (guard {guard})"
        )
    state = displacement(beta, dim) @ basis_state(k, dim)
    tail = tail_mass(state, guard)
    if tail > Config.tolerance("tail_initial"):
        logger.warning(f"Displaced number state |{beta:.4g}, {k}> has guard-band mass {tail:.3e} at N={dim}")
    return state.normalize()


def tail_mass(state: ModeState, guard: int) -> float:
    """Population in the top guard levels, n >= N - guard"""
    InputValidator.validate_guard(guard, state.dim)
    tail = state.amplitudes[state.dim - guard:]
    return float(np.vdot(tail, tail).real)


def mean_number(state: ModeState) -> float:
    """<n>"""
    populations = np.abs(state.amplitudes) ** 2
    return float(np.dot(np.arange(state.dim), populations) / populations.sum())
