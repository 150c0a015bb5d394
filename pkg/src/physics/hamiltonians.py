"""
Ion-laser Hamiltonians on the spin x mode space.

The chain is: full Hamiltonian -> linearized form (after T1) -> small
rotation (after T2) -> effective Jaynes-Cummings model. Every builder
returns a Hermitian-flagged SpinBosonOperator; blocks are assembled from
mode operators via SpinBosonOperator.from_spin_terms.
"""

import logging
from functools import lru_cache
from typing import Dict
import numpy as np
from ..exceptions import UnsupportedDetuningError
from ..models.operators import SpinBosonOperator
from ..models.params import DerivedParams, IonParams
from ..utils.config import Config
from ..utils.validators import InputValidator
from .fock import displacement, hermitian_function, ladder
from .spin_boson import guarded_distance_modulo_identity, conjugate

logger = logging.getLogger(__name__)

# Spin-operator coupling basis used by operator_coefficients
COUPLING_TERMS = ("a_sigma_minus", "a_sigma_plus", "adag_sigma_minus", "adag_sigma_plus")


@lru_cache(maxsize=128)
def derive(params: IonParams) -> DerivedParams:
    """
    Quantities of the small-rotation step.

    epsilon = -(eta/2) nu/(nu + 2 Omega) cancels the counter-rotating terms
    to first order; lambda = 2 eta nu Omega/(nu + 2 Omega) is the resulting
    Jaynes-Cummings coupling.
    """
    nu, omega, eta = params.nu, params.omega_rabi, params.eta
    epsilon = -0.5 * eta * nu / (nu + 2.0 * omega)
    threshold = float(Config.defaults().get("epsilon_warning", 0.1))
    warn = abs(epsilon) > threshold
    if warn:
        logger.warning(f"|epsilon| = {abs(epsilon):.4f} exceeds {threshold}; small-rotation regime violated")
    return DerivedParams(
        nu=nu,
        omega_rabi=omega,
        epsilon=epsilon,
        lambda_eff=2.0 * eta * nu * omega / (nu + 2.0 * omega),
        delta_jcm=omega - 0.5 * nu,
        beta_minus=1j * (0.5 * eta - epsilon),
        lambda_linearized=0.5 * eta * nu,
        epsilon_abs_warning=warn,
    )


def _require_resonance(params: IonParams, builder: str) -> None:
    if not params.resonant:
        raise UnsupportedDetuningError(
            f"{builder} assumes resonance (delta = 0), got delta = {params.delta}"
        )


def _mode_terms(dim: int):
    a, adag, n = (op.matrix for op in ladder(dim))
    return a, adag, n, np.eye(dim, dtype=complex)


@lru_cache(maxsize=32)
def build_h_full(params: IonParams, dim: int) -> SpinBosonOperator:
    """nu n + (delta/2) sigma_z + Omega(sigma_- e^{-i eta(a+a^dagger)} + sigma_+ e^{i eta(a+a^dagger)})"""
    dim = InputValidator.validate_dim(dim)
    _, _, n, eye = _mode_terms(dim)
    kick = displacement(1j * params.eta, dim).matrix
    return SpinBosonOperator.from_spin_terms(
        params.nu * n,
        0.5 * params.delta * eye,
        params.omega_rabi * kick.conj().T,
        params.omega_rabi * kick,
        hermitian=True,
    )


@lru_cache(maxsize=32)
def build_h1(params: IonParams, dim: int) -> SpinBosonOperator:
    """nu n + Omega sigma_z + i(eta nu/2)(a - a^dagger) sigma_x + nu eta^2/4"""
    _require_resonance(params, "build_h1")
    dim = InputValidator.validate_dim(dim)
    a, adag, n, eye = _mode_terms(dim)
    nu, eta = params.nu, params.eta
    coupling = 0.5j * eta * nu * (a - adag)
    return SpinBosonOperator.from_spin_terms(
        nu * n + 0.25 * nu * eta ** 2 * eye,
        params.omega_rabi * eye,
        coupling,
        coupling,
        hermitian=True,
    )


@lru_cache(maxsize=32)
def build_h2_exact(params: IonParams, dim: int) -> SpinBosonOperator:
    """
    Hamiltonian after the small rotation, term by term:

        nu(n + i eps (a - a^dagger) sigma_x + eps^2)
        + Omega(sigma_z cos[2 eps X] + i(sigma_- - sigma_+) sin[2 eps X])
        + i(eta nu/2)(a - a^dagger) sigma_x + nu eps eta^2/4

    with X = a + a^dagger. Direct conjugation gives a different constant,
    so comparisons with other builders are made modulo identity.
    """
    _require_resonance(params, "build_h2_exact")
    dim = InputValidator.validate_dim(dim)
    d = derive(params)
    nu, eta, omega, eps = params.nu, params.eta, params.omega_rabi, d.epsilon
    a, adag, n, eye = _mode_terms(dim)
    quadrature = ladder_quadrature(dim)
    cos_term = hermitian_function(quadrature, lambda x: np.cos(2.0 * eps * x)).matrix
    sin_term = hermitian_function(quadrature, lambda x: np.sin(2.0 * eps * x)).matrix
    linear = 1j * (nu * eps + 0.5 * eta * nu) * (a - adag)
    return SpinBosonOperator.from_spin_terms(
        nu * n + (nu * eps ** 2 + 0.25 * nu * eps * eta ** 2) * eye,
        omega * cos_term,
        linear + 1j * omega * sin_term,
        linear - 1j * omega * sin_term,
        hermitian=True,
    )


@lru_cache(maxsize=32)
def build_h2_first_order(params: IonParams, dim: int) -> SpinBosonOperator:
    """build_h2_exact with cos -> 1 and sin -> argument, constants dropped"""
    _require_resonance(params, "build_h2_first_order")
    dim = InputValidator.validate_dim(dim)
    d = derive(params)
    nu, eta, omega, eps = params.nu, params.eta, params.omega_rabi, d.epsilon
    a, adag, n, eye = _mode_terms(dim)
    linear = 1j * (nu * eps + 0.5 * eta * nu) * (a - adag)
    rotated = 2j * omega * eps * (a + adag)
    return SpinBosonOperator.from_spin_terms(
        nu * n, omega * eye, linear + rotated, linear - rotated, hermitian=True
    )


@lru_cache(maxsize=32)
def build_h2_conjugated(params: IonParams, dim: int) -> SpinBosonOperator:
    """T2^dagger H1 T2 by explicit matrix conjugation"""
    from .transforms import build_t2

    t2 = build_t2(params, dim)
    return conjugate(t2.dag(), build_h1(params, dim))


@lru_cache(maxsize=32)
def build_h_jcm(params: IonParams, dim: int) -> SpinBosonOperator:
    """nu n + Omega sigma_z + i lambda(sigma_+ a - a^dagger sigma_-)"""
    _require_resonance(params, "build_h_jcm")
    dim = InputValidator.validate_dim(dim)
    lam = derive(params).lambda_eff
    a, adag, n, eye = _mode_terms(dim)
    return SpinBosonOperator.from_spin_terms(
        params.nu * n, params.omega_rabi * eye, -1j * lam * adag, 1j * lam * a, hermitian=True
    )


def ladder_quadrature(dim: int):
    """X = a + a^dagger as a Hermitian ModeOperator"""
    a, adag, _ = ladder(dim)
    return type(a)(a.matrix + adag.matrix, hermitian=True)


def operator_coefficients(h: SpinBosonOperator, guard: int) -> Dict[str, complex]:
    """
    Hilbert-Schmidt coefficients of H on {a sigma_-, a sigma_+, a^dagger sigma_-, a^dagger sigma_+}.

    Computed on the guarded subspace. a and a^dagger occupy different
    off-diagonals, so each coefficient is an independent projection of
    the sigma_- (g, e) or sigma_+ (e, g) block.
    """
    dim = h.mode_dim
    a = ladder(dim)[0].matrix
    adag = a.conj().T
    cut = dim - InputValidator.validate_guard(guard, dim)
    blocks = {"sigma_minus": h.block("g", "e"), "sigma_plus": h.block("e", "g")}
    coefficients = {}
    for mode_name, mode_op in (("a", a), ("adag", adag)):
        basis = mode_op[:cut, :cut]
        weight = np.vdot(basis, basis)
        for spin_name, block in blocks.items():
            coefficients[f"{mode_name}_{spin_name}"] = complex(np.vdot(basis, block[:cut, :cut]) / weight)
    return {key: coefficients[key] for key in COUPLING_TERMS}


def h2_sign_audit(params: IonParams, dim: int, guard: int) -> Dict[str, float]:
    """
    Compare the term-by-term Hamiltonian with both conjugation orders of T2.

    Returns guarded residual norms (modulo identity) against T2 H1 T2^dagger
    and T2^dagger H1 T2, and the constant offset of the matching order.
    """
    from .transforms import build_t2

    printed = build_h2_exact(params, dim)
    h1 = build_h1(params, dim)
    t2 = build_t2(params, dim)
    forward, _ = guarded_distance_modulo_identity(printed, conjugate(t2, h1), guard)
    backward, shift = guarded_distance_modulo_identity(printed, conjugate(t2.dag(), h1), guard)
    if forward > backward:
        logger.warning(
            f"Term-by-term H2 matches T2^dagger H1 T2 (residual {backward:.3e}), "
            f"not T2 H1 T2^dagger (residual {forward:.3e})"
        )
    logger.debug(f"H2 constant offset against numerical conjugation: {shift:.6e}")
    return {"t2_h1_t2dag": forward, "t2dag_h1_t2": backward, "constant_offset": shift}


def jcm_residual(params: IonParams, dim: int, guard: int) -> float:
    """||P(H2_exact - H_JCM - c I)P|| with c fitted"""
    residual, _ = guarded_distance_modulo_identity(build_h2_exact(params, dim), build_h_jcm(params, dim), guard)
    return residual
