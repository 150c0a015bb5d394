import logging
from functools import lru_cache
import numpy as np
from ..models.operators import SpinBosonOperator
from ..models.params import IonParams
from ..models.results import TransformSet
from ..utils.validators import InputValidator
from .fock import displacement, hermitian_function
from .hamiltonians import derive, ladder_quadrature
from .spin_boson import guarded_distance, guarded_unitarity_error

logger = logging.getLogger(__name__)

PRODUCT_GUARD = 8


def t1_from_displacement(beta: complex, dim: int) -> SpinBosonOperator:
    """
    (1/sqrt 2)(1/2[D^dagger + D] I + 1/2[D^dagger - D] sigma_z - D^dagger sigma_- + D sigma_+)

    Blockwise this is (1/sqrt 2) [[D^dagger, D], [-D^dagger, D]].
    """
    d = displacement(beta, dim).matrix
    d_dag = d.conj().T
    scale = 1.0 / np.sqrt(2.0)
    return SpinBosonOperator.from_spin_terms(
        0.5 * scale * (d_dag + d),
        0.5 * scale * (d_dag - d),
        -scale * d_dag,
        scale * d,
    )


@lru_cache(maxsize=32)
def build_t1(params: IonParams, dim: int) -> SpinBosonOperator:
    """Linearizing transform with beta = i eta/2"""
    dim = InputValidator.validate_dim(dim)
    return t1_from_displacement(0.5j * params.eta, dim)


@lru_cache(maxsize=32)
def build_t2(params: IonParams, dim: int) -> SpinBosonOperator:
    """Small rotation exp(-i eps (a + a^dagger) sigma_x) from the spectrum of its generator"""
    dim = InputValidator.validate_dim(dim)
    eps = derive(params).epsilon
    coupling = eps * ladder_quadrature(dim).matrix
    zero = np.zeros((dim, dim), dtype=complex)
    generator = SpinBosonOperator.from_spin_terms(zero, zero, coupling, coupling, hermitian=True)
    return hermitian_function(generator, lambda x: np.exp(-1j * x))


@lru_cache(maxsize=32)
def build_t(params: IonParams, dim: int, guard: int = PRODUCT_GUARD) -> TransformSet:
    """
    Composite transform in both forms.

    `t` is the closed form (T1 structure with beta_minus) used by the analytic
    pipeline; `product` is T2 T1 and `product_discrepancy` the guarded norm
    of their difference.
    """
    dim = InputValidator.validate_dim(dim)
    d = derive(params)
    t1 = build_t1(params, dim)
    t2 = build_t2(params, dim)
    product = t2 @ t1
    closed = t1_from_displacement(d.beta_minus, dim)
    discrepancy = guarded_distance(product, closed, guard)
    logger.debug(f"||T2 T1 - T(beta_minus)|| = {discrepancy:.3e} (eta={params.eta}, N={dim})")
    return TransformSet(
        t1=t1,
        t2=t2,
        t=closed,
        product=product,
        beta=0.5j * params.eta,
        beta_minus=d.beta_minus,
        epsilon=d.epsilon,
        product_discrepancy=discrepancy,
    )


def unitarity_report(transforms: TransformSet, guard: int) -> dict:
    """Guarded unitarity error of every member"""
    return {
        name: guarded_unitarity_error(getattr(transforms, name), guard)
        for name in ("t1", "t2", "t", "product")
    }
