"""
Time evolution on the spin x mode space.

Exact evolution diagonalizes a Hermitian Hamiltonian once (cached on the
operator) and reuses the spectrum for every time. The analytic pipeline
applies T^dagger U_JCM T with the closed-form composite transform and the
blockwise Jaynes-Cummings propagator. Neither path renormalizes: the norm
is a diagnostic.
"""

import logging
from typing import Sequence, Tuple, Union
import numpy as np
from ..exceptions import TruncationError, UnsupportedDetuningError
from ..models.operators import SpinBosonOperator, SpinBosonState
from ..models.params import DerivedParams, IonParams
from ..models.results import PropagationResult
from ..utils.config import Config
from ..utils.validators import InputValidator
from .fock import DEFAULT_GUARD, ladder
from .hamiltonians import build_h_full, derive
from .spin_boson import spin_tail_mass
from .transforms import build_t

logger = logging.getLogger(__name__)


def _hermitian(h: SpinBosonOperator) -> SpinBosonOperator:
    if h.hermitian:
        return h
    InputValidator.validate_hermitian(h.matrix, Config.tolerance("hermitian"))
    return type(h)(h.matrix, hermitian=True)


def exact_propagator(h: SpinBosonOperator, t: float) -> SpinBosonOperator:
    """U(t) = V exp(-i L t) V^dagger from the cached eigendecomposition of H"""
    h = _hermitian(h)
    eig_val, eig_vec = h.spectrum
    return type(h)(np.einsum('ij,j,kj->ik', eig_vec, np.exp(-1j * eig_val * t), eig_vec.conj()))


def propagate(h: SpinBosonOperator, psi: SpinBosonState, times: Sequence[float]) -> np.ndarray:
    """Rows exp(-i H t) psi for each t, without forming U(t)"""
    h = _hermitian(h)
    InputValidator.validate_same_dim(h, psi)
    eig_val, eig_vec = h.spectrum
    weights = eig_vec.conj().T @ psi.amplitudes
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), eig_val))
    return (phases * weights) @ eig_vec.T


def sinc_alpha(n: Union[int, np.ndarray], d: DerivedParams, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    (cos alpha_n t, sin(alpha_n t)/alpha_n), elementwise in n.

    np.sinc carries the alpha_n = 0 limit (1, t).
    """
    alpha = d.alpha(n)
    return np.cos(alpha * t), t * np.sinc(alpha * t / np.pi)


def jcm_propagator(d: DerivedParams, t: float, dim: int) -> SpinBosonOperator:
    """
    Jaynes-Cummings propagator assembled from diagonal functions of n.

        e^{-it(nu n + nu sigma_z/2)} (U11 |e><e| + U12 sigma_+ + U21 sigma_- + U22 |g><g|)

    U11 = cos a_{n+1}t - i Delta s_{n+1},  U12 = lambda a s_n,
    U21 = -lambda a^dagger s_{n+1},        U22 = cos a_n t + i Delta s_n,
    with s_k = sin(a_k t)/a_k. Only the top manifold, whose partner level
    lies outside the truncation, differs from the exact truncated dynamics.
    """
    dim = InputValidator.validate_dim(dim)
    levels = np.arange(dim)
    a = ladder(dim)[0].matrix
    cos_n, sin_n = sinc_alpha(levels, d, t)
    cos_up, sin_up = sinc_alpha(levels + 1, d, t)
    lam, delta = d.lambda_eff, d.delta_jcm

    phase_e = np.exp(-1j * t * (d.nu * levels + 0.5 * d.nu))[:, None]
    phase_g = np.exp(-1j * t * (d.nu * levels - 0.5 * d.nu))[:, None]
    ee = phase_e * np.diag(cos_up - 1j * delta * sin_up)
    eg = phase_e * (lam * a * sin_n[None, :])
    ge = phase_g * (-lam * a.conj().T * sin_up[None, :])
    gg = phase_g * np.diag(cos_n + 1j * delta * sin_n)
    return SpinBosonOperator.from_blocks(ee, eg, ge, gg)


def _require_resonance(params: IonParams) -> None:
    if not params.resonant:
        raise UnsupportedDetuningError(
            f"analytic evolution assumes resonance (delta = 0), got delta = {params.delta}"
        )


def evolve_analytic(psi0: SpinBosonState, t: float, params: IonParams, dim: int) -> SpinBosonState:
    """T^dagger U_JCM(t) T psi0 with the closed-form composite transform"""
    _require_resonance(params)
    transform = build_t(params, dim).t
    u = jcm_propagator(derive(params), t, dim)
    return transform.dag() @ (u @ (transform @ psi0))


def evolve_analytic_trajectory(psi0: SpinBosonState, times: Sequence[float], params: IonParams,
                               dim: int, guard: int = DEFAULT_GUARD) -> PropagationResult:
    states = [evolve_analytic(psi0, t, params, dim) for t in times]
    return _result(times, states, guard)


def _check_tail(state: SpinBosonState, guard: int, limit: float, time: float = None) -> float:
    tail = spin_tail_mass(state, guard)
    if tail > limit:
        where = "initial state" if time is None else f"t = {time:g}"
        raise TruncationError(
            f"guard-band population {tail:.3e} exceeds {limit:.0e} at {where} (N={state.mode_dim})",
            time=time,
            tail=tail,
        )
    return tail


def evolve_exact(psi0: SpinBosonState, t: float, params: IonParams, dim: int,
                 guard: int = DEFAULT_GUARD) -> SpinBosonState:
    """exp(-i H_full t) psi0"""
    return evolve_exact_trajectory(psi0, [t], params, dim, guard).states[0]


def evolve_exact_trajectory(psi0: SpinBosonState, times: Sequence[float], params: IonParams,
                            dim: int, guard: int = DEFAULT_GUARD) -> PropagationResult:
    """
    Exact evolution under the full Hamiltonian at every sample time.

    Raises TruncationError naming the first time whose guard-band
    population exceeds the trajectory tolerance.
    """
    h = build_h_full(params, dim)
    InputValidator.validate_same_dim(h, psi0)
    _check_tail(psi0, guard, Config.tolerance("tail_initial"))
    limit = Config.tolerance("tail_trajectory")
    rows = propagate(h, psi0, times)
    states = []
    for t, amplitudes in zip(times, rows):
        state = SpinBosonState(amplitudes)
        _check_tail(state, guard, limit, time=float(t))
        states.append(state)
    result = _result(times, states, guard)
    logger.debug(f"Exact trajectory: {len(times)} samples, max norm drift {result.max_norm_drift:.2e}")
    return result


def _result(times: Sequence[float], states, guard: int) -> PropagationResult:
    return PropagationResult(
        times=np.asarray(times, dtype=float),
        states=list(states),
        norms=np.array([s.norm_squared() for s in states]),
        tail=np.array([spin_tail_mass(s, guard) for s in states]),
    )


def fidelity(s1: SpinBosonState, s2: SpinBosonState) -> float:
    """|<s1|s2>|^2 of the renormalized states"""
    InputValidator.validate_same_dim(s1, s2)
    overlap = s1.normalize().inner(s2.normalize())
    return float(min(1.0, abs(overlap) ** 2))


def expectation(op: SpinBosonOperator, state: SpinBosonState) -> complex:
    """<psi|O|psi> / <psi|psi>"""
    InputValidator.validate_same_dim(op, state)
    return complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes) / state.norm_squared())


def spin_population(state: SpinBosonState, spin: str = "e") -> float:
    """P(spin) of the renormalized state"""
    block = state.spin_block(spin)
    return float(np.vdot(block, block).real / state.norm_squared())


def mean_phonon_number(state: SpinBosonState) -> float:
    """<n> summed over both spin branches"""
    levels = np.arange(state.mode_dim)
    weight = sum(np.abs(state.spin_block(s)) ** 2 for s in ("e", "g"))
    return float(np.dot(levels, weight) / state.norm_squared())
