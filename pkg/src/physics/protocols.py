"""
State-preparation protocols built on the analytic solution.

The ion starts in |e> with the mode in the coherent state |beta_minus>.
After an interaction time t the state is two displaced branches
entangled with the spin; measuring the spin and undoing the displacement
leaves a vibrational qubit in span{|0>, |1>}. At alpha_1 t = pi the |1>
components vanish and the state is a Schroedinger cat.
"""

import logging
from typing import Optional, Tuple
import numpy as np
from ..exceptions import DegenerateParametersError, ImpossibleOutcomeError, TruncationError, UnsupportedDetuningError
from ..models.operators import ModeState, SpinBosonState
from ..models.params import DerivedParams, IonParams
from ..models.results import MeasurementRecord, QubitAmplitudes
from ..utils.config import Config
from .fock import DEFAULT_GUARD, basis_state, displacement, tail_mass
from .hamiltonians import derive

logger = logging.getLogger(__name__)


def _require_resonance(params: IonParams) -> None:
    if not params.resonant:
        raise UnsupportedDetuningError(f"closed-form protocols assume delta = 0, got {params.delta}")


def branch_coefficients(d: DerivedParams, t: float) -> Tuple[complex, complex, complex]:
    """
    Scalars of the evolved state at time t.

    Returns (rotating, static, flip):
        rotating = e^{-i nu t/2}(cos a_1 t - i (Delta/a_1) sin a_1 t)
        static   = e^{i Omega t}
        flip     = (lambda/a_1) e^{-i nu t/2} sin a_1 t
    The excited branch carries (rotating + static)|0> + flip|1>, the ground
    branch (rotating - static)|0> - flip|1>.
    """
    alpha_1 = float(d.alpha(1))
    cos_1 = np.cos(alpha_1 * t)
    sin_1 = t * np.sinc(alpha_1 * t / np.pi)
    carrier = np.exp(-0.5j * d.nu * t)
    rotating = carrier * (cos_1 - 1j * d.delta_jcm * sin_1)
    static = np.exp(1j * d.omega_rabi * t)
    flip = d.lambda_eff * sin_1 * carrier
    return complex(rotating), complex(static), complex(flip)


def prepare_initial(params: IonParams, dim: int, guard: int = DEFAULT_GUARD) -> SpinBosonState:
    """|e> x |beta_minus>"""
    beta = derive(params).beta_minus
    mode = displacement(beta, dim) @ basis_state(0, dim)
    tail = tail_mass(mode, guard)
    if tail > Config.tolerance("tail_initial"):
        raise TruncationError(f"coherent state |{beta:.4g}> leaks {tail:.3e} into the guard band at N={dim}",
                              tail=tail)
    return SpinBosonState.from_branches(mode, np.zeros(dim, dtype=complex), normalized=True)


def evolved_closed_form(params: IonParams, t: float, dim: int) -> SpinBosonState:
    """
    1/2 D(beta_-)[(rotating + static)|0> + flip|1>] |e>
    + 1/2 D^dagger(beta_-)[(rotating - static)|0> - flip|1>] |g>
    """
    _require_resonance(params)
    d = derive(params)
    rotating, static, flip = branch_coefficients(d, t)
    d_beta = displacement(d.beta_minus, dim).matrix
    excited = np.zeros(dim, dtype=complex)
    ground = np.zeros(dim, dtype=complex)
    excited[:2] = (rotating + static, flip)
    ground[:2] = (rotating - static, -flip)
    return SpinBosonState.from_branches(
        0.5 * d_beta @ excited, 0.5 * d_beta.conj().T @ ground, normalized=True
    )


def conditional_measure(state: SpinBosonState, outcome: str, seed: Optional[int] = None) -> MeasurementRecord:
    """Project the spin onto |outcome> and return the renormalized mode state"""
    if outcome not in ("e", "g"):
        raise ValueError(f"outcome must be 'e' or 'g', not {outcome!r}")
    block = state.spin_block(outcome)
    probability = float(np.vdot(block, block).real / state.norm_squared())
    if probability < Config.tolerance("impossible_outcome"):
        raise ImpossibleOutcomeError(f"outcome '{outcome}' has probability {probability:.3e}")
    collapsed = ModeState(block).normalize()
    return MeasurementRecord(outcome=outcome, probability=min(probability, 1.0), collapsed=collapsed, seed=seed)


def sample_measurement(state: SpinBosonState, seed: int) -> MeasurementRecord:
    """Draw the spin outcome with numpy's default generator"""
    rng = np.random.default_rng(seed)
    p_excited = float(np.vdot(state.spin_block("e"), state.spin_block("e")).real / state.norm_squared())
    outcome = "e" if rng.random() < p_excited else "g"
    logger.debug(f"Sampled outcome '{outcome}' (P(e) = {p_excited:.6f}, seed {seed})")
    return conditional_measure(state, outcome, seed=seed)


def likely_outcome(state: SpinBosonState) -> str:
    """More probable spin outcome; 'e' on ties"""
    weights = [np.vdot(state.spin_block(s), state.spin_block(s)).real for s in ("e", "g")]
    return "e" if weights[0] >= weights[1] else "g"


def displace_to_qubit(rec: MeasurementRecord, params: IonParams,
                      time: float = float("nan")) -> Tuple[ModeState, QubitAmplitudes]:
    """
    Undo the branch displacement: D(-beta_-) after 'e', D(beta_-) after 'g'.

    The returned amplitudes are renormalized on span{|0>, |1>}; the
    population outside that span is reported as leakage.
    """
    beta = derive(params).beta_minus
    shift = -beta if rec.outcome == "e" else beta
    displaced = displacement(shift, rec.collapsed.dim) @ rec.collapsed
    c0, c1 = displaced.amplitudes[:2]
    in_span = abs(c0) ** 2 + abs(c1) ** 2
    leakage = max(0.0, displaced.norm_squared() - in_span)
    norm_const = float(np.sqrt(in_span))
    return displaced, QubitAmplitudes(
        c0=complex(c0 / norm_const),
        c1=complex(c1 / norm_const),
        norm_const=norm_const,
        time=float(time),
        provenance="pipeline",
        leakage=float(leakage),
    )


def qubit_closed_form(params: IonParams, t: float, outcome: str = "e") -> QubitAmplitudes:
    """Qubit amplitudes by scalar evaluation, no Fock space involved"""
    _require_resonance(params)
    rotating, static, flip = branch_coefficients(derive(params), t)
    if outcome == "e":
        c0, c1 = rotating + static, flip
    elif outcome == "g":
        c0, c1 = rotating - static, -flip
    else:
        raise ValueError(f"outcome must be 'e' or 'g', not {outcome!r}")
    norm_sq = abs(c0) ** 2 + abs(c1) ** 2
    # branch probability is norm_sq / 4
    if norm_sq / 4.0 < Config.tolerance("impossible_outcome"):
        raise ImpossibleOutcomeError(f"outcome '{outcome}' has vanishing probability at t = {t:g}")
    norm_const = float(np.sqrt(norm_sq))
    return QubitAmplitudes(c0=c0 / norm_const, c1=c1 / norm_const, norm_const=norm_const,
                           time=float(t), provenance="closed-form")


def cat_time(params: IonParams) -> float:
    """pi / alpha_1"""
    alpha_1 = float(derive(params).alpha(1))
    if alpha_1 == 0.0:
        raise DegenerateParametersError("alpha_1 = 0 (lambda = Delta = 0): no cat time exists")
    return float(np.pi / alpha_1)


def cat_state(params: IonParams, dim: int) -> Tuple[SpinBosonState, float]:
    """
    State at alpha_1 t = pi:

        1/2 [(A - X)|beta_-> |e> - (A + X)|-beta_-> |g>],  A = e^{i Omega t}, X = e^{-i nu t/2}
    """
    _require_resonance(params)
    t_cat = cat_time(params)
    d = derive(params)
    static = np.exp(1j * d.omega_rabi * t_cat)
    carrier = np.exp(-0.5j * d.nu * t_cat)
    vacuum = basis_state(0, dim)
    plus = (displacement(d.beta_minus, dim) @ vacuum).amplitudes
    minus = (displacement(-d.beta_minus, dim) @ vacuum).amplitudes
    state = SpinBosonState.from_branches(0.5 * (static - carrier) * plus, -0.5 * (static + carrier) * minus)
    logger.debug(f"Cat state at t = {t_cat:.6f}, norm^2 = {state.norm_squared():.15f}")
    return state.with_amplitudes(state.amplitudes, normalized=True), t_cat


def odd_cat(state: SpinBosonState, t_cat: float, params: IonParams) -> ModeState:
    """
    Mode state after projecting the cat's spin onto
    ((A + X)^* |e> + (A - X)^* |g>)/2, proportional to |beta_-> - |-beta_->.
    """
    d = derive(params)
    static = np.exp(1j * d.omega_rabi * t_cat)
    carrier = np.exp(-0.5j * d.nu * t_cat)
    motion = 0.5 * (static + carrier) * state.spin_block("e") + 0.5 * (static - carrier) * state.spin_block("g")
    weight = float(np.vdot(motion, motion).real)
    if weight < Config.tolerance("impossible_outcome"):
        raise ImpossibleOutcomeError(f"odd-cat projection has probability {weight:.3e}")
    return ModeState(motion).normalize()
