from dataclasses import dataclass, field
from typing import List, Optional
import numpy as np
from .operators import ModeState, SpinBosonOperator, SpinBosonState


@dataclass(frozen=True)
class TransformSet:
    """Unitaries of the transformation chain for one (params, dim)."""
    t1: SpinBosonOperator
    t2: SpinBosonOperator
    t: SpinBosonOperator
    product: SpinBosonOperator
    beta: complex
    beta_minus: complex
    epsilon: float
    product_discrepancy: float


@dataclass(frozen=True)
class PropagationResult:
    """
    State trajectory with per-sample diagnostics.

    Attributes:
        times (np.ndarray): Sample times in units of 1/nu
        states (List[SpinBosonState]): State at each sample
        norms (np.ndarray): Squared norm at each sample
        tail (np.ndarray): Guard-band population at each sample
    """
    times: np.ndarray
    states: List[SpinBosonState]
    norms: np.ndarray
    tail: np.ndarray

    def __post_init__(self):
        if len(self.states) != len(self.times):
            raise ValueError(f"{len(self.states)} states for {len(self.times)} times")

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0))) if len(self.norms) else 0.0


@dataclass(frozen=True)
class QubitAmplitudes:
    """
    Vibrational qubit c0|0> + c1|1>.

    Attributes:
        c0, c1 (complex): Normalized amplitudes
        norm_const (float): Normalization constant of the unnormalized amplitudes
        time (float): Interaction time
        provenance (str): 'closed-form' or 'pipeline'
        leakage (float): Population outside span{|0>, |1>}
    """
    c0: complex
    c1: complex
    norm_const: float
    time: float
    provenance: str
    leakage: float = 0.0

    def __post_init__(self):
        if self.provenance not in ("closed-form", "pipeline"):
            raise ValueError(f"provenance must be 'closed-form' or 'pipeline', not {self.provenance!r}")

    @property
    def populations(self):
        return abs(self.c0) ** 2, abs(self.c1) ** 2


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of an ideal projective measurement of the ion's spin."""
    outcome: str
    probability: float
    collapsed: ModeState
    seed: Optional[int] = None

    def __post_init__(self):
        if self.outcome not in ("e", "g"):
            raise ValueError(f"outcome must be 'e' or 'g', not {self.outcome!r}")
        if not 0.0 <= self.probability <= 1.0 + 1e-12:
            raise ValueError(f"probability out of range: {self.probability}")


@dataclass
class ScanRecord:
    """One (eta, Omega/nu, t, N) point of a regime scan."""
    eta: float
    omega_ratio: float
    t: float
    dim: int
    epsilon: float
    lambda_eff: float
    lambda_linearized: float
    delta_jcm: float
    beta_minus_abs: float
    infidelity: float = float("nan")
    infidelity_check: float = float("nan")
    converged: bool = False
    leakage: float = float("nan")
    outcome: str = ""
    tail_exact: float = float("nan")
    epsilon_warning: bool = False
    error: str = ""


@dataclass(frozen=True)
class WignerGrid:
    """Wigner quasiprobability W(x + ip) sampled on a rectangular grid, x = Re alpha, p = Im alpha."""
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (len(self.p), len(self.x)):
            raise ValueError(f"values shape {self.values.shape} does not match grid ({len(self.p)}, {len(self.x)})")
