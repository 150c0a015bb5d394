from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class IonParams:
    """
    Physical inputs of the ion-laser Hamiltonian.

    Frequencies are in units of the trap frequency when nu = 1.

    Attributes:
        nu (float): Vibrational angular frequency
        omega_rabi (float): Laser intensity (Rabi frequency)
        eta (float): Lamb-Dicke parameter
        delta (float): Detuning of the laser from the ionic transition

    Example:
        >>> params = IonParams(omega_rabi=2.0, eta=0.3)
    """
    omega_rabi: float
    eta: float
    nu: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        """Validate types and ranges after initialization"""
        for name in ("omega_rabi", "eta", "nu", "delta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"{name} must be numeric, not {type(value)}")
            object.__setattr__(self, name, float(value))
        if self.nu <= 0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if self.omega_rabi < 0:
            raise ValueError(f"omega_rabi must be >= 0, got {self.omega_rabi}")
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")

    @property
    def resonant(self) -> bool:
        return self.delta == 0.0


@dataclass(frozen=True)
class DerivedParams:
    """
    Quantities fixed by the small-rotation step.

    Attributes:
        epsilon (float): Rotation amplitude that cancels the counter-rotating terms
        lambda_eff (float): Effective Jaynes-Cummings coupling
        delta_jcm (float): Omega - nu/2
        beta_minus (complex): Displacement amplitude i(eta/2 - epsilon)
        lambda_linearized (float): Coupling eta*nu/2 of the linearized Hamiltonian
        epsilon_abs_warning (bool): |epsilon| exceeds the small-rotation threshold
    """
    nu: float
    omega_rabi: float
    epsilon: float
    lambda_eff: float
    delta_jcm: float
    beta_minus: complex
    lambda_linearized: float
    epsilon_abs_warning: bool

    def alpha(self, n):
        """sqrt(Delta^2 + lambda^2 n), elementwise for array n"""
        n = np.asarray(n, dtype=float)
        if np.any(n < 0):
            raise ValueError("alpha(n) is defined for n >= 0")
        return np.sqrt(self.delta_jcm ** 2 + self.lambda_eff ** 2 * n)
