from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple
from .params import IonParams

MODES = ("evolve", "qubit", "cat", "scan", "validate")
FORMATS = ("csv", "json")
OUTCOMES = ("e", "g", "sample")


@dataclass(frozen=True)
class ScanConfig:
    """
    Grid and truncation settings of a regime scan.

    Attributes:
        etas (Tuple[float, ...]): Lamb-Dicke parameters
        omega_ratios (Tuple[float, ...]): Omega/nu values
        times (Tuple[float, ...]): Interaction times in units of 1/nu
        dim (int): Primary Fock truncation
        guard (int): Guard band width
        extra_levels (int): Truncation increment for the convergence rerun
        convergence_tol (float): Maximal infidelity change between the two truncations
        workers (int): Worker processes, 1 runs inline
        nu (float): Trap frequency
    """
    etas: Tuple[float, ...]
    omega_ratios: Tuple[float, ...]
    times: Tuple[float, ...]
    dim: int = 64
    guard: int = 8
    extra_levels: int = 32
    convergence_tol: float = 1e-6
    workers: int = 1
    nu: float = 1.0

    def __post_init__(self):
        for name in ("etas", "omega_ratios", "times"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise ValueError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        if not isinstance(self.dim, int) or not isinstance(self.guard, int):
            raise TypeError("dim and guard must be int")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration.

    Attributes:
        mode (str): One of evolve, qubit, cat, scan, validate
        params (IonParams): Physical parameters
        times (Tuple[float, ...]): Strictly increasing time grid in units of 1/nu
        dim (int): Fock truncation N
        guard (int): Guard band width
        seed (Optional[int]): Seed for sampled measurements
        output (Optional[Path]): Output path; defaults to Config.OUTPUT_DIR/<mode>.<format>
        format (str): csv or json
        outcome (str): Spin outcome for the qubit protocol, e, g or sample
        scan (Optional[ScanConfig]): Scan grids for scan mode
        wigner_half_width (float): Half width of the Wigner grid
        wigner_points (int): Points per Wigner axis
    """
    mode: str
    params: IonParams
    times: Tuple[float, ...]
    dim: int = 64
    guard: int = 8
    seed: Optional[int] = None
    output: Optional[Path] = None
    format: str = "csv"
    outcome: str = "e"
    scan: Optional[ScanConfig] = None
    wigner_half_width: float = 4.0
    wigner_points: int = 41

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, not {self.mode!r}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, not {self.format!r}")
        if self.outcome not in OUTCOMES:
            raise ValueError(f"outcome must be one of {OUTCOMES}, not {self.outcome!r}")
        if not isinstance(self.params, IonParams):
            raise TypeError(f"params must be IonParams, not {type(self.params)}")
