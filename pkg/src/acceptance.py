"""
Acceptance suite run by the `validate` mode.

Each criterion is a function returning a CriterionResult; the suite runs
them in order and never stops early, so one report lists every failure.
"""

import logging
from dataclasses import dataclass, asdict
from typing import Callable, Dict, List
import numpy as np
from .exceptions import NumericalContractError
from .models.params import IonParams
from .models.run_config import ScanConfig
from .physics.dynamics import (
    evolve_analytic, evolve_exact, exact_propagator, fidelity, jcm_propagator, spin_population,
)
from .physics.hamiltonians import (
    build_h1, build_h2_first_order, build_h_full, build_h_jcm, derive, h2_sign_audit, operator_coefficients,
)
from .physics.protocols import (
    cat_state, conditional_measure, displace_to_qubit, evolved_closed_form, prepare_initial,
    qubit_closed_form, sample_measurement,
)
from .physics.scan import regime_scan
from .physics.spin_boson import conjugate, guarded_distance
from .physics.transforms import build_t1
from .utils.config import Config
from .utils.exporters import ResultExporter

logger = logging.getLogger(__name__)

REFERENCE = IonParams(omega_rabi=2.0, eta=0.3)
CHECK_TIMES = (1.0, 5.0, 10.0)


@dataclass
class CriterionResult:
    criterion: int
    description: str
    value: float
    threshold: float
    passed: bool
    params: IonParams
    h2_constant: float = float("nan")
    h2_order: str = ""

    def row(self) -> Dict[str, object]:
        d = derive(self.params)
        row = {k: v for k, v in asdict(self).items() if k != "params"}
        row.update(epsilon=d.epsilon, **{"lambda": d.lambda_eff}, lambda_linearized=d.lambda_linearized,
                   delta_jcm=d.delta_jcm)
        return row


def epsilon_reproduction(params: IonParams) -> CriterionResult:
    value = abs(derive(REFERENCE).epsilon - (-0.03))
    return CriterionResult(1, "epsilon = -0.03 at eta = 0.3, Omega/nu = 2", value, 1e-15, value <= 1e-15, REFERENCE)


def counter_rotating_cancellation(params: IonParams) -> CriterionResult:
    coefficients = operator_coefficients(build_h2_first_order(params, 64), guard=8)
    lam = derive(params).lambda_eff
    value = max(
        abs(coefficients["a_sigma_minus"]),
        abs(coefficients["adag_sigma_plus"]),
        abs(coefficients["a_sigma_plus"] - 1j * lam),
    )
    return CriterionResult(2, "first-order H2: a sigma_-, a^dag sigma_+ vanish, a sigma_+ = i lambda",
                           value, 1e-10, value <= 1e-10, params)


def conjugation_identities(params: IonParams) -> CriterionResult:
    checked = IonParams(omega_rabi=2.0, eta=0.2)
    dim, guard = 96, 8
    h1 = build_h1(checked, dim)
    linearized = guarded_distance(conjugate(build_t1(checked, dim), build_h_full(checked, dim)), h1, guard)
    audit = h2_sign_audit(checked, dim, guard)
    rotated = audit["t2dag_h1_t2"]
    order = "t2dag_h1_t2" if rotated <= audit["t2_h1_t2dag"] else "t2_h1_t2dag"
    logger.info(f"H2 constant offset against T2^dagger H1 T2: {audit['constant_offset']:.6e}")
    value = max(linearized, rotated)
    return CriterionResult(3, "T1 H T1^dag = H1 and T2^dag H1 T2 = H2 mod identity (N = 96)",
                           value, 1e-8, value <= 1e-8, checked,
                           h2_constant=audit["constant_offset"], h2_order=order)


def propagator_equivalence(params: IonParams) -> CriterionResult:
    dim, guard = 64, 8
    h = build_h_jcm(params, dim)
    d = derive(params)
    value = max(
        guarded_distance(jcm_propagator(d, t, dim), exact_propagator(h, t), guard) for t in CHECK_TIMES
    )
    return CriterionResult(4, "blockwise JCM propagator = spectral exponential, nu t in {1, 5, 10}",
                           value, 1e-9, value <= 1e-9, params)


def closed_form_consistency(params: IonParams) -> CriterionResult:
    dim = 64
    psi0 = prepare_initial(params, dim)
    value = max(
        1.0 - fidelity(evolved_closed_form(params, t, dim), evolve_analytic(psi0, t, params, dim))
        for t in CHECK_TIMES
    )
    return CriterionResult(5, "closed-form evolved state = T^dag U T pipeline, nu t in {1, 5, 10}",
                           value, 1e-8, value <= 1e-8, params)


@dataclass
class ScalingSweep:
    """1 - F(analytic, exact) over one regime's eta grid at fixed Omega/nu and t"""
    regime: str
    etas: np.ndarray
    infidelity: np.ndarray
    bounds: np.ndarray
    slope: float
    converged: bool

    @property
    def monotone(self) -> bool:
        order = np.argsort(self.etas)
        return bool(np.all(np.diff(self.infidelity[order]) > 0))

    @property
    def bounded(self) -> bool:
        return bool(np.all(self.infidelity <= self.bounds))

    @property
    def worst_ratio(self) -> float:
        """Largest infidelity relative to its frozen bound"""
        return float(np.max(self.infidelity / self.bounds))


def scaling_sweep(regime: str) -> ScalingSweep:
    """Run the configured scan of one regime and fit the log-log slope"""
    scaling = Config.defaults()["scaling"]
    setting = scaling["regimes"][regime]
    truncation = Config.defaults()["truncation"]
    scan = ScanConfig(
        etas=tuple(float(eta) for eta in setting["etas"]),
        omega_ratios=(float(setting["omega"]),),
        times=(float(scaling["time"]),),
        dim=int(truncation["dim"]),
        guard=int(truncation["guard"]),
        extra_levels=int(truncation["convergence_extra_levels"]),
        convergence_tol=float(truncation["convergence_tolerance"]),
    )
    records = regime_scan(scan)
    etas = np.array([r.eta for r in records])
    infidelity = np.array([r.infidelity for r in records])
    converged = all(r.converged and not r.error for r in records)
    slope = float(np.polyfit(np.log(etas), np.log(infidelity), 1)[0]) if converged else float("nan")
    sweep = ScalingSweep(regime, etas, infidelity, np.array(setting["infidelity_bounds"], dtype=float),
                         slope, converged)
    logger.info(f"Regime {regime}: 1 - F = {infidelity.tolist()} at eta = {etas.tolist()}, "
                f"log-log slope {slope:.3f}")
    return sweep


def approximation_scaling(params: IonParams) -> CriterionResult:
    scaling = Config.defaults()["scaling"]
    low, high = scaling["slope_band"]
    sweeps = [scaling_sweep(regime) for regime in scaling["regimes"]]
    reference = scaling["regimes"]["c"]
    checked = IonParams(omega_rabi=float(reference["omega"]), eta=float(reference["etas"][0]))
    if not all(s.converged for s in sweeps):
        failed = [s.regime for s in sweeps if not s.converged]
        return CriterionResult(6, f"infidelity scaling: regimes {failed} failed or did not converge",
                               float("nan"), 1.0, False, checked)
    passed = all(s.monotone and s.bounded and low <= s.slope <= high for s in sweeps)
    for s in sweeps:
        if not s.bounded:
            logger.error(f"Regime {s.regime}: infidelity {s.infidelity.tolist()} exceeds frozen bounds "
                         f"{s.bounds.tolist()}")
    value = max(s.worst_ratio for s in sweeps)
    slopes = ", ".join(f"{s.regime}: {s.slope:.2f}" for s in sweeps)
    return CriterionResult(6, f"1 - F monotone in eta, slope in [{low}, {high}] ({slopes}), below frozen per-eta bounds",
                           value, 1.0, passed, checked)


def cat_checks(params: IonParams) -> CriterionResult:
    dim = 64
    state, t_cat = cat_state(params, dim)
    norm_error = abs(state.norm_squared() - 1.0)
    deficit = 1.0 - fidelity(state, evolved_closed_form(params, t_cat, dim))
    flip = abs(qubit_closed_form(params, t_cat).c1)
    passed = norm_error <= 1e-12 and deficit <= 1e-9 and flip <= 1e-10
    value = max(norm_error, deficit, flip)
    return CriterionResult(7, "cat state normalized, equals evolved state at pi/alpha_1, |1> amplitude vanishes",
                           value, 1e-9, passed, params)


def qubit_protocol(params: IonParams) -> CriterionResult:
    dim = 64
    psi0 = prepare_initial(params, dim)
    completeness, analytic_leakage = 0.0, 0.0
    for t in CHECK_TIMES:
        state = evolved_closed_form(params, t, dim)
        completeness = max(completeness, abs(spin_population(state, "e") + spin_population(state, "g") - 1.0))
        pipeline = evolve_analytic(psi0, t, params, dim)
        _, qubit = displace_to_qubit(conditional_measure(pipeline, "e"), params, t)
        analytic_leakage = max(analytic_leakage, qubit.leakage)

    exact_leakage = []
    for eta in (0.3, 0.15, 0.075):
        checked = IonParams(omega_rabi=params.omega_rabi, eta=eta, nu=params.nu)
        exact = evolve_exact(prepare_initial(checked, dim), 5.0, checked, dim)
        _, qubit = displace_to_qubit(conditional_measure(exact, "e"), checked, 5.0)
        exact_leakage.append(qubit.leakage)
    decreasing = all(b < a for a, b in zip(exact_leakage, exact_leakage[1:]))
    logger.info(f"Exact-pipeline qubit leakage at eta 0.3/0.15/0.075: {exact_leakage}")
    value = max(completeness, analytic_leakage)
    return CriterionResult(8, "P(e) + P(g) = 1, analytic leakage = 0, exact leakage decreasing in eta",
                           value, 1e-10, value <= 1e-10 and decreasing, params)


def determinism(params: IonParams, seed: int = 0) -> CriterionResult:
    scan = ScanConfig(etas=(params.eta,), omega_ratios=(params.omega_rabi / params.nu,), times=(1.0, 5.0),
                      nu=params.nu)
    rendered = [
        ResultExporter.render_csv([vars(r) for r in regime_scan(scan)], "scan") for _ in range(2)
    ]
    state = evolved_closed_form(params, 1.0, 64)
    outcomes = [sample_measurement(state, seed).outcome for _ in range(2)]
    identical = rendered[0] == rendered[1] and outcomes[0] == outcomes[1]
    return CriterionResult(9, "repeated runs with a fixed seed give byte-identical tables",
                           float(not identical), 0.0, identical, params)


CRITERIA: List[Callable[[IonParams], CriterionResult]] = [
    epsilon_reproduction,
    counter_rotating_cancellation,
    conjugation_identities,
    propagator_equivalence,
    closed_form_consistency,
    approximation_scaling,
    cat_checks,
    qubit_protocol,
    determinism,
]


def run_acceptance(params: IonParams = REFERENCE, seed: int = 0) -> List[CriterionResult]:
    """Evaluate every criterion; a criterion that raises is recorded as failed"""
    results = []
    for number, criterion in enumerate(CRITERIA, start=1):
        try:
            result = criterion(params, seed) if criterion is determinism else criterion(params)
        except NumericalContractError as e:
            logger.error(f"Criterion {number} raised {type(e).__name__}: {e}")
            result = CriterionResult(number, f"{criterion.__name__} raised {type(e).__name__}",
                                     float("nan"), float("nan"), False, params)
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"[{'PASS' if result.passed else 'FAIL'}] {number}. {result.description}: "
                          f"{result.value:.3e} (threshold {result.threshold:.0e})")
        results.append(result)
    return results
