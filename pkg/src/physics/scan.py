import logging
import concurrent.futures
from typing import List, Tuple
from ..exceptions import NumericalContractError
from ..models.params import IonParams
from ..models.results import ScanRecord
from ..models.run_config import ScanConfig
from ..utils.config import Config
from .dynamics import evolve_analytic, evolve_exact, fidelity
from .hamiltonians import derive
from .protocols import conditional_measure, displace_to_qubit, likely_outcome, prepare_initial
from .spin_boson import spin_tail_mass

logger = logging.getLogger(__name__)


def _infidelities(params: IonParams, times, dim: int, guard: int) -> List[Tuple[float, object, str]]:
    """(1 - F, exact state, error) per time at one truncation"""
    psi0 = prepare_initial(params, dim, guard)
    rows = []
    for t in times:
        try:
            exact = evolve_exact(psi0, t, params, dim, guard)
            analytic = evolve_analytic(psi0, t, params, dim)
            rows.append((1.0 - fidelity(analytic, exact), exact, ""))
        except NumericalContractError as e:
            rows.append((float("nan"), None, f"{type(e).__name__}: {e}"))
    return rows


def scan_point(eta: float, omega_ratio: float, config: ScanConfig) -> List[ScanRecord]:
    """
    All times of one (eta, Omega/nu) pair, at N and N + extra_levels.

    Failures are recorded in the affected rows instead of raised.
    """
    params = IonParams(omega_rabi=omega_ratio * config.nu, eta=eta, nu=config.nu)
    d = derive(params)
    records = [
        ScanRecord(
            eta=eta,
            omega_ratio=omega_ratio,
            t=t,
            dim=config.dim,
            epsilon=d.epsilon,
            lambda_eff=d.lambda_eff,
            lambda_linearized=d.lambda_linearized,
            delta_jcm=d.delta_jcm,
            beta_minus_abs=abs(d.beta_minus),
            epsilon_warning=d.epsilon_abs_warning,
        )
        for t in config.times
    ]
    try:
        primary = _infidelities(params, config.times, config.dim, config.guard)
        check = _infidelities(params, config.times, config.dim + config.extra_levels, config.guard)
    except NumericalContractError as e:
        logger.warning(f"Scan point eta={eta}, Omega/nu={omega_ratio} failed: {e}")
        for record in records:
            record.error = f"{type(e).__name__}: {e}"
        return records

    for record, (infidelity, exact, error), (infidelity_check, _, error_check) in zip(records, primary, check):
        record.infidelity = infidelity
        record.infidelity_check = infidelity_check
        record.error = error or error_check
        if record.error:
            logger.warning(f"Scan point eta={eta}, Omega/nu={omega_ratio}, t={record.t}: {record.error}")
            continue
        record.converged = abs(infidelity - infidelity_check) < config.convergence_tol
        record.tail_exact = spin_tail_mass(exact, config.guard)
        record.outcome = likely_outcome(exact)
        _, qubit = displace_to_qubit(conditional_measure(exact, record.outcome), params, record.t)
        record.leakage = qubit.leakage
    return records


def regime_scan(config: ScanConfig) -> List[ScanRecord]:
    """
    Infidelity and leakage of the analytic solution over an (eta, Omega/nu, t) grid.

    Work units are (eta, Omega/nu) pairs; records come back in grid order
    (eta, then Omega/nu, then t) regardless of completion order.
    """
    pairs = [(eta, ratio) for eta in config.etas for ratio in config.omega_ratios]
    logger.info(f"Scanning {len(pairs)} parameter pairs x {len(config.times)} times "
                f"at N={config.dim}/{config.dim + config.extra_levels}")

    if config.workers == 1:
        chunks = [scan_point(eta, ratio, config) for eta, ratio in pairs]
    else:
        chunks = [None] * len(pairs)
        workers = min(config.workers, Config.MAX_WORKERS)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_index = {
                executor.submit(scan_point, eta, ratio, config): index
                for index, (eta, ratio) in enumerate(pairs)
            }
            for future in concurrent.futures.as_completed(future_to_index):
                chunks[future_to_index[future]] = future.result()

    records = [record for chunk in chunks for record in chunk]
    unconverged = sum(1 for r in records if not r.converged and not r.error)
    if unconverged:
        logger.warning(f"{unconverged} scan points did not converge within {config.convergence_tol:g}")
    return records
