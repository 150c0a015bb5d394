import logging
from dataclasses import asdict
from typing import Dict, Type
import numpy as np
from ..acceptance import run_acceptance
from ..exceptions import AcceptanceFailure, ImpossibleOutcomeError
from ..physics.dynamics import (
    evolve_analytic, evolve_analytic_trajectory, evolve_exact, evolve_exact_trajectory, fidelity,
    mean_phonon_number, spin_population,
)
from ..physics.fock import mean_number
from ..physics.phase_space import wigner, wigner_integral
from ..physics.protocols import (
    cat_state, conditional_measure, displace_to_qubit, evolved_closed_form, odd_cat, prepare_initial,
    qubit_closed_form, sample_measurement,
)
from ..physics.scan import regime_scan
from .base import ModeRunner, Tables

logger = logging.getLogger(__name__)

NAN = float("nan")


class EvolveRunner(ModeRunner):
    """Exact trajectory, with the analytic solution alongside when delta = 0"""

    primary_table = "evolve"

    def _run_impl(self) -> Tables:
        cfg = self.config
        derived = self.derived_columns(cfg.params)
        psi0 = prepare_initial(cfg.params, cfg.dim, cfg.guard)
        exact = evolve_exact_trajectory(psi0, cfg.times, cfg.params, cfg.dim, cfg.guard)
        analytic = None
        if cfg.params.resonant:
            analytic = evolve_analytic_trajectory(psi0, cfg.times, cfg.params, cfg.dim, cfg.guard)
        else:
            logger.warning(f"delta = {cfg.params.delta}: analytic columns left empty")

        rows = []
        for i, t in enumerate(exact.times):
            state = exact.states[i]
            rows.append({
                "t": float(t),
                "P_e": spin_population(state, "e"),
                "mean_n": mean_phonon_number(state),
                "norm": float(exact.norms[i]),
                "tail": float(exact.tail[i]),
                "P_e_analytic": spin_population(analytic.states[i], "e") if analytic else NAN,
                "infidelity": 1.0 - fidelity(analytic.states[i], state) if analytic else NAN,
                **derived,
            })
        return {"evolve": rows}


class QubitRunner(ModeRunner):
    """Measurement and displacement protocol at every time of the grid"""

    primary_table = "qubit"

    def _run_impl(self) -> Tables:
        cfg = self.config
        derived = self.derived_columns(cfg.params)
        psi0 = prepare_initial(cfg.params, cfg.dim, cfg.guard)
        rows = []
        for i, t in enumerate(cfg.times):
            state = evolved_closed_form(cfg.params, t, cfg.dim)
            row = {"t": t, "P_e": spin_population(state, "e"), **derived}
            try:
                if cfg.outcome == "sample":
                    outcome = sample_measurement(state, cfg.seed + i).outcome
                else:
                    outcome = cfg.outcome
                closed = qubit_closed_form(cfg.params, t, outcome)
                pipeline = evolve_analytic(psi0, t, cfg.params, cfg.dim)
                _, analytic = displace_to_qubit(conditional_measure(pipeline, outcome), cfg.params, t)
                exact = evolve_exact(psi0, t, cfg.params, cfg.dim, cfg.guard)
                _, oracle = displace_to_qubit(conditional_measure(exact, outcome), cfg.params, t)
            except ImpossibleOutcomeError as e:
                logger.warning(f"t = {t:g}: {e}")
                row.update(c0_sq=NAN, c1_sq=NAN, leakage=NAN, outcome="", leakage_exact=NAN)
            else:
                c0_sq, c1_sq = closed.populations
                row.update(c0_sq=c0_sq, c1_sq=c1_sq, leakage=analytic.leakage, outcome=outcome,
                           leakage_exact=oracle.leakage)
            rows.append(row)
        return {"qubit": rows}


class CatRunner(ModeRunner):
    """Cat-state amplitudes and the Wigner grid of its odd-cat projection"""

    primary_table = "cat_state"

    def _run_impl(self) -> Tables:
        cfg = self.config
        derived = self.derived_columns(cfg.params)
        state, t_cat = cat_state(cfg.params, cfg.dim)
        logger.info(f"Cat time t = pi/alpha_1 = {t_cat:.6f}")
        amplitude_rows = [
            {"spin": spin, "n": n, "re": float(c.real), "im": float(c.imag), "t_cat": t_cat, **derived}
            for spin in ("e", "g")
            for n, c in enumerate(state.spin_block(spin))
        ]
        motion = odd_cat(state, t_cat, cfg.params)
        logger.info(f"Odd cat <n> = {mean_number(motion):.6f}")
        grid = wigner(motion, cfg.wigner_half_width, cfg.wigner_points, cfg.guard)
        logger.info(f"Odd-cat Wigner: min {grid.values.min():.4f}, integral {wigner_integral(grid):.6f}")
        xx, pp = np.meshgrid(grid.x, grid.p)
        wigner_rows = [
            {"x": float(x), "p": float(p), "W": float(w), "t_cat": t_cat, **derived}
            for x, p, w in zip(xx.ravel(), pp.ravel(), grid.values.ravel())
        ]
        return {"cat_state": amplitude_rows, "cat_wigner": wigner_rows}


class ScanRunner(ModeRunner):
    """Regime scan against the exact propagator"""

    primary_table = "scan"

    def _run_impl(self) -> Tables:
        return {"scan": [asdict(record) for record in regime_scan(self.config.scan)]}


class ValidateRunner(ModeRunner):
    """Acceptance suite; raises AcceptanceFailure after the report is written"""

    primary_table = "validate"

    def _run_impl(self) -> Tables:
        seed = self.config.seed if self.config.seed is not None else 0
        return {"validate": [r.row() for r in run_acceptance(self.config.params, seed)]}

    def _after_export(self, tables: Tables) -> None:
        failed = [row["criterion"] for row in tables["validate"] if not row["passed"]]
        if failed:
            raise AcceptanceFailure(f"acceptance criteria failed: {failed}")


RUNNERS: Dict[str, Type[ModeRunner]] = {
    "evolve": EvolveRunner,
    "qubit": QubitRunner,
    "cat": CatRunner,
    "scan": ScanRunner,
    "validate": ValidateRunner,
}
