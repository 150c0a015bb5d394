import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence
import numpy as np
from ..exceptions import (
    ValidationError, InvalidDimensionError, ContractViolationError,
)
from ..models.operators import hermitian_residual
from ..models.params import IonParams
from ..models.run_config import RunConfig, ScanConfig
from ..utils.config import Config

logger = logging.getLogger(__name__)

TIME_KEYS = ("times", "t_start", "t_stop", "t_points")

_TYPES = {
    "str": (str,),
    "float": (int, float),
    "int": (int,),
    "list": (list,),
}


class InputValidator:
    """Input validation utilities"""

    @staticmethod
    def validate_dim(dim: int, minimum: int = 2) -> int:
        """Validate a Fock truncation"""
        if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)):
            raise InvalidDimensionError(f"dimension must be an integer, got {type(dim)}")
        if dim < minimum:
            raise InvalidDimensionError(f"dimension must be >= {minimum}, got {dim}")
        return int(dim)

    @staticmethod
    def validate_guard(guard: int, dim: int) -> int:
        """Validate a guard band against its truncation"""
        if not 0 < guard < dim:
            raise InvalidDimensionError(f"guard must satisfy 0 < guard < {dim}, got {guard}")
        return int(guard)

    @staticmethod
    def validate_hermitian(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        """Reject matrices that are not self-adjoint within tol (default: the `hermitian` tolerance)"""
        if tol is None:
            tol = Config.tolerance("hermitian")
        residual = hermitian_residual(matrix)
        if residual > tol:
            raise ContractViolationError(f"operator is not Hermitian (residual {residual:.3e} > {tol:.0e})")
        return matrix

    @staticmethod
    def validate_same_dim(first, second) -> int:
        """Reject operands of different dimension"""
        if first.dim != second.dim:
            raise ContractViolationError(f"dimension mismatch: {first.dim} vs {second.dim}")
        return first.dim

    @staticmethod
    def validate_increasing(values: Sequence[float], name: str) -> tuple:
        """Grids must be non-empty and strictly increasing"""
        values = tuple(float(v) for v in values)
        if not values:
            raise ValidationError(f"'{name}' must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError(f"'{name}' must be strictly increasing")
        return values

    @staticmethod
    def validate_run_config(raw: Dict[str, Any]) -> RunConfig:
        """Validate a flat run-config mapping and apply defaults"""
        if not isinstance(raw, dict):
            raise ValidationError("run config must be a flat JSON object")

        schema = Config.schema()
        keys = schema["keys"]
        for key, value in raw.items():
            if key not in keys:
                raise ValidationError(f"unknown key '{key}'")
            _check_type(key, value, keys[key])
        for key in schema.get("required", []):
            if key not in raw:
                raise ValidationError(f"missing required key '{key}'")

        defaults = Config.defaults()
        param_defaults = dict(defaults["params"])
        if "regime" in raw:
            param_defaults.update(defaults["regimes"][raw["regime"]])

        nu = float(raw.get("nu", param_defaults["nu"]))
        eta = float(raw.get("eta", param_defaults["eta"]))
        omega = float(raw.get("omega", param_defaults["omega"]))
        delta = float(raw.get("delta", param_defaults["delta"]))
        _require(nu > 0, "nu", "must be > 0")
        _require(eta >= 0, "eta", "must be >= 0")
        _require(omega >= 0, "omega", "must be >= 0")
        params = IonParams(omega_rabi=omega, eta=eta, nu=nu, delta=delta)

        truncation = defaults["truncation"]
        dim = raw.get("dim", truncation["dim"])
        _require(dim >= truncation["min_dim"], "dim", f"must be >= {truncation['min_dim']}")
        guard = raw.get("guard", truncation["guard"])
        _require(4 <= guard <= dim / 4, "guard", f"must lie in [4, {dim // 4}]")

        times = _times(raw, defaults["times"])

        if "workers" in raw:
            _require(raw["workers"] >= 1, "workers", "must be >= 1")
        for key in ("etas", "omegas"):
            if key in raw:
                _require(len(raw[key]) > 0, key, "must not be empty")
                _require(all(isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0
                             for v in raw[key]), key, "entries must be numbers >= 0")

        if raw.get("outcome") == "sample" and "seed" not in raw:
            raise ValidationError("'seed' is required when 'outcome' is 'sample'")

        scan = None
        if raw["mode"] == "scan":
            scan_defaults = defaults["scan"]
            scan = ScanConfig(
                etas=tuple(raw.get("etas", scan_defaults["etas"])),
                omega_ratios=tuple(raw.get("omegas", scan_defaults["omegas"])),
                times=times if any(k in raw for k in TIME_KEYS) else tuple(scan_defaults["times"]),
                dim=dim,
                guard=guard,
                extra_levels=int(truncation["convergence_extra_levels"]),
                convergence_tol=float(truncation["convergence_tolerance"]),
                workers=int(raw.get("workers", scan_defaults["workers"])),
                nu=nu,
            )

        wigner = defaults["wigner"]
        half_width = float(raw.get("wigner_half_width", wigner["half_width"]))
        points = int(raw.get("wigner_points", wigner["points"]))
        _require(half_width > 0, "wigner_half_width", "must be > 0")
        _require(points >= 3, "wigner_points", "must be >= 3")

        config = RunConfig(
            mode=raw["mode"],
            params=params,
            times=times,
            dim=int(dim),
            guard=int(guard),
            seed=raw.get("seed"),
            output=Path(raw["output"]) if "output" in raw else None,
            format=raw.get("format", "csv"),
            outcome=raw.get("outcome", "e"),
            scan=scan,
            wigner_half_width=half_width,
            wigner_points=points,
        )
        logger.debug(f"Validated run config: {config}")
        return config


def _check_type(key: str, value: Any, rule: Dict[str, Any]) -> None:
    expected = _TYPES[rule["type"]]
    if isinstance(value, bool) or not isinstance(value, expected):
        raise ValidationError(f"'{key}' must be of type {rule['type']}, got {type(value).__name__}")
    if "choices" in rule and value not in rule["choices"]:
        raise ValidationError(f"'{key}' must be one of {rule['choices']}, got {value!r}")


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ValidationError(f"'{key}' {message}")


def _times(raw: Dict[str, Any], defaults: Dict[str, Any]) -> tuple:
    if "times" in raw:
        if any(k in raw for k in ("t_start", "t_stop", "t_points")):
            raise ValidationError("'times' cannot be combined with 't_start'/'t_stop'/'t_points'")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw["times"]):
            raise ValidationError("'times' entries must be numbers")
        times = InputValidator.validate_increasing(raw["times"], "times")
        _require(times[0] >= 0, "times", "must be >= 0")
        return times

    start = float(raw.get("t_start", defaults["t_start"]))
    stop = float(raw.get("t_stop", defaults["t_stop"]))
    points = int(raw.get("t_points", defaults["t_points"]))
    _require(start >= 0, "t_start", "must be >= 0")
    _require(points >= 1, "t_points", "must be >= 1")
    if points == 1:
        return (start,)
    _require(stop > start, "t_stop", "must be > t_start")
    return InputValidator.validate_increasing(np.linspace(start, stop, points), "times")
