import pytest
from src.models.params import IonParams
from src.utils.config import Config


@pytest.fixture
def reference_params():
    """eta = 0.3, Omega = 2 nu: epsilon = -0.03"""
    return IonParams(omega_rabi=2.0, eta=0.3)


@pytest.fixture
def setup_test_env(tmp_path, monkeypatch):
    """Redirect output and log directories into tmp_path"""
    out_dir = tmp_path / "data" / "out"
    log_dir = tmp_path / "data" / "logs"
    monkeypatch.setattr(Config, "OUTPUT_DIR", out_dir)
    monkeypatch.setattr(Config, "LOG_DIR", log_dir)
    Config.ensure_dirs()
    return {"out": out_dir, "logs": log_dir, "root": tmp_path}
