import numpy as np
import pytest
import yaml
from src.exceptions import ContractViolationError, InvalidDimensionError
from src.models.operators import ModeOperator, ModeState, SpinBosonOperator, SpinBosonState
from src.models.params import IonParams
from src.models.results import MeasurementRecord, QubitAmplitudes, WignerGrid
from src.models.run_config import RunConfig
from src.utils.config import Config
from tests.helpers import fock


def test_ion_params_creation():
    """Test creating an IonParams object"""
    params = IonParams(omega_rabi=2, eta=0.3)
    assert params.omega_rabi == 2.0
    assert isinstance(params.omega_rabi, float)
    assert params.nu == 1.0
    assert params.delta == 0.0
    assert params.resonant


def test_ion_params_validation():
    """Test parameter validation"""
    with pytest.raises(TypeError):
        IonParams(omega_rabi="2.0", eta=0.3)
    with pytest.raises(TypeError):
        IonParams(omega_rabi=2.0, eta=True)
    with pytest.raises(ValueError):
        IonParams(omega_rabi=2.0, eta=-0.1)
    with pytest.raises(ValueError):
        IonParams(omega_rabi=2.0, eta=0.3, nu=0.0)
    assert not IonParams(omega_rabi=2.0, eta=0.3, delta=0.1).resonant


def test_ion_params_are_hashable():
    """Equal parameters share caches"""
    assert hash(IonParams(2.0, 0.3)) == hash(IonParams(2, 0.3))


def test_operator_is_immutable():
    """Matrices are frozen after construction"""
    op = ModeOperator(np.eye(4))
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2.0


def test_operator_shape_checks():
    """Non-square, too small and odd spin-boson matrices are rejected"""
    with pytest.raises(ContractViolationError):
        ModeOperator(np.zeros((2, 3)))
    with pytest.raises(InvalidDimensionError):
        ModeOperator(np.zeros((1, 1)))
    with pytest.raises(InvalidDimensionError):
        SpinBosonOperator(np.eye(6)[:5, :5])


def test_hermitian_flag_is_checked():
    """A Hermitian flag on a non-Hermitian matrix is a contract violation"""
    matrix = np.zeros((4, 4))
    matrix[0, 1] = 1.0
    with pytest.raises(ContractViolationError):
        ModeOperator(matrix, hermitian=True)
    with pytest.raises(ContractViolationError):
        ModeOperator(matrix).spectrum


def test_spin_terms_layout():
    """sigma_plus sits in the (e, g) block"""
    dim = 4
    eye, zero = np.eye(dim), np.zeros((dim, dim))
    plus = SpinBosonOperator.from_spin_terms(zero, zero, zero, eye)
    assert np.allclose(plus.block("e", "g"), eye)
    assert np.allclose(plus.block("g", "e"), 0.0)
    z = SpinBosonOperator.from_spin_terms(zero, eye, zero, zero)
    assert np.allclose(np.diag(z.matrix), np.concatenate([np.ones(dim), -np.ones(dim)]))


def test_state_normalization():
    """normalize() and the normalized flag"""
    state = ModeState(np.array([3.0, 4.0]))
    assert np.allclose(state.normalize().amplitudes, [0.6, 0.8])
    with pytest.raises(ContractViolationError):
        ModeState(np.array([3.0, 4.0]), normalized=True)
    with pytest.raises(ContractViolationError):
        ModeState(np.zeros(4)).normalize()


def test_spin_boson_branches():
    """from_branches places |e> first"""
    state = SpinBosonState.from_branches(fock(1, 4), np.zeros(4), normalized=True)
    assert state.amplitudes[1] == 1.0
    assert np.allclose(state.spin_block("e"), fock(1, 4))
    assert np.allclose(state.spin_block("g"), 0.0)


def test_operator_application():
    """Operators compose with their own kind and act on matching states"""
    op = SpinBosonOperator(np.eye(8))
    state = SpinBosonState.from_branches(fock(0, 4), np.zeros(4))
    assert np.allclose((op @ state).amplitudes, state.amplitudes)
    with pytest.raises(ContractViolationError):
        op @ ModeOperator(np.eye(8))
    with pytest.raises(ContractViolationError):
        op @ SpinBosonState(np.eye(4)[0])


def test_result_validation():
    """Result records reject invalid labels"""
    with pytest.raises(ValueError):
        QubitAmplitudes(c0=1.0, c1=0.0, norm_const=1.0, time=0.0, provenance="guess")
    with pytest.raises(ValueError):
        MeasurementRecord(outcome="x", probability=0.5, collapsed=ModeState(fock(0, 4)))
    with pytest.raises(ValueError):
        WignerGrid(x=np.zeros(3), p=np.zeros(3), values=np.zeros((3, 4)))


def test_run_config_validation():
    """Mode, format and outcome are closed sets"""
    params = IonParams(omega_rabi=2.0, eta=0.3)
    RunConfig(mode="qubit", params=params, times=(0.0,))
    with pytest.raises(ValueError):
        RunConfig(mode="fit", params=params, times=(0.0,))
    with pytest.raises(ValueError):
        RunConfig(mode="qubit", params=params, times=(0.0,), format="xlsx")
    with pytest.raises(TypeError):
        RunConfig(mode="qubit", params={"eta": 0.3}, times=(0.0,))


def test_norm_tolerance_comes_from_defaults(tmp_path, monkeypatch):
    """The normalized flag is checked against the configured tolerance"""
    nearly = np.array([1.0, 1e-3])
    with pytest.raises(ContractViolationError):
        ModeState(nearly, normalized=True)

    defaults = Config.load_yaml(Config.DEFAULTS_FILE)
    defaults["tolerances"]["normalized"] = 1e-5
    loose = tmp_path / "defaults.yaml"
    loose.write_text(yaml.safe_dump(defaults), encoding="utf-8")
    monkeypatch.setattr(Config, "DEFAULTS_FILE", str(loose))
    assert ModeState(nearly, normalized=True).normalized
    with pytest.raises(ContractViolationError):
        SpinBosonState(np.concatenate([nearly, np.zeros(2)]), normalized=True)
