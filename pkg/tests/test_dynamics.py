import numpy as np
import pytest
from scipy.linalg import expm
from src.exceptions import ContractViolationError, TruncationError, UnsupportedDetuningError
from src.models.operators import SpinBosonOperator, SpinBosonState
from src.models.params import IonParams
from src.physics.dynamics import (
    evolve_analytic, evolve_analytic_trajectory, evolve_exact, evolve_exact_trajectory, exact_propagator,
    expectation, fidelity, jcm_propagator, mean_phonon_number, propagate, sinc_alpha, spin_population,
)
from src.physics.hamiltonians import build_h_full, build_h_jcm, derive
from src.physics.protocols import prepare_initial
from src.physics.spin_boson import guarded_distance
from tests.helpers import spin_fock


@pytest.fixture
def random_hamiltonian():
    """Small random Hermitian operator on N = 16"""
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    return SpinBosonOperator(0.1 * (raw + raw.conj().T), hermitian=True)


def test_exact_propagator_basics(random_hamiltonian):
    """U(0) = I, U U^dagger = I, U(t1) U(t2) = U(t1 + t2), agreement with expm"""
    h = random_hamiltonian
    assert np.allclose(exact_propagator(h, 0.0).matrix, np.eye(32), atol=1e-12)
    u = exact_propagator(h, 2.5).matrix
    assert np.max(np.abs(u @ u.conj().T - np.eye(32))) <= 1e-10
    combined = exact_propagator(h, 1.2).matrix @ exact_propagator(h, 0.7).matrix
    assert np.max(np.abs(combined - exact_propagator(h, 1.9).matrix)) <= 1e-9
    assert np.max(np.abs(u - expm(-2.5j * h.matrix))) <= 1e-9


def test_exact_propagator_rejects_non_hermitian():
    """A non-Hermitian generator is a contract violation"""
    matrix = np.zeros((8, 8), dtype=complex)
    matrix[0, 1] = 1.0
    with pytest.raises(ContractViolationError):
        exact_propagator(SpinBosonOperator(matrix), 1.0)


def test_propagate_matches_propagator(random_hamiltonian):
    """Vector propagation equals U(t) psi"""
    psi = spin_fock("e", 0, 16)
    rows = propagate(random_hamiltonian, psi, [0.0, 1.0, 3.0])
    for t, row in zip([0.0, 1.0, 3.0], rows):
        assert np.allclose(row, exact_propagator(random_hamiltonian, t).matrix @ psi.amplitudes, atol=1e-12)


def test_sinc_alpha_examples(reference_params):
    """alpha = 0 limit, the cat time, and t = 0"""
    resonant = derive(IonParams(omega_rabi=0.5, eta=0.0))
    cos_0, sin_0 = sinc_alpha(0, resonant, 3.0)
    assert cos_0 == pytest.approx(1.0)
    assert sin_0 == pytest.approx(3.0)

    d = derive(reference_params)
    t_cat = np.pi / float(d.alpha(1))
    cos_1, sin_1 = sinc_alpha(1, d, t_cat)
    assert cos_1 == pytest.approx(-1.0, abs=1e-12)
    assert sin_1 == pytest.approx(0.0, abs=1e-12)

    cos_t0, sin_t0 = sinc_alpha(np.arange(4), d, 0.0)
    assert np.allclose(cos_t0, 1.0)
    assert np.allclose(sin_t0, 0.0)


@pytest.mark.parametrize("t", [1.0, 5.0, 10.0])
def test_jcm_propagator_matches_spectral(reference_params, t):
    """Blockwise propagator = exp(-i H_JCM t) away from the top manifold"""
    dim = 64
    analytic = jcm_propagator(derive(reference_params), t, dim)
    exact = exact_propagator(build_h_jcm(reference_params, dim), t)
    assert guarded_distance(analytic, exact, guard=8) <= 1e-9


def test_jcm_propagator_identity_and_ground_phase(reference_params):
    """U(0) = I; |g,0> only picks up e^{i Omega t}"""
    d = derive(reference_params)
    assert np.allclose(jcm_propagator(d, 0.0, 16).matrix, np.eye(32), atol=1e-14)
    t = 2.7
    ground = spin_fock("g", 0, 16)
    evolved = jcm_propagator(d, t, 16) @ ground
    assert np.allclose(evolved.amplitudes, np.exp(2.0j * t) * ground.amplitudes, atol=1e-12)


def test_evolve_analytic_at_zero(reference_params):
    """t = 0 returns the initial state"""
    psi0 = prepare_initial(reference_params, 64)
    assert np.allclose(evolve_analytic(psi0, 0.0, reference_params, 64).amplitudes, psi0.amplitudes, atol=1e-9)


def test_evolve_analytic_norm():
    """No norm drift over nu t in [0, 20]"""
    params = IonParams(omega_rabi=2.0, eta=0.1)
    psi0 = prepare_initial(params, 96)
    result = evolve_analytic_trajectory(psi0, np.linspace(0.0, 20.0, 21), params, 96)
    assert result.max_norm_drift <= 1e-8


def test_evolve_analytic_rejects_detuning():
    """The analytic pipeline assumes resonance"""
    params = IonParams(omega_rabi=2.0, eta=0.3, delta=0.2)
    with pytest.raises(UnsupportedDetuningError):
        evolve_analytic(spin_fock("e", 0, 16), 1.0, params, 16)


def test_evolve_exact_without_drive():
    """Omega = 0 only changes phases"""
    params = IonParams(omega_rabi=0.0, eta=0.3)
    psi0 = prepare_initial(params, 32)
    for t in (1.0, 4.0):
        state = evolve_exact(psi0, t, params, 32)
        assert spin_population(state, "e") == pytest.approx(1.0)
        assert mean_phonon_number(state) == pytest.approx(mean_phonon_number(psi0))


def test_evolve_exact_rabi_oscillation():
    """eta = 0: |e,0> <-> |g,0> with P_e = cos^2(Omega t)"""
    params = IonParams(omega_rabi=2.0, eta=0.0)
    times = np.linspace(0.0, 3.0, 7)
    result = evolve_exact_trajectory(spin_fock("e", 0, 16), times, params, 16, guard=4)
    populations = [spin_population(s, "e") for s in result.states]
    assert np.allclose(populations, np.cos(2.0 * times) ** 2, atol=1e-10)
    assert result.max_norm_drift <= 1e-10


def test_evolve_exact_conserves_energy(reference_params):
    """<H_full> is constant along the trajectory"""
    dim = 64
    h = build_h_full(reference_params, dim)
    result = evolve_exact_trajectory(prepare_initial(reference_params, dim), [0.0, 2.0, 5.0, 10.0],
                                     reference_params, dim)
    energies = [expectation(h, s).real for s in result.states]
    assert np.max(np.abs(np.array(energies) - energies[0])) <= 1e-8
    assert result.max_norm_drift <= 1e-10


def test_evolve_exact_reports_truncation_time():
    """Guard-band population during the run names the offending time"""
    params = IonParams(omega_rabi=5.0, eta=2.0)
    with pytest.raises(TruncationError) as excinfo:
        evolve_exact_trajectory(spin_fock("e", 0, 16), [0.0, 1.0, 2.0, 3.0], params, 16, guard=4)
    assert excinfo.value.time is not None
    assert excinfo.value.time > 0.0


def test_fidelity_examples():
    """Identical, orthogonal and half-overlapping states"""
    excited = spin_fock("e", 0, 8)
    ground = spin_fock("g", 0, 8)
    superposition = SpinBosonState((excited.amplitudes + ground.amplitudes) / np.sqrt(2), normalized=True)
    assert fidelity(excited, excited) == pytest.approx(1.0)
    assert fidelity(excited, ground) == pytest.approx(0.0)
    assert fidelity(excited, superposition) == pytest.approx(0.5)


def test_fidelity_rejects_dimension_mismatch():
    """States on different truncations cannot be compared"""
    with pytest.raises(ContractViolationError):
        fidelity(spin_fock("e", 0, 8), spin_fock("e", 0, 16))
