import math
import numpy as np
import pytest
from scipy.linalg import expm
from src.exceptions import ContractViolationError, InvalidDimensionError, TruncationError
from src.models.operators import ModeOperator
from src.physics.fock import (
    displace_many, displaced_number_state, displacement, hermitian_function, ladder, mean_number, tail_mass,
)
from tests.helpers import fock, mode_fock


def test_ladder_action():
    """a|1> = |0>, a|0> = 0, <2|a|3> = sqrt(3)"""
    a, adag, n = ladder(8)
    assert np.allclose(a.matrix @ fock(1, 8), fock(0, 8))
    assert np.allclose(a.matrix @ fock(0, 8), 0.0)
    assert a.matrix[2, 3] == pytest.approx(np.sqrt(3))
    assert np.array_equal(adag.matrix, a.matrix.conj().T)
    assert np.array_equal(n.matrix, np.diag(np.arange(8)).astype(complex))
    assert n.hermitian


def test_ladder_commutator_away_from_edge():
    """[a, a^dagger] = I except in the last row and column"""
    a, adag, _ = ladder(32)
    commutator = a.matrix @ adag.matrix - adag.matrix @ a.matrix
    assert np.max(np.abs(commutator[:-1, :-1] - np.eye(31))) <= 1e-12


def test_ladder_rejects_small_dimension():
    """dim < 2 is invalid"""
    with pytest.raises(InvalidDimensionError):
        ladder(1)


def test_hermitian_function_examples():
    """identity on n, cos of zero, cos^2 + sin^2 = 1"""
    _, _, n = ladder(16)
    assert np.allclose(hermitian_function(n, lambda x: x).matrix, n.matrix, atol=1e-12)

    zero = ModeOperator(np.zeros((16, 16)), hermitian=True)
    assert np.allclose(hermitian_function(zero, np.cos).matrix, np.eye(16))

    a, adag, _ = ladder(32)
    x = ModeOperator(2 * -0.03 * (a.matrix + adag.matrix), hermitian=True)
    cos_x = hermitian_function(x, np.cos).matrix
    sin_x = hermitian_function(x, np.sin).matrix
    assert np.max(np.abs(cos_x @ cos_x + sin_x @ sin_x - np.eye(32))) <= 1e-10


def test_hermitian_function_flags():
    """Real functions keep the Hermitian flag, complex ones drop it"""
    _, _, n = ladder(8)
    assert hermitian_function(n, np.cos).hermitian
    assert not hermitian_function(n, lambda x: np.exp(-1j * x)).hermitian


def test_hermitian_function_matches_matrix_exponential():
    """exp(iX) for a random Hermitian X against scipy's expm"""
    rng = np.random.default_rng(7)
    raw = rng.normal(size=(24, 24)) + 1j * rng.normal(size=(24, 24))
    x = ModeOperator(0.5 * (raw + raw.conj().T) / 10, hermitian=True)
    result = hermitian_function(x, lambda v: np.exp(1j * v)).matrix
    assert np.max(np.abs(result - expm(1j * x.matrix))) <= 1e-9


def test_hermitian_function_rejects_non_hermitian():
    """Non-Hermitian input is a contract violation"""
    a, _, _ = ladder(8)
    with pytest.raises(ContractViolationError):
        hermitian_function(a, np.cos)


def test_displacement_identity_and_inverse():
    """D(0) = I and D(beta) D(-beta) = I on the guarded subspace"""
    assert np.allclose(displacement(0j, 16).matrix, np.eye(16))
    product = displacement(0.18j, 64).matrix @ displacement(-0.18j, 64).matrix
    assert np.max(np.abs((product - np.eye(64))[:56, :56])) <= 1e-10


def test_displacement_vacuum_overlap():
    """<0|D(0.18i)|0> = exp(-0.18^2/2)"""
    d = displacement(0.18j, 64).matrix
    assert d[0, 0] == pytest.approx(np.exp(-0.18 ** 2 / 2), abs=1e-12)
    assert abs(d[0, 0]) == pytest.approx(0.98395, abs=1e-5)


@pytest.mark.parametrize("beta", [0.18j, 0.4 - 0.25j, -0.5])
def test_displacement_matches_coherent_series(beta):
    """D(beta)|0> = e^{-|beta|^2/2} sum beta^n/sqrt(n!) |n>"""
    amplitudes = displacement(beta, 64).matrix[:, 0]
    series = np.array([np.exp(-abs(beta) ** 2 / 2) * beta ** k / math.sqrt(math.factorial(k)) for k in range(64)])
    assert np.max(np.abs(amplitudes - series)) <= 1e-12


@pytest.mark.parametrize("beta", [0.1j, 0.3 + 0.2j, 0.5])
def test_displacement_guarded_unitarity(beta):
    """(D^dagger D - I) vanishes on the guarded subspace"""
    d = displacement(beta, 64).matrix
    error = (d.conj().T @ d - np.eye(64))[:, :56]
    assert np.linalg.norm(error, ord=2) <= 1e-9


def test_displace_many_matches_operator():
    """Batched displacement of a vector equals D(beta) psi"""
    psi = mode_fock(3, 32).amplitudes
    betas = np.array([0.0, 0.2j, -0.3 + 0.1j])
    rows = displace_many(betas, psi)
    for beta, row in zip(betas, rows):
        assert np.allclose(row, displacement(beta, 32).matrix @ psi, atol=1e-12)


def test_displaced_number_state():
    """D(0)|2> = |2>, coherent mean number |beta|^2, orthogonality"""
    assert np.allclose(displaced_number_state(0j, 2, 16).amplitudes, fock(2, 16))

    coherent = displaced_number_state(0.18j, 0, 64)
    assert mean_number(coherent) == pytest.approx(0.0324, abs=1e-8)
    assert tail_mass(coherent, 8) <= 1e-10

    first = displaced_number_state(0.18j, 1, 64)
    assert abs(coherent.inner(first)) <= 1e-10


def test_displaced_number_state_guard_band():
    """k inside the guard band is a truncation risk"""
    with pytest.raises(TruncationError):
        displaced_number_state(0.1j, 60, 64, guard=8)


def test_tail_mass():
    """Examples at N = 64, guard 8"""
    assert tail_mass(mode_fock(0, 64), 8) == 0.0
    assert tail_mass(displaced_number_state(0.18j, 0, 64), 8) <= 1e-12
    assert tail_mass(mode_fock(63, 64), 8) == pytest.approx(1.0)


def test_tail_mass_rejects_bad_guard():
    """guard must satisfy 0 < guard < dim"""
    with pytest.raises(InvalidDimensionError):
        tail_mass(mode_fock(0, 8), 8)
