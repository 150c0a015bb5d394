import numpy as np
import pytest
from src.models.params import IonParams
from src.physics.fock import ladder
from src.physics.transforms import build_t, build_t1, build_t2, unitarity_report
from src.physics.spin_boson import guarded_distance, guarded_unitarity_error
from src.models.operators import SpinBosonOperator


def test_t1_without_coupling():
    """eta = 0: T1 = (1/sqrt 2)(I + sigma_+ - sigma_-) on the spin, identity on the mode"""
    dim = 8
    t1 = build_t1(IonParams(omega_rabi=2.0, eta=0.0), dim)
    spin = np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2)
    assert np.allclose(t1.matrix, np.kron(spin, np.eye(dim)), atol=1e-14)


def test_t1_unitary(reference_params):
    """T1 T1^dagger = I on the guarded subspace"""
    assert guarded_unitarity_error(build_t1(reference_params, 64), guard=8) <= 1e-9


def test_t2_without_rotation():
    """epsilon = 0 gives the identity"""
    t2 = build_t2(IonParams(omega_rabi=2.0, eta=0.0), 16)
    assert np.allclose(t2.matrix, np.eye(32), atol=1e-14)


def test_t2_unitary(reference_params):
    """T2 T2^dagger = I"""
    t2 = build_t2(reference_params, 64)
    assert np.max(np.abs(t2.matrix @ t2.matrix.conj().T - np.eye(128))) <= 1e-10


def test_t2_shifts_annihilation(reference_params):
    """T2 a T2^dagger = a + i eps sigma_x"""
    dim = 64
    eps = -0.03
    a = ladder(dim)[0].matrix
    zero = np.zeros((dim, dim))
    a_full = SpinBosonOperator.from_spin_terms(a, zero, zero, zero)
    t2 = build_t2(reference_params, dim)
    shifted = t2 @ a_full @ t2.dag()
    eye = np.eye(dim)
    expected = SpinBosonOperator.from_spin_terms(a, zero, 1j * eps * eye, 1j * eps * eye)
    assert guarded_distance(shifted, expected, guard=8) <= 1e-10


def test_composite_transform(reference_params):
    """Product and closed form agree; every member is unitary"""
    transforms = build_t(reference_params, 64)
    assert transforms.beta == pytest.approx(0.15j)
    assert transforms.beta_minus == pytest.approx(0.18j)
    assert transforms.epsilon == pytest.approx(-0.03)
    assert transforms.product_discrepancy <= 1e-9
    for name, error in unitarity_report(transforms, guard=8).items():
        assert error <= 1e-9, name


def test_composite_transform_without_coupling():
    """eta = 0: both forms are the same spin rotation"""
    transforms = build_t(IonParams(omega_rabi=2.0, eta=0.0), 16)
    assert np.allclose(transforms.product.matrix, transforms.t.matrix, atol=1e-14)
    assert np.allclose(transforms.t.matrix, transforms.t1.matrix, atol=1e-14)
