from dataclasses import dataclass
from functools import cached_property
from typing import Tuple, Union
import numpy as np
import scipy.linalg as la
from ..exceptions import ContractViolationError, InvalidDimensionError
from ..utils.config import Config


def _frozen_matrix(data: np.ndarray) -> np.ndarray:
    matrix = np.array(data, dtype=complex)
    matrix.flags.writeable = False
    return matrix


def hermitian_residual(matrix: np.ndarray) -> float:
    """max |M - M^dagger| over all entries"""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


@dataclass(frozen=True, eq=False)
class _DenseOperator:
    """
    Dense complex square matrix, immutable after construction.

    Hermitian-flagged instances are checked against the `hermitian` tolerance and
    carry a lazily computed eigendecomposition that later callers reuse.
    """
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        if not isinstance(self.matrix, np.ndarray):
            raise TypeError(f"matrix must be ndarray, not {type(self.matrix)}")
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ContractViolationError(f"operator must be square, got shape {self.matrix.shape}")
        if not isinstance(self.hermitian, bool):
            raise TypeError(f"hermitian must be bool, not {type(self.hermitian)}")
        object.__setattr__(self, "matrix", _frozen_matrix(self.matrix))
        self._check_dim()
        if self.hermitian:
            residual = hermitian_residual(self.matrix)
            if residual > Config.tolerance("hermitian"):
                raise ContractViolationError(
                    f"{type(self).__name__} flagged Hermitian has residual {residual:.3e}"
                )

    def _check_dim(self) -> None:
        if self.matrix.shape[0] < 2:
            raise InvalidDimensionError(f"dimension must be >= 2, got {self.matrix.shape[0]}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self):
        return type(self)(self.matrix.conj().T, hermitian=self.hermitian)

    @cached_property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors of a Hermitian-flagged operator"""
        if not self.hermitian:
            raise ContractViolationError("spectral decomposition requires a Hermitian operator")
        eig_val, eig_vec = la.eigh(self.matrix)
        eig_val.flags.writeable = False
        eig_vec.flags.writeable = False
        return eig_val, eig_vec

    def __matmul__(self, other):
        if isinstance(other, _DenseOperator):
            if other.dim != self.dim or type(other) is not type(self):
                raise ContractViolationError(
                    f"cannot compose {type(self).__name__}({self.dim}) with {type(other).__name__}({other.dim})"
                )
            return type(self)(self.matrix @ other.matrix)
        if isinstance(other, _DenseState):
            if other.dim != self.dim:
                raise ContractViolationError(f"state dim {other.dim} does not match operator dim {self.dim}")
            return other.with_amplitudes(self.matrix @ other.amplitudes)
        return NotImplemented


@dataclass(frozen=True, eq=False)
class _DenseState:
    """Complex amplitude vector, immutable after construction."""
    amplitudes: np.ndarray
    normalized: bool = False

    # defaults.yaml tolerance for the normalized flag
    NORM_TOLERANCE = "normalized"

    def __post_init__(self):
        if not isinstance(self.amplitudes, np.ndarray):
            raise TypeError(f"amplitudes must be ndarray, not {type(self.amplitudes)}")
        if self.amplitudes.ndim != 1:
            raise ContractViolationError(f"amplitudes must be a vector, got shape {self.amplitudes.shape}")
        amplitudes = np.array(self.amplitudes, dtype=complex)
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)
        self._check_dim()
        if self.normalized and abs(self.norm_squared() - 1.0) > Config.tolerance(self.NORM_TOLERANCE):
            raise ContractViolationError(
                f"{type(self).__name__} flagged normalized has norm^2 {self.norm_squared():.12f}"
            )

    def _check_dim(self) -> None:
        if self.amplitudes.shape[0] < 2:
            raise InvalidDimensionError(f"dimension must be >= 2, got {self.amplitudes.shape[0]}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def with_amplitudes(self, amplitudes: np.ndarray, normalized: bool = False):
        return type(self)(amplitudes, normalized=normalized)

    def normalize(self):
        norm = np.sqrt(self.norm_squared())
        if norm == 0.0:
            raise ContractViolationError("cannot normalize the zero vector")
        return type(self)(self.amplitudes / norm, normalized=True)

    def inner(self, other: "_DenseState") -> complex:
        """<self|other>"""
        if other.dim != self.dim:
            raise ContractViolationError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


class ModeOperator(_DenseOperator):
    """Operator on the truncated vibrational Fock space (N x N)."""


class ModeState(_DenseState):
    """
    Vibrational state in the truncated Fock basis |0>..|N-1>.

    Example:
        >>> vacuum = ModeState(np.eye(8)[0], normalized=True)
    """


class SpinBosonOperator(_DenseOperator):
    """
    Operator on (two-level ion) x (Fock space), dimension 2N.

    Basis order is spin-major with |e> first: index s*N + n, s = 0 for |e>,
    s = 1 for |g>. The (e, g) block is the sigma_plus coefficient.
    """

    def _check_dim(self) -> None:
        if self.matrix.shape[0] < 4 or self.matrix.shape[0] % 2:
            raise InvalidDimensionError(f"spin-boson dimension must be even and >= 4, got {self.matrix.shape[0]}")

    @property
    def mode_dim(self) -> int:
        return self.dim // 2

    def block(self, row: str, col: str) -> np.ndarray:
        """Mode-space block <row| . |col> for spins in {'e', 'g'}"""
        n = self.mode_dim
        r, c = _SPIN_INDEX[row], _SPIN_INDEX[col]
        return self.matrix[r * n:(r + 1) * n, c * n:(c + 1) * n]

    @classmethod
    def from_blocks(cls, ee: np.ndarray, eg: np.ndarray, ge: np.ndarray, gg: np.ndarray,
                    hermitian: bool = False) -> "SpinBosonOperator":
        matrix = np.block([[ee, eg], [ge, gg]])
        if hermitian:
            matrix = 0.5 * (matrix + matrix.conj().T)
        return cls(matrix, hermitian=hermitian)

    @classmethod
    def from_spin_terms(cls, identity: np.ndarray, sigma_z: np.ndarray, sigma_minus: np.ndarray,
                        sigma_plus: np.ndarray, hermitian: bool = False) -> "SpinBosonOperator":
        """Assemble A*I + B*sigma_z + C*sigma_minus + D*sigma_plus from mode blocks"""
        return cls.from_blocks(identity + sigma_z, sigma_plus, sigma_minus, identity - sigma_z,
                               hermitian=hermitian)


class SpinBosonState(_DenseState):
    """
    Ion-motion state ordered (e,0..N-1, g,0..N-1).

    Example:
        >>> excited_vacuum = SpinBosonState(np.eye(16)[0], normalized=True)
    """

    NORM_TOLERANCE = "state_norm"

    def _check_dim(self) -> None:
        if self.amplitudes.shape[0] < 4 or self.amplitudes.shape[0] % 2:
            raise InvalidDimensionError(f"spin-boson dimension must be even and >= 4, got {self.amplitudes.shape[0]}")

    @property
    def mode_dim(self) -> int:
        return self.dim // 2

    def spin_block(self, spin: str) -> np.ndarray:
        n = self.mode_dim
        s = _SPIN_INDEX[spin]
        return self.amplitudes[s * n:(s + 1) * n]

    @classmethod
    def from_branches(cls, excited: Union[np.ndarray, ModeState], ground: Union[np.ndarray, ModeState],
                      normalized: bool = False) -> "SpinBosonState":
        """|e> x excited + |g> x ground"""
        excited = excited.amplitudes if isinstance(excited, ModeState) else excited
        ground = ground.amplitudes if isinstance(ground, ModeState) else ground
        return cls(np.concatenate([excited, ground]), normalized=normalized)


_SPIN_INDEX = {"e": 0, "g": 1}
