import logging
import math
import numpy as np
from scipy.integrate import trapezoid
from ..exceptions import TruncationError
from ..models.operators import ModeState
from ..models.results import WignerGrid
from ..utils.config import Config
from .fock import DEFAULT_GUARD, displace_many, mean_number, tail_mass

logger = logging.getLogger(__name__)

# Extra radius, in units of sqrt(n), kept above the displaced support
PADDING_MARGIN = 6.0


def padded_dim(dim: int, half_width: float) -> int:
    """
    Truncation that holds D(-alpha)psi for every alpha on the grid.

    A state supported on n < N has radius below sqrt(N) in phase space;
    the grid corners shift it by sqrt(2) * half_width.
    """
    radius = math.sqrt(dim) + math.sqrt(2.0) * half_width + PADDING_MARGIN
    return max(dim, math.ceil(radius ** 2))


def wigner(state: ModeState, half_width: float = 4.0, points: int = 41,
           guard: int = DEFAULT_GUARD) -> WignerGrid:
    """
    W(alpha) = (2/pi) sum_n (-1)^n |<n|D(-alpha)|psi>|^2 on a square grid.

    Axes are x = Re alpha and p = Im alpha, so a coherent state |beta>
    peaks at (Re beta, Im beta) with height 2/pi. The state is zero-padded
    before displacing, so the grid may reach beyond what N can represent.
    """
    tail = tail_mass(state, guard)
    limit = Config.tolerance("tail_wigner")
    if tail > limit:
        raise TruncationError(f"state has guard-band population {tail:.3e} > {limit:.0e}", tail=tail)

    axis = np.linspace(-half_width, half_width, points)
    xx, pp = np.meshgrid(axis, axis)
    alphas = (xx + 1j * pp).ravel()
    dim = padded_dim(state.dim, half_width)
    psi = np.zeros(dim, dtype=complex)
    psi[:state.dim] = state.normalize().amplitudes
    shifted = displace_many(-alphas, psi)
    parity = (-1.0) ** np.arange(dim)
    values = (2.0 / np.pi) * (np.abs(shifted) ** 2 @ parity)
    logger.debug(f"Wigner grid {points}x{points} over +-{half_width}, N={state.dim} padded to {dim}, "
                 f"<n> = {mean_number(state):.4f}")
    return WignerGrid(x=axis, p=axis.copy(), values=values.reshape(points, points))


def wigner_integral(grid: WignerGrid) -> float:
    """Trapezoidal integral of W over dx dp"""
    return float(trapezoid(trapezoid(grid.values, grid.x, axis=1), grid.p))
