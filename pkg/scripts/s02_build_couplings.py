import math
from dataclasses import dataclass, field
import numpy as np
from utils import logger
from .s01_build_grids import ModeGrid


@dataclass(frozen=True)
class PhotonCoupling:
    """
    Discrete atom-photon couplings including the displacement phase.

    xi[j] = sqrt(gamma_free * spacing / 2pi) * exp(-i k_j x_d), the amplitude that
    drives photon mode j from the excited atom.
    """
    xi: np.ndarray = field(repr=False, compare=False)
    x_d: float
    gamma_free: float


@dataclass(frozen=True)
class DetectorResponse:
    """Frequency-dependent photon-detector coupling strength eta_k."""
    eta: np.ndarray = field(repr=False, compare=False)
    eta_peak: float
    delta_bw: float
    sharpness: int
    center: float


def photon_coupling(grid: ModeGrid, gamma_free: float, x_d: float) -> PhotonCoupling:
    """
    Build flat (k-independent) atom-photon couplings for a target free decay rate.

    Args:
        grid: Photon mode grid
        gamma_free: Free-space decay rate (golden-rule value 2*pi*|xi_cont|^2)
        x_d: Displacement of the atom from the detector origin

    Returns:
        PhotonCoupling whose magnitudes carry sqrt(spacing) and phases -k*x_d

    Raises:
        ValueError: if gamma_free is not positive
    """
    if not gamma_free > 0:
        raise ValueError(f"gamma_free must be positive, got {gamma_free}")

    magnitude = math.sqrt(gamma_free * grid.spacing / (2.0 * math.pi))
    xi = magnitude * np.exp(-1j * grid.values * x_d)
    xi.setflags(write=False)

    logger.debug(f"Photon coupling |xi| = {magnitude:.6g} on {grid.n_modes} modes, x_D = {x_d}")
    return PhotonCoupling(xi=xi, x_d=float(x_d), gamma_free=float(gamma_free))


def detector_response(grid: ModeGrid, eta_peak: float, delta_bw: float, center: float,
                      sharpness: int) -> DetectorResponse:
    """
    Evaluate eta_k = (eta/2pi) / (1 + ((k - center)/delta_bw)^n) on the grid.

    Args:
        grid: Photon mode grid
        eta_peak: Peak response eta (0 switches the detector off)
        delta_bw: Response bandwidth Delta
        center: Line centre (the atom frequency)
        sharpness: Even exponent n >= 2

    Returns:
        DetectorResponse with a nonnegative eta array

    Raises:
        ValueError: on negative eta, non-positive bandwidth or odd/small sharpness
    """
    if eta_peak < 0:
        raise ValueError(f"eta_peak must be >= 0, got {eta_peak}")
    if not delta_bw > 0:
        raise ValueError(f"delta_bw must be positive, got {delta_bw}")
    if int(sharpness) != sharpness or sharpness < 2 or int(sharpness) % 2:
        raise ValueError(f"sharpness must be an even integer >= 2, got {sharpness}")

    detuning = (grid.values - center) / delta_bw
    eta = (eta_peak / (2.0 * math.pi)) / (1.0 + detuning ** int(sharpness))
    eta.setflags(write=False)

    return DetectorResponse(eta=eta, eta_peak=float(eta_peak), delta_bw=float(delta_bw),
                            sharpness=int(sharpness), center=float(center))
