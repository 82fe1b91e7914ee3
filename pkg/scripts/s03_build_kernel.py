"""
Detection kernels C(k, k') coupling photon mode k to detector excitations labelled k'.

Three constructions are supported:
  - delta:        C = identity (the KS limit, detector overlapping everything)
  - gaussian:     C = A exp(-((k - k')/w)^2), a detector of finite spatial width
  - attenuation:  C projected from the attenuated field inside a detector with
                  spatial density rho(x)
"""
import math
from dataclasses import dataclass, field
from typing import Optional
import numpy as np
from scipy.integrate import cumulative_trapezoid
from utils import logger
from constants import (
    GAUSSIAN_FWHM_FACTOR,
    MIN_POINTS_PER_PENETRATION,
    SURFACE_DENSITY_TOLERANCE,
)
from .s01_build_grids import ModeGrid
from .s02_build_couplings import DetectorResponse


@dataclass(frozen=True)
class DetectionKernel:
    """Real symmetric n_k x n_k kernel matrix plus the parameters it was built from."""
    matrix: np.ndarray = field(repr=False, compare=False)
    kind: str
    width_k: float
    amplitude: float


@dataclass(frozen=True)
class AttenuationProfile:
    """
    Spatial density of detector excitations sampled on x in [0, extent].

    The field enters the detector at x = extent and is attenuated towards x = 0.
    """
    x: np.ndarray = field(repr=False, compare=False)
    density: np.ndarray = field(repr=False, compare=False)
    extent: float
    penetration_depth: float


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    sym = 0.5 * (matrix + matrix.T)
    sym.setflags(write=False)
    return sym


def delta_kernel(grid: ModeGrid) -> DetectionKernel:
    """Identity kernel: every photon mode couples only to its own detector continuum."""
    matrix = np.eye(grid.n_modes)
    matrix.setflags(write=False)
    return DetectionKernel(matrix=matrix, kind="delta", width_k=0.0, amplitude=1.0)


def gaussian_kernel(grid: ModeGrid, amplitude: float, width: float) -> DetectionKernel:
    """
    Gaussian kernel C(k_i, k_j) = amplitude * exp(-((k_i - k_j)/width)^2).

    Args:
        grid: Photon mode grid
        amplitude: Peak value on the diagonal
        width: e-fold width in frequency units

    Returns:
        DetectionKernel of kind "gaussian"

    Raises:
        ValueError: if amplitude or width is not positive
    """
    if not amplitude > 0:
        raise ValueError(f"Kernel amplitude must be positive, got {amplitude}")
    if not width > 0:
        raise ValueError(f"Kernel width must be positive, got {width}")
    if width < grid.spacing / 10.0:
        logger.warning(
            f"Kernel width {width:.4g} is below a tenth of the mode spacing {grid.spacing:.4g}; "
            "the kernel is effectively a delta and poorly sampled"
        )

    offsets = np.subtract.outer(grid.values, grid.values)
    matrix = amplitude * np.exp(-(offsets / width) ** 2)
    return DetectionKernel(matrix=_symmetrize(matrix), kind="gaussian",
                           width_k=float(width), amplitude=float(amplitude))


def kernel_spatial_fwhm(width: float) -> float:
    """Spatial FWHM of the detector profile whose Fourier transform is exp(-(q/width)^2)."""
    return 2.0 * GAUSSIAN_FWHM_FACTOR / width


def gaussian_profile(fwhm: float, peak_density: float, extent: Optional[float] = None,
                     n_points: Optional[int] = None) -> AttenuationProfile:
    """
    Gaussian detector density centred in [0, extent], vanishing smoothly at both surfaces.

    Args:
        fwhm: Full width at half maximum of rho(x)
        peak_density: rho at the detector centre
        extent: Detector thickness (default 4 * fwhm)
        n_points: Number of x samples (default resolves both the profile and
            optical wavelengths up to k = 2)

    Returns:
        AttenuationProfile
    """
    if not fwhm > 0:
        raise ValueError(f"Profile FWHM must be positive, got {fwhm}")
    if peak_density < 0:
        raise ValueError(f"Peak density must be >= 0, got {peak_density}")

    extent = 4.0 * fwhm if extent is None else extent
    scale = fwhm / GAUSSIAN_FWHM_FACTOR
    if n_points is None:
        step = min(scale / 10.0, 0.25)
        n_points = int(math.ceil(extent / step)) + 1

    x = np.linspace(0.0, extent, n_points)
    density = peak_density * np.exp(-((x - 0.5 * extent) / scale) ** 2)
    return AttenuationProfile(x=x, density=density, extent=float(extent), penetration_depth=float(scale))


def kernel_from_attenuation(grid: ModeGrid, profile: AttenuationProfile,
                            response: DetectorResponse) -> DetectionKernel:
    """
    Project the field absorbed inside a detector onto the photon plane waves.

    Each mode is attenuated as A_k(x) = exp(-int_x^extent sqrt(eta_k rho) dx'). The
    detector takes up the envelope derivative of P_k - phi_k, sqrt(eta_k rho) A_k,
    per unit sqrt(eta_k); projecting it on e^{-ik'x}/sqrt(L), L = 2pi/spacing, with x
    measured from the detector centre gives

        C(k', k) = (spacing/2pi) * int e^{i(k'-k)x} sqrt(rho(x)) A_k(x) dx

    by the trapezoidal rule on the profile grid. The real part is symmetrized.

    P_k - phi_k itself is not projected: its envelope A_k - 1 is a step that stays
    at -1 everywhere past the absorption region, so its projection measures the
    fully absorbed tail and the truncation of the x-grid rather than where the
    detector takes the field up. The derivative sqrt(eta_k rho) A_k is localized
    inside the detector and vanishes with rho.

    Args:
        grid: Photon mode grid
        profile: Detector density
        response: Detector response eta_k on the same grid

    Returns:
        DetectionKernel of kind "attenuation"

    Raises:
        ValueError: if the profile grid under-resolves the penetration depth or
            the response does not match the grid
    """
    x = profile.x
    if len(response.eta) != grid.n_modes:
        raise ValueError(f"Response has {len(response.eta)} modes, grid has {grid.n_modes}")
    if len(x) < 2:
        raise ValueError("Attenuation profile needs at least two samples")
    dx = float(np.max(np.diff(x)))
    if dx * MIN_POINTS_PER_PENETRATION > profile.penetration_depth:
        raise ValueError(
            f"Profile step {dx:.4g} under-resolves the penetration depth {profile.penetration_depth:.4g} "
            f"(need >= {MIN_POINTS_PER_PENETRATION} points per depth)"
        )

    density = np.clip(profile.density, 0.0, None)
    peak = float(density.max())
    if peak > 0 and max(density[0], density[-1]) > SURFACE_DENSITY_TOLERANCE * peak:
        logger.warning(
            "Detector density does not vanish at the surface; "
            "expect reflection artifacts (the detector behaves like a mirror)"
        )

    root_density = np.sqrt(density)
    # Optical depth from the entry surface down to each x
    accumulated = cumulative_trapezoid(root_density, x, initial=0.0)
    depth = accumulated[-1] - accumulated
    attenuation = np.exp(-np.sqrt(response.eta)[:, None] * depth[None, :])

    centred = x - 0.5 * (x[0] + x[-1])
    weights = np.empty_like(x)
    weights[1:-1] = 0.5 * (x[2:] - x[:-2])
    weights[0] = 0.5 * (x[1] - x[0])
    weights[-1] = 0.5 * (x[-1] - x[-2])

    phases = np.exp(1j * np.outer(grid.values, centred))
    transferred = np.conj(phases) * (root_density[None, :] * attenuation)
    projection = (grid.spacing / (2.0 * math.pi)) * (phases * weights[None, :]) @ transferred.T

    matrix = _symmetrize(projection.real)
    logger.debug(f"Attenuation kernel: peak {matrix.max():.4g}, detector extent {profile.extent:.4g}")
    return DetectionKernel(matrix=matrix, kind="attenuation",
                           width_k=float(math.sqrt(2.0) / profile.penetration_depth),
                           amplitude=float(np.max(np.abs(np.diag(matrix)))))
