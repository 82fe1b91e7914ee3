import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple
import numpy as np
from utils import logger, ModelInconsistencyError
from config import ScenarioConfig
from .s01_build_grids import ModeGrid, build_mode_grid
from .s02_build_couplings import PhotonCoupling, DetectorResponse, photon_coupling, detector_response
from .s03_build_kernel import (
    DetectionKernel,
    delta_kernel,
    gaussian_kernel,
    gaussian_profile,
    kernel_from_attenuation,
)


@dataclass(frozen=True)
class SystemModel:
    """
    Discretized atom + photon continuum + detector continuum.

    The detector quantum (k', omega) couples to photon mode k through
    M(k, k') = sqrt(eta_scale * eta_k' * d_omega) * C(k, k'), precomputed once.
    """
    photon_grid: ModeGrid
    omega_grid: ModeGrid
    coupling: PhotonCoupling
    response: DetectorResponse
    kernel: DetectionKernel
    atom_frequency: float
    eta_scale: float = 1.0

    @property
    def n_k(self) -> int:
        return self.photon_grid.n_modes

    @property
    def n_w(self) -> int:
        return self.omega_grid.n_modes

    @property
    def shape(self) -> Tuple[int, int]:
        """Shape of the detector amplitude block c[k, omega]."""
        return self.n_k, self.n_w

    @property
    def dimension(self) -> int:
        return 1 + self.n_k + self.n_k * self.n_w

    @property
    def max_frequency(self) -> float:
        return max(abs(self.atom_frequency), self.photon_grid.k_max, self.omega_grid.k_max)

    @cached_property
    def detector_coupling(self) -> np.ndarray:
        scale = np.sqrt(self.eta_scale * self.response.eta * self.omega_grid.spacing)
        matrix = self.kernel.matrix * scale[None, :]
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def diagonal(self) -> np.ndarray:
        """Bare energies in state-vector order: atom, photon modes, detector quanta (k-major)."""
        diag = np.concatenate((
            [self.atom_frequency],
            self.photon_grid.values,
            np.tile(self.omega_grid.values, self.n_k),
        ))
        diag.setflags(write=False)
        return diag


def assemble_model(photon_grid: ModeGrid, omega_grid: ModeGrid, coupling: PhotonCoupling,
                   response: DetectorResponse, kernel: DetectionKernel,
                   atom_frequency: float, eta_scale: float = 1.0) -> SystemModel:
    """
    Combine the built parts into a SystemModel after checking they fit together.

    Raises:
        ModelInconsistencyError: if array sizes disagree with the photon grid
        ValueError: on a non-positive eta_scale
    """
    n_k = photon_grid.n_modes
    if len(coupling.xi) != n_k:
        raise ModelInconsistencyError(f"Photon coupling has {len(coupling.xi)} modes, grid has {n_k}")
    if len(response.eta) != n_k:
        raise ModelInconsistencyError(f"Detector response has {len(response.eta)} modes, grid has {n_k}")
    if kernel.matrix.shape != (n_k, n_k):
        raise ModelInconsistencyError(f"Kernel shape {kernel.matrix.shape} does not match {n_k} photon modes")
    if not eta_scale > 0:
        raise ValueError(f"eta_scale must be positive, got {eta_scale}")

    return SystemModel(photon_grid=photon_grid, omega_grid=omega_grid, coupling=coupling,
                       response=response, kernel=kernel, atom_frequency=float(atom_frequency),
                       eta_scale=float(eta_scale))


def build_model(config: ScenarioConfig) -> SystemModel:
    """
    Build every model part described by a scenario.

    Args:
        config: Scenario parameters

    Returns:
        The assembled SystemModel
    """
    logger.info(f"Building model for scenario '{config.name}'...")
    photon_grid = build_mode_grid(config.k_min, config.k_max, config.n_k)
    omega_grid = build_mode_grid(config.w_min, config.w_max, config.n_w)
    coupling = photon_coupling(photon_grid, config.gamma_free, config.x_d)
    response = detector_response(photon_grid, config.eta_peak, config.delta_bw,
                                 config.omega, config.sharpness)

    if config.kernel_kind == "delta":
        kernel = delta_kernel(photon_grid)
    elif config.kernel_kind == "gaussian":
        kernel = gaussian_kernel(photon_grid, config.kernel_amplitude, config.kernel_width)
    elif config.kernel_kind == "attenuation":
        profile = gaussian_profile(config.profile_fwhm, config.profile_peak,
                                   n_points=config.profile_points or None)
        kernel = kernel_from_attenuation(photon_grid, profile, response)
    else:
        raise ValueError(f"Unknown kernel kind '{config.kernel_kind}'")

    model = assemble_model(photon_grid, omega_grid, coupling, response, kernel,
                           config.omega, eta_scale=config.eta_scale)
    logger.info(
        f"Model ready: {model.n_k} photon modes, {model.n_k}x{model.n_w} detector modes "
        f"(dimension {model.dimension}), {kernel.kind} kernel, T_rec = "
        f"{2.0 * math.pi / max(photon_grid.spacing, omega_grid.spacing):.4g}"
    )
    return model
