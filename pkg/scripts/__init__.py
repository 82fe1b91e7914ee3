# Get all pipeline stages used within main.py for easier import later

from .s01_build_grids import ModeGrid, build_mode_grid, recurrence_time
from .s02_build_couplings import PhotonCoupling, DetectorResponse, photon_coupling, detector_response
from .s03_build_kernel import (
    DetectionKernel,
    AttenuationProfile,
    delta_kernel,
    gaussian_kernel,
    gaussian_profile,
    kernel_from_attenuation,
    kernel_spatial_fwhm,
)
from .s04_assemble_model import SystemModel, assemble_model, build_model
from .s05_integrate import SystemState, Trajectory, init_state, rhs, norm, integrate, state_to_vector, state_from_vector
from .s06_observables import (
    ObservableSeries,
    IntensityMap,
    FreeDecayEstimate,
    excited_population,
    fit_decay_rate,
    free_decay_rate,
    decay_rate_ratio,
    plateau_window,
    plateau,
    transient_time,
    spatial_grid,
    intensity_profile,
    intensity_map,
    detector_occupation,
)
from .s07_write_outputs import SERIES_COLUMNS, write_series, write_intensity, write_summary, write_sweep_summary
from .s08_run_scenario import RunResult, run_scenario, write_run_outputs
from .s09_sweep import sweep, sweep_configs
