from .physics import (
    ATOM_FREQUENCY,
    DEFAULT_GAMMA_FREE,
    DEFAULT_K_MIN,
    DEFAULT_K_MAX,
    DEFAULT_N_MODES,
    DEFAULT_SHARPNESS,
    BANDWIDTH_RATIO,
    ETA_CONVENTION_FACTOR,
    FINITE_KERNEL_AMPLITUDE,
    FINITE_KERNEL_WIDTH_MODES,
    DETECTOR_FWHM,
    DEFAULT_DT,
    DEFAULT_SAMPLE_STRIDE,
    STABILITY_LIMIT,
    NORM_DRIFT_LIMIT,
    SMOOTHING_WINDOW,
    POPULATION_FLOOR,
    PLATEAU_WINDOW,
    FIT_WINDOW_START,
    FREE_DECAY_AGREEMENT,
    FREE_DECAY_REFUSAL,
    RECURRENCE_FRACTION_LIMIT,
    DEFAULT_T_END_FRACTION,
    CONVERGENCE_THRESHOLD,
    ORACLE_MAX_DIMENSION,
    MIN_POINTS_PER_PENETRATION,
    SURFACE_DENSITY_TOLERANCE,
    GAUSSIAN_FWHM_FACTOR,
    KERNEL_KINDS,
    CSV_FLOAT_FORMAT,
)
