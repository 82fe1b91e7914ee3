"""
Physical and numerical defaults. Units: hbar = c = 1, atom frequency Omega = 1.
"""
import math

# Atom
ATOM_FREQUENCY = 1.0
DEFAULT_GAMMA_FREE = 0.02

# Discretization (range 0 to 2 Omega, 100 modes per axis)
DEFAULT_K_MIN = 0.0
DEFAULT_K_MAX = 2.0
DEFAULT_N_MODES = 100

# Detector response
DEFAULT_SHARPNESS = 6
BANDWIDTH_RATIO = 100.0  # 2*pi*Delta / gamma
# eta scale relative to the KS golden-rule normalization
ETA_CONVENTION_FACTOR = 10.0

# Finite detector (Gaussian kernel quoted with width in grid spacings).
# 0.103 gives unit row sum, i.e. the delta-kernel coupling at the detector centre;
# 0.085 puts the centre coupling at 0.83 of it.
FINITE_KERNEL_AMPLITUDE = 0.085
FINITE_KERNEL_WIDTH_MODES = 5.5
DETECTOR_FWHM = 33.0

# Integrator
DEFAULT_DT = 0.01
DEFAULT_SAMPLE_STRIDE = 100
STABILITY_LIMIT = 0.5  # dt * max frequency
NORM_DRIFT_LIMIT = 1e-6

# Observables
SMOOTHING_WINDOW = 5
POPULATION_FLOOR = 1e-12
PLATEAU_WINDOW = (0.3, 0.6)  # fractions of the recurrence time
FIT_WINDOW_START = 0.5  # in units of 1/gamma_free
FREE_DECAY_AGREEMENT = 0.02
FREE_DECAY_REFUSAL = 0.05

# Run windows
RECURRENCE_FRACTION_LIMIT = 0.7
DEFAULT_T_END_FRACTION = 0.65

# Convergence
CONVERGENCE_THRESHOLD = 0.01

# Oracle
ORACLE_MAX_DIMENSION = 5000

# Attenuation kernels
MIN_POINTS_PER_PENETRATION = 8
SURFACE_DENSITY_TOLERANCE = 1e-3
GAUSSIAN_FWHM_FACTOR = 2.0 * math.sqrt(math.log(2.0))
KERNEL_KINDS = ("delta", "gaussian", "attenuation")

# Output
CSV_FLOAT_FORMAT = "%.12g"
