"""
Measured quantities derived from trajectories: excited population, normalized
decay rate r(t), spatial photon intensity and detector occupation.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple
import numpy as np
from scipy import fft
from scipy.ndimage import uniform_filter1d
from utils import logger, ModelInconsistencyError
from constants import (
    DEFAULT_DT,
    STABILITY_LIMIT,
    SMOOTHING_WINDOW,
    POPULATION_FLOOR,
    PLATEAU_WINDOW,
    FIT_WINDOW_START,
    FREE_DECAY_AGREEMENT,
    FREE_DECAY_REFUSAL,
    DEFAULT_T_END_FRACTION,
)
from .s01_build_grids import ModeGrid, build_mode_grid, recurrence_time
from .s02_build_couplings import detector_response
from .s03_build_kernel import delta_kernel
from .s04_assemble_model import SystemModel, assemble_model
from .s05_integrate import SystemState, Trajectory, integrate


@dataclass(frozen=True)
class ObservableSeries:
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    label: str
    units: str = ""

    def __post_init__(self) -> None:
        if self.times.shape != self.values.shape:
            raise ValueError(f"Series '{self.label}': {self.times.shape} times vs {self.values.shape} values")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError(f"Series '{self.label}': times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class IntensityMap:
    """Photon intensity I[t, x] on the Fourier-conjugate x-grid of the photon modes."""
    x: np.ndarray = field(repr=False)
    t: np.ndarray = field(repr=False)
    intensity: np.ndarray = field(repr=False)
    x_origin: float = 0.0

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0]) if len(self.x) > 1 else 0.0


@dataclass(frozen=True)
class FreeDecayEstimate:
    analytic: float
    fitted: float
    window: Tuple[float, float]

    @property
    def relative_error(self) -> float:
        return abs(self.fitted - self.analytic) / self.analytic


def excited_population(traj: Trajectory) -> ObservableSeries:
    """P_e(t) = |alpha(t)|^2 at every integrator step."""
    return ObservableSeries(times=traj.step_times, values=np.clip(traj.excited, 0.0, 1.0),
                            label="P_e", units="")


def fit_decay_rate(series: ObservableSeries, window: Tuple[float, float]) -> float:
    """
    Least-squares fit of ln P over a time window.

    Args:
        series: Population series
        window: (t_start, t_stop) inclusive

    Returns:
        The decay rate (minus the fitted slope)

    Raises:
        ValueError: if fewer than two usable points fall in the window
    """
    t_start, t_stop = window
    mask = (series.times >= t_start) & (series.times <= t_stop) & (series.values > POPULATION_FLOOR)
    if np.count_nonzero(mask) < 2:
        raise ValueError(f"Fewer than two usable samples of '{series.label}' in window [{t_start:g}, {t_stop:g}]")
    slope, _ = np.polyfit(series.times[mask], np.log(series.values[mask]), 1)
    return float(-slope)


def free_decay_rate(model: SystemModel, t_end: Optional[float] = None,
                    dt: Optional[float] = None) -> FreeDecayEstimate:
    """
    Analytic golden-rule rate and the rate fitted from a detector-free companion run.

    The companion run keeps the photon grid and coupling of model, switches eta
    off and shrinks the detector to one frequency mode.

    Args:
        model: Model with flat atom-photon coupling
        t_end: Companion run length (default 0.65 of the recurrence time)
        dt: Companion step (default 0.01, reduced to satisfy the stability guard)

    Returns:
        FreeDecayEstimate

    Raises:
        ValueError: if the photon coupling is not flat in magnitude
        ModelInconsistencyError: if the two rates differ by more than 5%
    """
    grid = model.photon_grid
    magnitudes = np.abs(model.coupling.xi)
    if np.ptp(magnitudes) > 1e-12 * magnitudes.max():
        raise ValueError("free_decay_rate needs a flat (k-independent) photon coupling")

    analytic = 2.0 * math.pi * float(magnitudes.mean()) ** 2 / grid.spacing
    t_rec = recurrence_time(grid)
    t_end = DEFAULT_T_END_FRACTION * t_rec if t_end is None else t_end
    if dt is None:
        dt = min(DEFAULT_DT, 0.5 * STABILITY_LIMIT / model.max_frequency)

    omega_grid = build_mode_grid(model.omega_grid.k_min, model.omega_grid.k_max, 1)
    response = detector_response(grid, 0.0, model.response.delta_bw, model.response.center,
                                 model.response.sharpness)
    companion = assemble_model(grid, omega_grid, model.coupling, response, delta_kernel(grid),
                               model.atom_frequency)

    logger.info("Running detector-free companion for the free decay rate...")
    trajectory = integrate(companion, t_end, dt, sample_stride=max(1, int(round(t_end / dt))),
                           scenario="free-decay-companion")
    window = (FIT_WINDOW_START / analytic, min(PLATEAU_WINDOW[1] * t_rec, t_end))
    fitted = fit_decay_rate(excited_population(trajectory), window)

    estimate = FreeDecayEstimate(analytic=analytic, fitted=fitted, window=window)
    if estimate.relative_error > FREE_DECAY_REFUSAL:
        raise ModelInconsistencyError(
            f"Fitted free decay rate {fitted:.6g} differs from the golden-rule value {analytic:.6g} "
            f"by {100 * estimate.relative_error:.1f}%; the discretization is too coarse"
        )
    if estimate.relative_error > FREE_DECAY_AGREEMENT:
        logger.warning(
            f"Free decay rate agreement is only {100 * estimate.relative_error:.2f}% "
            f"(fitted {fitted:.6g}, analytic {analytic:.6g})"
        )
    logger.info(f"Free decay rate: analytic {analytic:.6g}, fitted {fitted:.6g}")
    return estimate


def decay_rate_ratio(traj: Trajectory, gamma_free: float) -> ObservableSeries:
    """
    Normalized decay rate r(t) = -d ln P_e/dt / gamma_free.

    Central differences on ln P_e, smoothed with a 5-step boxcar; r(0) is 0. The
    series stops before P_e first drops below 1e-12.

    Args:
        traj: Trajectory with per-step populations
        gamma_free: Normalizing rate

    Returns:
        ObservableSeries labelled "ratio"
    """
    if not gamma_free > 0:
        raise ValueError(f"gamma_free must be positive, got {gamma_free}")

    population = traj.excited
    below = np.flatnonzero(population < POPULATION_FLOOR)
    stop = int(below[0]) if below.size else len(population)
    if stop < len(population):
        logger.warning(f"P_e fell below {POPULATION_FLOOR:g} at t = {traj.step_times[stop]:g}; ratio truncated")

    times = traj.step_times[:stop]
    if stop < 2:
        return ObservableSeries(times=times, values=np.zeros(stop), label="ratio")

    rate = -np.gradient(np.log(population[:stop]), traj.dt)
    ratio = uniform_filter1d(rate, size=SMOOTHING_WINDOW, mode="nearest") / gamma_free
    ratio[0] = 0.0
    return ObservableSeries(times=times, values=ratio, label="ratio")


def plateau_window(t_rec: float) -> Tuple[float, float]:
    return PLATEAU_WINDOW[0] * t_rec, PLATEAU_WINDOW[1] * t_rec


def plateau(series: ObservableSeries, window: Tuple[float, float]) -> float:
    """Mean of the series over window, ignoring NaNs; NaN when the window is empty."""
    mask = (series.times >= window[0]) & (series.times <= window[1])
    values = series.values[mask]
    values = values[np.isfinite(values)]
    if values.size == 0:
        logger.warning(f"No samples of '{series.label}' in plateau window [{window[0]:g}, {window[1]:g}]")
        return float("nan")
    return float(values.mean())


def transient_time(series: ObservableSeries, plateau_value: float) -> float:
    """First time the rising series reaches plateau_value (NaN if it never does)."""
    if not math.isfinite(plateau_value):
        return float("nan")
    reached = np.flatnonzero(series.values >= plateau_value)
    return float(series.times[reached[0]]) if reached.size else float("nan")


def spatial_grid(grid: ModeGrid) -> np.ndarray:
    """Centred Fourier-conjugate positions: period 2pi/spacing, n_modes points."""
    dx = 2.0 * math.pi / (grid.spacing * grid.n_modes)
    return (np.arange(grid.n_modes) - grid.n_modes // 2) * dx


def intensity_profile(state: SystemState, grid: ModeGrid, n_x: int, x_origin: float = 0.0) -> np.ndarray:
    """
    Photon intensity I(x) = |sum_k b_k e^{ik(x + x_origin)}|^2 spacing/2pi.

    Args:
        state: State whose photon amplitudes are transformed
        grid: Photon mode grid
        n_x: Number of positions; must equal the number of photon modes
        x_origin: Position of x = 0 in detector coordinates

    Returns:
        Intensity on spatial_grid(grid); sum(I) * dx equals sum |b_k|^2
    """
    if n_x != grid.n_modes:
        raise ValueError(f"n_x must equal the number of photon modes ({grid.n_modes}), got {n_x}")
    n = grid.n_modes
    # Shifting the index origin to the grid centre turns the sum into a plain inverse DFT
    shift = np.exp(1j * grid.values * x_origin) * np.exp(2j * math.pi * np.arange(n) * (-(n // 2)) / n)
    field_x: np.ndarray = n * fft.ifft(state.b * shift)
    return np.abs(field_x) ** 2 * grid.spacing / (2.0 * math.pi)


def intensity_map(traj: Trajectory, grid: ModeGrid, x_origin: float = 0.0) -> IntensityMap:
    """Intensity profile of every stored state of a trajectory."""
    x = spatial_grid(grid)
    rows = [intensity_profile(state, grid, grid.n_modes, x_origin) for state in traj.states]
    return IntensityMap(x=x, t=traj.times.copy(), intensity=np.vstack(rows), x_origin=float(x_origin))


def detector_occupation(state: SystemState) -> Tuple[float, np.ndarray]:
    """Total detector population and its marginal over photon labels k."""
    per_k = np.sum(np.abs(state.c) ** 2, axis=1)
    return float(per_k.sum()), per_k
