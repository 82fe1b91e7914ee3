import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple
from utils import logger, ensure_dir
from config import ScenarioConfig, save_config
from .s04_assemble_model import SystemModel, build_model
from .s05_integrate import Trajectory, integrate
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
    intensity_map,
)
from .s07_write_outputs import write_series, write_intensity, write_summary


@dataclass(frozen=True)
class RunResult:
    config: ScenarioConfig
    trajectory: Trajectory = field(repr=False)
    ratio: ObservableSeries = field(repr=False)
    window: Tuple[float, float]
    plateau: float
    transient_time: float
    fitted_rate: float
    elapsed: float
    free_decay: Optional[FreeDecayEstimate] = None
    intensity: Optional[IntensityMap] = field(default=None, repr=False)

    def summary(self) -> Dict[str, Any]:
        """Scalar results for summary.json."""
        summary: Dict[str, Any] = {
            "scenario": self.config.name,
            "status": "ok",
            "plateau": self.plateau,
            "plateau_window": list(self.window),
            "transient_time": self.transient_time,
            "fitted_rate": self.fitted_rate,
            "analytic_free_rate": self.config.gamma_free,
            "norm_drift": self.trajectory.norm_drift,
            "final_excited_population": float(self.trajectory.excited[-1]),
            "final_detector_occupation": float(self.trajectory.detector[-1]),
            "recurrence_time": self.config.recurrence_time,
            "steps": len(self.trajectory.step_times) - 1,
            "elapsed_seconds": self.elapsed,
        }
        if self.free_decay is not None:
            summary["free_decay"] = {
                "analytic": self.free_decay.analytic,
                "fitted": self.free_decay.fitted,
                "relative_error": self.free_decay.relative_error,
                "window": list(self.free_decay.window),
            }
        return summary


def _fit_or_nan(series: ObservableSeries, window: Tuple[float, float]) -> float:
    try:
        return fit_decay_rate(series, window)
    except ValueError as e:
        logger.warning(f"Could not fit the decay rate: {e}")
        return float("nan")


def run_scenario(config: ScenarioConfig, out_dir: Optional[Path] = None,
                 with_intensity: bool = False, check_free_decay: bool = False,
                 window: Optional[Tuple[float, float]] = None,
                 model: Optional[SystemModel] = None) -> RunResult:
    """
    Integrate one scenario and extract its decay-rate observables.

    Args:
        config: Scenario to run (validated here)
        out_dir: Directory for config.txt, series.csv, summary.json (and
            intensity.csv); nothing is written when None
        with_intensity: Also compute the photon intensity map, x measured from the atom
        check_free_decay: Also run the detector-free companion and compare rates
        window: Plateau window (default [0.3, 0.6] of the scenario's recurrence time)
        model: Prebuilt model for config (built when None)

    Returns:
        RunResult

    Raises:
        ValueError: on an invalid scenario
        IntegrationError: if the norm drifts beyond the hard limit
        ModelInconsistencyError: if check_free_decay finds the grid too coarse
        OSError: if out_dir cannot be written
    """
    config.validate()
    started = time.perf_counter()
    model = build_model(config) if model is None else model

    trajectory = integrate(model, config.t_end, config.dt, config.sample_stride,
                           interaction_picture=config.interaction_picture, scenario=config.name)
    ratio = decay_rate_ratio(trajectory, config.gamma_free)
    window = plateau_window(config.recurrence_time) if window is None else window

    plateau_value = plateau(ratio, window)
    transient = transient_time(ratio, plateau_value)
    fitted = _fit_or_nan(excited_population(trajectory), window)
    free_decay = free_decay_rate(model) if check_free_decay else None
    imap = intensity_map(trajectory, model.photon_grid, x_origin=config.x_d) if with_intensity else None

    result = RunResult(config=config, trajectory=trajectory, ratio=ratio, window=window,
                       plateau=plateau_value, transient_time=transient, fitted_rate=fitted,
                       elapsed=time.perf_counter() - started, free_decay=free_decay, intensity=imap)
    if math.isfinite(plateau_value):
        logger.info(f"Scenario '{config.name}': plateau r = {plateau_value:.4f}, transient {transient:.3g}")

    if out_dir is not None and not write_run_outputs(result, out_dir):
        raise OSError(f"Could not write run outputs to {out_dir}")
    return result


def write_run_outputs(result: RunResult, out_dir: Path) -> bool:
    """
    Write the resolved config and every series of a run into out_dir.

    Returns:
        True if all files were written, False otherwise
    """
    if ensure_dir(out_dir) is None:
        return False
    ok = save_config(result.config, out_dir / "config.txt")
    ok = write_series(out_dir / "series.csv", result.trajectory, result.ratio) and ok
    if result.intensity is not None:
        ok = write_intensity(out_dir / "intensity.csv", result.intensity) and ok
    ok = write_summary(out_dir / "summary.json", result.summary()) and ok
    if not ok:
        logger.error("Some outputs could not be written to %s", out_dir)
    return ok
