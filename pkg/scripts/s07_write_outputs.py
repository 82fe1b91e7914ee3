from pathlib import Path
from typing import Any, Dict, List, Mapping
import numpy as np
import pandas as pd
from utils import logger, write_json
from constants import CSV_FLOAT_FORMAT
from .s05_integrate import Trajectory
from .s06_observables import ObservableSeries, IntensityMap

SERIES_COLUMNS = ["t", "P_e", "ratio", "norm", "detector_occupation"]
INTENSITY_COLUMNS = ["x", "t", "I"]
SWEEP_COLUMNS = ["parameter", "value", "plateau", "status", "error"]


def series_frame(traj: Trajectory, ratio: ObservableSeries) -> pd.DataFrame:
    """Per-step table of populations; ratio is NaN past its truncation point."""
    padded = np.full(len(traj.step_times), np.nan)
    padded[:len(ratio)] = ratio.values
    return pd.DataFrame({
        "t": traj.step_times,
        "P_e": traj.excited,
        "ratio": padded,
        "norm": traj.norms,
        "detector_occupation": traj.detector,
    }, columns=SERIES_COLUMNS)


def intensity_frame(imap: IntensityMap) -> pd.DataFrame:
    """Long-form (x, t, I) triplets, t-major."""
    t_grid, x_grid = np.meshgrid(imap.t, imap.x, indexing="ij")
    return pd.DataFrame({
        "x": x_grid.ravel(),
        "t": t_grid.ravel(),
        "I": imap.intensity.ravel(),
    }, columns=INTENSITY_COLUMNS)


def _write_frame(frame: pd.DataFrame, file_path: Path) -> bool:
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(file_path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="", lineterminator="\n")
        logger.info("Wrote %d rows to %s", len(frame), file_path)
        return True
    except Exception as e:
        logger.error("Error writing CSV file %s: %s", file_path, e)
        return False


def write_series(file_path: Path, traj: Trajectory, ratio: ObservableSeries) -> bool:
    return _write_frame(series_frame(traj, ratio), file_path)


def write_intensity(file_path: Path, imap: IntensityMap) -> bool:
    return _write_frame(intensity_frame(imap), file_path)


def write_sweep_summary(file_path: Path, rows: List[Mapping[str, Any]]) -> bool:
    """
    Write the sweep table: one row per parameter value.

    Args:
        file_path: Destination CSV
        rows: Dicts with the SWEEP_COLUMNS keys

    Returns:
        True if successful, False otherwise
    """
    frame = pd.DataFrame(list(rows), columns=SWEEP_COLUMNS)
    return _write_frame(frame, file_path)


def write_summary(file_path: Path, summary: Dict[str, Any]) -> bool:
    if not write_json(file_path, summary, indent=4):
        return False
    logger.info("Wrote run summary to %s", file_path)
    return True
