import dataclasses
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence
import pandas as pd
from utils import logger, format_value, SimulationError
from config import ScenarioConfig, SWEEP_PARAMETERS
from .s07_write_outputs import SWEEP_COLUMNS, write_sweep_summary
from .s08_run_scenario import run_scenario


def sweep_configs(base: ScenarioConfig, parameter: str, values: Sequence[float]) -> List[ScenarioConfig]:
    """
    One scenario per value of a sweepable parameter.

    Raises:
        ValueError: on an unknown parameter or an empty value list
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"Cannot sweep '{parameter}'; choose one of {', '.join(SWEEP_PARAMETERS)}")
    if not values:
        raise ValueError("Sweep needs at least one value")
    field_name = SWEEP_PARAMETERS[parameter]
    return [
        dataclasses.replace(base, name=f"{base.name}-{parameter}-{format_value(value)}",
                            **{field_name: float(value)})
        for value in values
    ]


def _failed_row(parameter: str, value: float, error: BaseException) -> Dict[str, Any]:
    return {"parameter": parameter, "value": value, "plateau": float("nan"),
            "status": "failed", "error": f"{type(error).__name__}: {error}"}


def _run_point(config: ScenarioConfig, parameter: str, value: float,
               out_dir: Optional[Path]) -> Dict[str, Any]:
    """Run one sweep point; failures become a row instead of an exception."""
    row: Dict[str, Any] = {"parameter": parameter, "value": value, "plateau": float("nan"),
                           "status": "ok", "error": ""}
    try:
        run_dir = out_dir / config.name if out_dir is not None else None
        result = run_scenario(config, out_dir=run_dir)
        row["plateau"] = result.plateau
    except ValueError as e:
        row.update(status="invalid", error=str(e))
    except (SimulationError, OSError) as e:
        row.update(status="failed", error=str(e))
        logger.debug(traceback.format_exc())
    except Exception as e:
        row = _failed_row(parameter, value, e)
        logger.debug(traceback.format_exc())
    if row["status"] != "ok":
        logger.error(f"Sweep point {parameter} = {value:g} {row['status']}: {row['error']}")
    return row


def sweep(base: ScenarioConfig, parameter: str, values: Sequence[float], parallel: int = 1,
          out_dir: Optional[Path] = None) -> pd.DataFrame:
    """
    Run base once per value of parameter and tabulate the plateaus.

    Args:
        base: Scenario every point starts from
        parameter: One of SWEEP_PARAMETERS
        values: Parameter values, run in this order
        parallel: Worker processes (1 runs in-process)
        out_dir: Root for per-run directories and sweep_summary.csv

    Returns:
        DataFrame with columns parameter, value, plateau, status, error

    Raises:
        ValueError: on an unknown parameter or an empty value list
    """
    configs = sweep_configs(base, parameter, values)
    logger.info(f"Sweeping {parameter} over {len(configs)} values with {max(1, parallel)} worker(s)...")

    if parallel <= 1:
        rows = [_run_point(config, parameter, float(value), out_dir) for config, value in zip(configs, values)]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(_run_point, config, parameter, float(value), out_dir)
                       for config, value in zip(configs, values)]
            rows = []
            for future, value in zip(futures, values):
                try:
                    rows.append(future.result())
                except Exception as e:
                    logger.error(f"Sweep point {parameter} = {float(value):g} failed in its worker: {e!r}")
                    rows.append(_failed_row(parameter, float(value), e))

    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    failed = int((table["status"] != "ok").sum())
    logger.info(f"Sweep finished: {len(table) - failed} ok, {failed} failed")

    if out_dir is not None:
        write_sweep_summary(out_dir / "sweep_summary.csv", rows)
    return table
