"""
Convergence analyzer: reruns a scenario on refined mode grids and checks that
the decay-rate plateau no longer moves.
"""
import dataclasses
import logging
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
from config import ScenarioConfig
from constants import CONVERGENCE_THRESHOLD
from scripts import ObservableSeries, run_scenario, plateau, plateau_window
from utils import SimulationError

PlateauExtractor = Callable[[ObservableSeries, Tuple[float, float]], float]


@dataclass(frozen=True)
class RungResult:
    density_factor: float
    range_factor: float
    n_k: int
    n_w: int
    k_min: float
    k_max: float
    recurrence_time: float
    plateau: float = float("nan")
    transient_time: float = float("nan")
    status: str = "ok"
    error: str = ""


@dataclass(frozen=True)
class ConvergenceReport:
    scenario: str
    window: Tuple[float, float]
    threshold: float
    rungs: List[RungResult] = field(default_factory=list)

    @property
    def deviations(self) -> List[float]:
        """Relative change of the plateau between successive rungs."""
        values = [rung.plateau for rung in self.rungs]
        return [abs(b - a) / abs(a) if a else float("nan") for a, b in zip(values, values[1:])]

    @property
    def max_deviation(self) -> float:
        finite = [d for d in self.deviations if math.isfinite(d)]
        return max(finite) if len(finite) == len(self.deviations) and finite else float("nan")

    @property
    def final_deviation(self) -> float:
        return self.deviations[-1] if self.deviations else float("nan")

    @property
    def passed(self) -> bool:
        if any(rung.status != "ok" for rung in self.rungs):
            return False
        return math.isfinite(self.final_deviation) and self.final_deviation < self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "window": list(self.window),
            "threshold": self.threshold,
            "rungs": [dataclasses.asdict(rung) for rung in self.rungs],
            "deviations": self.deviations,
            "max_deviation": self.max_deviation,
            "final_deviation": self.final_deviation,
            "passed": self.passed,
        }


def _rung(config: ScenarioConfig, density: float, range_factor: float) -> RungResult:
    return RungResult(density_factor=density, range_factor=range_factor, n_k=config.n_k, n_w=config.n_w,
                      k_min=config.k_min, k_max=config.k_max, recurrence_time=config.recurrence_time)


def _run_rung(config: ScenarioConfig, density: float, range_factor: float,
              window: Tuple[float, float], observable: PlateauExtractor) -> RungResult:
    rung = _rung(config, density, range_factor)
    try:
        result = run_scenario(config, window=window)
        return dataclasses.replace(rung, plateau=float(observable(result.ratio, window)),
                                   transient_time=result.transient_time)
    except ValueError as e:
        return dataclasses.replace(rung, status="invalid", error=str(e))
    except SimulationError as e:
        logging.getLogger("zeno_sim").debug(traceback.format_exc())
        return dataclasses.replace(rung, status="failed", error=str(e))
    except Exception as e:
        logging.getLogger("zeno_sim").debug(traceback.format_exc())
        return _failed(rung, e)


def _failed(rung: RungResult, error: BaseException) -> RungResult:
    return dataclasses.replace(rung, status="failed", error=f"{type(error).__name__}: {error}")


class ConvergenceAnalyzer:
    """
    Runs a scenario along a refinement ladder of mode density and band range.

    The ladder is the density factors at the first range factor, followed by the
    remaining range factors at the last density factor.
    """

    def __init__(self, config: ScenarioConfig, parallel: int = 1, logger: Optional[logging.Logger] = None):
        """
        Initialize the analyzer.

        Args:
            config: Base scenario (the first rung at factors 1, 1)
            parallel: Worker processes for the rungs (1 runs in-process)
            logger: Optional logger instance
        """
        self.config = config
        self.parallel = parallel
        self.logger = logger or logging.getLogger("zeno_sim")

    def rung_config(self, density: float, range_factor: float) -> ScenarioConfig:
        """
        Refined copy of the base scenario.

        Both bands are widened about the atom frequency by range_factor (clipped
        at 0) at the base spacing, then the spacing is divided by density. A
        Gaussian kernel keeps its row sums, so its amplitude scales with the spacing.
        """
        base = self.config
        omega = base.omega

        def band(low: float, high: float, count: int) -> Tuple[float, float, int]:
            spacing = (high - low) / count
            new_low = max(0.0, omega - range_factor * (omega - low))
            new_high = omega + range_factor * (high - omega)
            return new_low, new_high, max(1, int(round((new_high - new_low) / spacing * density)))

        k_min, k_max, n_k = band(base.k_min, base.k_max, base.n_k)
        w_min, w_max, n_w = band(base.w_min, base.w_max, base.n_w)
        changes: Dict[str, Any] = {
            "name": f"{base.name}-d{density:g}-r{range_factor:g}",
            "k_min": k_min, "k_max": k_max, "n_k": n_k,
            "w_min": w_min, "w_max": w_max, "n_w": n_w,
        }
        if base.kernel_kind == "gaussian":
            spacing_ratio = ((k_max - k_min) / n_k) / base.k_spacing
            changes["kernel_amplitude"] = base.kernel_amplitude * spacing_ratio
        return dataclasses.replace(base, **changes)

    def refine(self, density_factors: Sequence[float], range_factors: Sequence[float] = (1.0,),
               observable: PlateauExtractor = plateau) -> ConvergenceReport:
        """
        Run every rung and collect the plateau of r(t).

        Args:
            density_factors: Mode density multipliers, ascending
            range_factors: Band range multipliers, ascending
            observable: Plateau extractor applied to each rung's ratio series

        Returns:
            ConvergenceReport; failed rungs are recorded and fail the report

        Raises:
            ValueError: if a factor is below 1 or the ladder has fewer than two rungs
        """
        if not density_factors or not range_factors:
            raise ValueError("Convergence ladder needs at least one density and one range factor")
        if min(density_factors) < 1 or min(range_factors) < 1:
            raise ValueError("Refinement factors must be >= 1")
        ladder = [(float(d), float(range_factors[0])) for d in density_factors]
        ladder += [(float(density_factors[-1]), float(r)) for r in range_factors[1:]]
        if len(ladder) < 2:
            raise ValueError("Convergence ladder needs at least two rungs")

        # Every rung measures the same time interval
        window = plateau_window(self.config.recurrence_time)
        configs = [self.rung_config(d, r) for d, r in ladder]
        self.logger.info(f"Convergence ladder for '{self.config.name}': {len(ladder)} rungs, "
                         f"plateau window [{window[0]:.4g}, {window[1]:.4g}]")

        if self.parallel <= 1:
            rungs = [_run_rung(c, d, r, window, observable) for c, (d, r) in zip(configs, ladder)]
        else:
            with ProcessPoolExecutor(max_workers=self.parallel) as pool:
                futures = [pool.submit(_run_rung, c, d, r, window, observable)
                           for c, (d, r) in zip(configs, ladder)]
                rungs = []
                for future, c, (d, r) in zip(futures, configs, ladder):
                    try:
                        rungs.append(future.result())
                    except Exception as e:
                        rungs.append(_failed(_rung(c, d, r), e))

        for rung in rungs:
            if rung.status == "ok":
                self.logger.info(f"Rung density x{rung.density_factor:g}, range x{rung.range_factor:g} "
                                 f"({rung.n_k} modes): plateau {rung.plateau:.5f}")
            else:
                self.logger.error(f"Rung density x{rung.density_factor:g}, range x{rung.range_factor:g} "
                                  f"{rung.status}: {rung.error}")

        report = ConvergenceReport(scenario=self.config.name, window=window,
                                   threshold=CONVERGENCE_THRESHOLD, rungs=rungs)
        self.logger.info(f"Convergence {'passed' if report.passed else 'failed'}: "
                         f"final deviation {report.final_deviation:.3e}")
        return report
