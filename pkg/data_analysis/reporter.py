"""
Reporter module for generating human-readable convergence reports.
"""
import logging
import math
from pathlib import Path
from typing import Optional
from utils import write_json
from .analyzer import ConvergenceReport


def _fmt(value: float, spec: str = ".5f") -> str:
    return format(value, spec) if math.isfinite(value) else "n/a"


class ConvergenceReporter:
    """
    Generates text and JSON reports from a ConvergenceReport.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """Initialize the reporter."""
        self.logger = logger or logging.getLogger("zeno_sim")

    def generate_report(self, report: ConvergenceReport) -> str:
        """Generate the text report: one line per rung, then the verdict."""
        lines = [
            f"Convergence Report: {report.scenario}",
            "=" * (20 + len(report.scenario)),
            f"Plateau window: t in [{report.window[0]:.4g}, {report.window[1]:.4g}]",
            f"Pass threshold: final successive deviation < {100 * report.threshold:g}%",
            "",
            f"{'density':>8} {'range':>6} {'n_k':>6} {'n_w':>6} {'k band':>15} {'T_rec':>10} "
            f"{'plateau':>10} {'transient':>10}  status",
        ]
        for rung in report.rungs:
            band = f"[{rung.k_min:g}, {rung.k_max:g}]"
            lines.append(
                f"{rung.density_factor:>8g} {rung.range_factor:>6g} {rung.n_k:>6d} {rung.n_w:>6d} {band:>15} "
                f"{rung.recurrence_time:>10.4g} {_fmt(rung.plateau):>10} {_fmt(rung.transient_time, '.4g'):>10}  "
                f"{rung.status}"
            )
            if rung.error:
                lines.append(f"    error: {rung.error}")

        lines.append("")
        lines.append("Successive deviations: " + ", ".join(_fmt(d, ".3e") for d in report.deviations))
        lines.append(f"Max deviation: {_fmt(report.max_deviation, '.3e')}")
        lines.append(f"Final deviation: {_fmt(report.final_deviation, '.3e')}")
        lines.append(f"Result: {'PASS' if report.passed else 'FAIL'}")
        return "\n".join(lines)

    def save_report(self, report: ConvergenceReport, output_dir: Path) -> bool:
        """
        Save convergence_report.txt and convergence.json in output_dir.

        Returns:
            True if both files were written, False otherwise
        """
        output_dir.mkdir(exist_ok=True, parents=True)
        file_path = output_dir / "convergence_report.txt"
        try:
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(self.generate_report(report) + "\n")
            self.logger.info("Saved report to %s", file_path)
        except Exception as e:
            self.logger.error("Failed to save report to %s: %s", file_path, e)
            return False
        return write_json(output_dir / "convergence.json", report.to_dict())
