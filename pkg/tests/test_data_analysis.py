"""
Test suite for the convergence analyzer and its reporter.
"""
import sys
import json
import math
import pytest
from concurrent.futures import Future
from concurrent.futures.process import BrokenProcessPool
from pathlib import Path

# Add the parent directory to sys.path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from data_analysis import ConvergenceAnalyzer, ConvergenceReport, ConvergenceReporter, RungResult
from data_analysis import analyzer as analyzer_module
from config import ScenarioConfig, preset
from constants import FINITE_KERNEL_AMPLITUDE
from utils.logger import logger


@pytest.fixture
def small_config():
    """Coarse scenario that runs in well under a second."""
    return ScenarioConfig(name="small").with_overrides(
        ["n_k=20", "n_w=4", "t_end=12", "sample_stride=50", "allow_recurrence=true"]
    )


@pytest.fixture
def convergence_reporter():
    """Return a ConvergenceReporter instance."""
    return ConvergenceReporter(logger)


def make_rung(plateau, status="ok", density=1.0):
    return RungResult(density_factor=density, range_factor=1.0, n_k=100, n_w=100, k_min=0.0, k_max=2.0,
                      recurrence_time=314.159, plateau=plateau, status=status)


def make_report(*rungs):
    return ConvergenceReport(scenario="synthetic", window=(94.2, 188.5), threshold=0.01, rungs=list(rungs))


def test_rung_config_density():
    analyzer = ConvergenceAnalyzer(ScenarioConfig(name="base"), logger=logger)
    config = analyzer.rung_config(2.0, 1.0)
    assert config.name == "base-d2-r1"
    assert (config.n_k, config.n_w) == (200, 200)
    assert (config.k_min, config.k_max) == (0.0, 2.0)
    assert config.k_spacing == pytest.approx(0.01)


def test_rung_config_range_is_clipped_at_zero():
    analyzer = ConvergenceAnalyzer(ScenarioConfig(name="base"), logger=logger)
    config = analyzer.rung_config(1.0, 2.0)
    assert config.k_min == 0.0
    assert config.k_max == pytest.approx(3.0)
    assert config.n_k == 150
    assert config.k_spacing == pytest.approx(0.02)


def test_rung_config_keeps_gaussian_row_sums():
    analyzer = ConvergenceAnalyzer(preset("fig3-a"), logger=logger)
    config = analyzer.rung_config(2.0, 1.0)
    assert config.kernel_amplitude == pytest.approx(FINITE_KERNEL_AMPLITUDE / 2)
    assert config.kernel_width == pytest.approx(0.11)

    delta = ConvergenceAnalyzer(preset("ks-fig2-eta10")).rung_config(2.0, 1.0)
    assert delta.kernel_amplitude == pytest.approx(FINITE_KERNEL_AMPLITUDE)


@pytest.mark.parametrize("density, ranges", [
    ([0.5, 1.0], [1.0]),
    ([1.0, 2.0], [0.5]),
    ([1.0], [1.0]),
    ([], [1.0]),
])
def test_refine_rejects_bad_ladders(small_config, density, ranges):
    with pytest.raises(ValueError):
        ConvergenceAnalyzer(small_config).refine(density, ranges)


def test_report_deviations():
    report = make_report(make_rung(0.40), make_rung(0.36, density=2.0), make_rung(0.362, density=4.0))
    assert report.deviations == pytest.approx([0.1, 0.002 / 0.36])
    assert report.max_deviation == pytest.approx(0.1)
    assert report.final_deviation == pytest.approx(0.002 / 0.36)
    assert report.passed


def test_report_fails_on_large_final_deviation():
    report = make_report(make_rung(0.40), make_rung(0.36, density=2.0))
    assert not report.passed


def test_report_fails_on_failed_rung():
    report = make_report(make_rung(0.36), make_rung(float("nan"), status="failed", density=2.0),
                         make_rung(0.36, density=4.0))
    assert not report.passed
    assert math.isnan(report.max_deviation)


def test_report_to_dict():
    data = make_report(make_rung(0.36), make_rung(0.361, density=2.0)).to_dict()
    assert data["passed"] is True
    assert len(data["rungs"]) == 2
    assert data["rungs"][1]["density_factor"] == 2.0
    assert data["window"] == [94.2, 188.5]


def test_generate_report(convergence_reporter, capsys):
    report = make_report(make_rung(0.36), make_rung(float("nan"), status="failed", density=2.0))
    text = convergence_reporter.generate_report(report)
    with capsys.disabled():
        print("\n" + text)
    assert "Convergence Report: synthetic" in text
    assert "n/a" in text
    assert text.endswith("Result: FAIL")


def test_save_report(convergence_reporter, tmp_path):
    report = make_report(make_rung(0.36), make_rung(0.3601, density=2.0))
    assert convergence_reporter.save_report(report, tmp_path / "reports")
    assert "Result: PASS" in (tmp_path / "reports" / "convergence_report.txt").read_text(encoding="utf-8")
    saved = json.loads((tmp_path / "reports" / "convergence.json").read_text(encoding="utf-8"))
    assert saved["passed"] is True


def test_refine_runs_every_rung(small_config):
    analyzer = ConvergenceAnalyzer(small_config, logger=logger)
    report = analyzer.refine([1.0, 2.0], [1.0, 1.5])
    assert [(r.density_factor, r.range_factor) for r in report.rungs] == [(1.0, 1.0), (2.0, 1.0), (2.0, 1.5)]
    assert all(r.status == "ok" for r in report.rungs)
    assert all(math.isfinite(r.plateau) for r in report.rungs)
    assert report.window == pytest.approx((0.3 * small_config.recurrence_time, 0.6 * small_config.recurrence_time))


def test_refine_with_custom_observable(small_config):
    report = ConvergenceAnalyzer(small_config).refine([1.0, 2.0], observable=lambda series, window: 0.5)
    assert report.deviations == [0.0]
    assert report.passed


def test_refine_records_invalid_rungs(small_config):
    unstable = small_config.with_overrides(["dt=0.2"])
    report = ConvergenceAnalyzer(unstable).refine([1.0, 2.0], [1.0, 2.0])
    # the widened band pushes dt * k_max past the stability guard
    assert report.rungs[-1].status == "invalid"
    assert not report.passed


def test_refine_records_unexpected_errors(small_config, monkeypatch):
    def broken_run(config, window=None):
        raise KeyError("ratio")

    monkeypatch.setattr(analyzer_module, "run_scenario", broken_run)
    report = ConvergenceAnalyzer(small_config).refine([1.0, 2.0])
    assert [r.status for r in report.rungs] == ["failed", "failed"]
    assert report.rungs[0].error.startswith("KeyError")
    assert not report.passed


class DeadWorkers:
    """Executor whose futures fail the way a crashed worker pool does."""

    def __init__(self, max_workers):
        self.max_workers = max_workers

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False

    def submit(self, fn, *args):
        future = Future()
        future.set_exception(BrokenProcessPool("worker terminated abruptly"))
        return future


def test_refine_records_dead_workers(small_config, monkeypatch):
    monkeypatch.setattr(analyzer_module, "ProcessPoolExecutor", DeadWorkers)
    report = ConvergenceAnalyzer(small_config, parallel=2).refine([1.0, 2.0])
    assert [(r.density_factor, r.status) for r in report.rungs] == [(1.0, "failed"), (2.0, "failed")]
    assert report.rungs[1].n_k == 2 * small_config.n_k
    assert "BrokenProcessPool" in report.rungs[1].error
