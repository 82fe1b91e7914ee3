"""
Tests for scenario configuration, presets, sweeps and the command line.
"""
import sys
import json
import math
import dataclasses
from concurrent.futures import Future
from concurrent.futures.process import BrokenProcessPool
from pathlib import Path
import pandas as pd
import pytest

# Add the parent directory to sys.path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import ScenarioConfig, preset, list_presets, load_config, save_config
from constants import FINITE_KERNEL_AMPLITUDE
from scripts import run_scenario, sweep, sweep_configs, SERIES_COLUMNS
from scripts import s09_sweep
from main import main, EXIT_OK, EXIT_CONFIG_ERROR, EXIT_INTEGRATION_FAILURE

# A quick run: coarse detector grid, so the recurrence guard has to be lifted
SMALL_RUN = ["n_k=20", "n_w=4", "t_end=12", "sample_stride=50", "allow_recurrence=true"]


@pytest.fixture
def small_config():
    return ScenarioConfig(name="small").with_overrides(SMALL_RUN)


def test_presets_are_listed():
    names = list_presets()
    for name in ("free-decay", "ks-fig2-eta1", "ks-fig2-eta10", "fig3-a", "fig3-b", "fig3-c", "fig3-d"):
        assert name in names
        assert names[name]


def test_every_preset_is_valid():
    for name in list_presets():
        config = preset(name)
        assert config.name == name
        assert config.t_end < 0.7 * config.recurrence_time


def test_ks_preset():
    config = preset("ks-fig2-eta10")
    assert config.kernel_kind == "delta"
    assert config.x_d == 0.0
    assert config.eta_peak == pytest.approx(10 * config.gamma_free)
    assert config.delta_bw == pytest.approx(100 * config.gamma_free / (2 * math.pi))
    assert preset("ks-fig2-eta1").eta_peak == pytest.approx(config.gamma_free)


def test_finite_detector_presets():
    a, d = preset("fig3-a"), preset("fig3-d")
    assert a.kernel_kind == d.kernel_kind == "gaussian"
    assert a.kernel_amplitude == pytest.approx(FINITE_KERNEL_AMPLITUDE)
    assert a.kernel_width == pytest.approx(0.11)
    assert a.x_d == 0.0
    assert preset("fig3-b").x_d == pytest.approx(-16.5)
    assert preset("fig3-c").x_d == pytest.approx(-33.0)
    assert d.x_d == pytest.approx(-66.0)


def test_unknown_preset_lists_names():
    with pytest.raises(ValueError, match="fig3-a"):
        preset("fig9")


def test_validate_collects_every_problem():
    with pytest.raises(ValueError) as excinfo:
        ScenarioConfig(gamma_free=-1.0, sharpness=3, kernel_kind="box").validate()
    message = str(excinfo.value)
    assert "gamma_free" in message
    assert "sharpness" in message
    assert "kernel_kind" in message


def test_stability_guard_suggests_step():
    with pytest.raises(ValueError, match="stability guard"):
        ScenarioConfig(dt=0.3).validate()
    ScenarioConfig(dt=0.24).validate()


def test_recurrence_guard():
    config = ScenarioConfig(t_end=250.0)
    with pytest.raises(ValueError, match="allow_recurrence"):
        config.validate()
    dataclasses.replace(config, allow_recurrence=True).validate()


def test_recurrence_time_uses_coarser_grid():
    config = ScenarioConfig(n_k=100, n_w=10)
    assert config.recurrence_time == pytest.approx(2 * math.pi / 0.2)


def test_eta_scale_convention():
    assert ScenarioConfig().eta_scale == 10.0
    assert ScenarioConfig(ks_eta_convention=True).eta_scale == 1.0


def test_save_and_load_round_trip(tmp_path):
    config = dataclasses.replace(preset("fig3-c"), interaction_picture=True, dt=0.0123456789)
    path = tmp_path / "config.txt"
    assert save_config(config, path)
    assert path.read_text(encoding="utf-8").startswith("#")
    assert load_config(path) == config


def test_load_config_applies_on_top_of_base(tmp_path):
    path = tmp_path / "partial.txt"
    path.write_text("# only two keys\nx_d = 10\nn_k = 50  # fewer modes\n", encoding="utf-8")
    config = load_config(path, base=preset("fig3-a"))
    assert config.x_d == 10.0
    assert config.n_k == 50
    assert config.kernel_kind == "gaussian"


def test_load_config_rejects_duplicates(tmp_path):
    path = tmp_path / "dup.txt"
    path.write_text("x_d = 1\nx_d = 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        load_config(path)


def test_overrides():
    config = ScenarioConfig().with_overrides(["n_k=50", "interaction_picture = yes", "kernel_kind=gaussian"])
    assert config.n_k == 50 and isinstance(config.n_k, int)
    assert config.interaction_picture is True
    assert config.kernel_kind == "gaussian"


@pytest.mark.parametrize("assignment, message", [
    ("bogus=1", "Unknown config keys"),
    ("interaction_picture=maybe", "not a boolean"),
    ("n_k=2.5", "not an integer"),
    ("x_d=far", "Bad value"),
    ("no equals sign", "key = value"),
])
def test_bad_overrides(assignment, message):
    with pytest.raises(ValueError, match=message):
        ScenarioConfig().with_overrides([assignment])


def test_sweep_configs():
    configs = sweep_configs(ScenarioConfig(name="base"), "x_d", [0, 16.5, -33])
    assert [c.x_d for c in configs] == [0.0, 16.5, -33.0]
    assert [c.name for c in configs] == ["base-x_d-0", "base-x_d-16p5", "base-x_d-m33"]
    with pytest.raises(ValueError, match="Cannot sweep"):
        sweep_configs(ScenarioConfig(), "gamma_free", [1.0])
    with pytest.raises(ValueError, match="at least one"):
        sweep_configs(ScenarioConfig(), "x_d", [])


def test_run_scenario_without_detector(small_config):
    config = dataclasses.replace(small_config, eta_peak=0.0)
    result = run_scenario(config)
    assert result.trajectory.norm_drift < 1e-8
    assert result.trajectory.detector[-1] == 0.0
    assert result.ratio.values[0] == 0.0
    assert result.summary()["status"] == "ok"


def test_run_scenario_rejects_invalid_config():
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(dt=0.3))


def test_sweep_records_each_point(small_config, tmp_path):
    table = sweep(small_config, "delta_bw", [0.3, -1.0], out_dir=tmp_path)
    assert list(table.columns) == ["parameter", "value", "plateau", "status", "error"]
    assert list(table["status"]) == ["ok", "invalid"]
    assert "delta_bw" in table.loc[1, "error"]
    assert math.isfinite(table.loc[0, "plateau"])

    written = pd.read_csv(tmp_path / "sweep_summary.csv")
    assert len(written) == 2
    assert (tmp_path / "small-delta_bw-0p3" / "series.csv").exists()


def test_cli_presets(capsys):
    assert main(["presets"]) == EXIT_OK
    assert "ks-fig2-eta10" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["run", "--preset", "fig9"],
    ["run", "--set", "bogus=1"],
    ["run", "--set", "dt=0.3"],
])
def test_cli_config_errors(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == EXIT_CONFIG_ERROR


def test_cli_config_file_must_exist(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.txt"), "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR


def test_cli_integration_failure(tmp_path):
    assert main(["run", "--set", "dt=0.24", "--out", str(tmp_path)]) == EXIT_INTEGRATION_FAILURE


def test_cli_run_writes_outputs(tmp_path):
    argv = ["run", "--out", str(tmp_path)]
    for assignment in SMALL_RUN:
        argv += ["--set", assignment]
    assert main(argv) == EXIT_OK

    series = pd.read_csv(tmp_path / "series.csv")
    assert list(series.columns) == SERIES_COLUMNS
    assert series["t"].iloc[0] == 0.0
    assert series["P_e"].iloc[0] == pytest.approx(1.0)

    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["scenario"] == "custom"
    assert load_config(tmp_path / "config.txt") == ScenarioConfig().with_overrides(SMALL_RUN)


def test_cli_intensity(tmp_path):
    argv = ["intensity", "--out", str(tmp_path), "--ks-eta-convention"]
    for assignment in SMALL_RUN:
        argv += ["--set", assignment]
    assert main(argv) == EXIT_OK
    intensity = pd.read_csv(tmp_path / "intensity.csv")
    assert list(intensity.columns) == ["x", "t", "I"]
    assert (intensity["I"] >= 0).all()
    assert "ks_eta_convention = true" in (tmp_path / "config.txt").read_text(encoding="utf-8")


def test_cli_oracle_check(tmp_path):
    argv = ["oracle-check", "--n-k", "2", "--n-w", "2", "--t", "1", "--dt", "0.001", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    report = json.loads((tmp_path / "oracle_check.json").read_text(encoding="utf-8"))
    assert report["passed"] is True
    assert report["max_deviation"] < 1e-8


class BrokenPool:
    """Executor whose workers all die before returning."""

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


def test_sweep_survives_unexpected_errors(small_config, monkeypatch):
    real_run = s09_sweep.run_scenario

    def flaky_run(config, out_dir=None):
        if config.x_d > 0:
            raise KeyError("missing column")
        return real_run(config, out_dir=out_dir)

    monkeypatch.setattr(s09_sweep, "run_scenario", flaky_run)
    table = sweep(small_config, "x_d", [0.0, 5.0, -5.0])
    assert list(table["status"]) == ["ok", "failed", "ok"]
    assert "KeyError" in table.loc[1, "error"]


def test_sweep_records_dead_workers(small_config, monkeypatch, tmp_path):
    monkeypatch.setattr(s09_sweep, "ProcessPoolExecutor", BrokenPool)
    table = sweep(small_config, "x_d", [0.0, 16.5], parallel=2, out_dir=tmp_path)
    assert list(table["status"]) == ["failed", "failed"]
    assert all("BrokenProcessPool" in error for error in table["error"])
    assert len(pd.read_csv(tmp_path / "sweep_summary.csv")) == 2
