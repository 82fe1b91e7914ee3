import sys
import argparse
import dataclasses
import traceback
from pathlib import Path
from typing import List, Optional
from utils import logger, ensure_dir, write_json, SimulationError
from config import OUTPUT_DIR, ScenarioConfig, SWEEP_PARAMETERS, preset, list_presets, load_config
from scripts import run_scenario, sweep
from data_analysis import ConvergenceAnalyzer, ConvergenceReporter
from oracle import oracle_check

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_INTEGRATION_FAILURE = 2


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--preset", help="Named scenario to start from (see the presets command)")
    scenario.add_argument("--config", type=Path, help="key = value scenario file applied on top of the preset")
    scenario.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                          help="Override one scenario field (repeatable)")
    scenario.add_argument("--ks-eta-convention", action="store_true",
                          help="Use eta_k without the factor 10 (the KS caption convention)")
    scenario.add_argument("--out", type=Path, help="Output directory (default under ZENO_OUTPUT_DIR)")

    parser = argparse.ArgumentParser(
        description="Zeno effect by indirect measurement: atom, photon continuum and detector continuum."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[scenario], help="Run one scenario and write its series")
    run.add_argument("--check-free-decay", action="store_true",
                     help="Also compare the golden-rule rate with a detector-free companion run")

    commands.add_parser("intensity", parents=[scenario], help="Run one scenario and write the photon intensity map")

    sweep_cmd = commands.add_parser("sweep", parents=[scenario], help="Run one scenario per parameter value")
    sweep_cmd.add_argument("parameter", choices=sorted(SWEEP_PARAMETERS))
    sweep_cmd.add_argument("values", type=_float_list, help="Comma-separated values, e.g. 0,16.5,33,66")
    sweep_cmd.add_argument("--parallel", type=int, default=1, help="Worker processes")

    converge = commands.add_parser("converge", parents=[scenario], help="Check the plateau under grid refinement")
    converge.add_argument("--density", type=_float_list, default=[1.0, 2.0, 4.0], help="Density factors")
    converge.add_argument("--range", dest="range_factors", type=_float_list, default=[1.0], help="Range factors")
    converge.add_argument("--parallel", type=int, default=1, help="Worker processes")

    oracle = commands.add_parser("oracle-check", help="Compare the integrator with the dense propagator")
    oracle.add_argument("--n-k", type=int, default=4)
    oracle.add_argument("--n-w", type=int, default=3)
    oracle.add_argument("--t", type=float, default=10.0)
    oracle.add_argument("--dt", type=float, default=0.001)
    oracle.add_argument("--out", type=Path, help="Output directory (default under ZENO_OUTPUT_DIR)")

    commands.add_parser("presets", help="List the named scenarios")
    return parser.parse_args(argv)


def resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    """
    Apply preset, config file, --set overrides and --ks-eta-convention in that order.

    Raises:
        ValueError: on unknown presets, keys or invalid values
        OSError: if the config file cannot be read
    """
    config = preset(args.preset) if args.preset else ScenarioConfig()
    if args.config:
        config = load_config(args.config, base=config)
    config = config.with_overrides(args.overrides)
    if args.ks_eta_convention:
        config = dataclasses.replace(config, ks_eta_convention=True)
    return config.validate()


def main(argv: Optional[List[str]] = None) -> int:
    """Main function for the Zeno simulator CLI."""
    args = parse_args(argv)

    if args.command == "presets":
        for name, description in list_presets().items():
            print(f"{name:<16} {description}")
        return EXIT_OK

    if args.command == "oracle-check":
        out_dir = args.out or OUTPUT_DIR / "oracle-check"
        try:
            oracle_report = oracle_check(args.n_k, args.n_w, args.t, args.dt)
        except ValueError as e:
            logger.error(f"Invalid oracle instance: {e}")
            return EXIT_CONFIG_ERROR
        except SimulationError as e:
            logger.error(f"Oracle check failed: {e}")
            logger.debug(traceback.format_exc())
            return EXIT_INTEGRATION_FAILURE
        if ensure_dir(out_dir) is None or not write_json(out_dir / "oracle_check.json", oracle_report.to_dict()):
            return EXIT_CONFIG_ERROR
        return EXIT_OK if oracle_report.passed else EXIT_INTEGRATION_FAILURE

    # Resolve the scenario
    try:
        config = resolve_config(args)
    except (ValueError, OSError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    logger.info(f"Resolved scenario '{config.name}'")

    try:
        if args.command in ("run", "intensity"):
            out_dir = args.out or OUTPUT_DIR / config.name
            result = run_scenario(config, out_dir=out_dir, with_intensity=args.command == "intensity",
                                  check_free_decay=getattr(args, "check_free_decay", False))
            logger.info("Outputs written to %s (plateau %.4f)", out_dir, result.plateau)
            return EXIT_OK

        if args.command == "sweep":
            out_dir = args.out or OUTPUT_DIR / f"{config.name}-sweep-{args.parameter}"
            table = sweep(config, args.parameter, args.values, parallel=args.parallel, out_dir=out_dir)
            return EXIT_OK if (table["status"] == "ok").all() else EXIT_INTEGRATION_FAILURE

        if args.command == "converge":
            out_dir = args.out or OUTPUT_DIR / f"{config.name}-convergence"
            analyzer = ConvergenceAnalyzer(config, parallel=args.parallel, logger=logger)
            report = analyzer.refine(args.density, args.range_factors)
            reporter = ConvergenceReporter(logger)
            if not reporter.save_report(report, out_dir):
                return EXIT_CONFIG_ERROR
            print(reporter.generate_report(report))
            return EXIT_OK if report.passed else EXIT_INTEGRATION_FAILURE

    except (ValueError, OSError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except SimulationError as e:
        logger.error(f"Integration failed: {e}")
        logger.debug(traceback.format_exc())
        return EXIT_INTEGRATION_FAILURE

    logger.error(f"Unknown command '{args.command}'")
    return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    # Run the main function and exit with its code
    sys.exit(main())
