"""
nsdg command line.

Main process: loads config.yaml, sets up the main logger and dispatches the subcommands
run, convergence, rates and verify-forcing.
"""

import argparse
import pathlib
import sys

from modules.harness import report
from modules.harness import study
from modules.harness import study_config
from modules.logger import logger
from modules.logger import logger_main_setup
from modules.manufactured import forcing_oracle
from modules.manufactured import manufactured_case
from modules.read_yaml import read_yaml


# Random space-time points for verify-forcing
FORCING_SAMPLES = 200
FORCING_TOLERANCE = 1.0e-6


def build_parser() -> argparse.ArgumentParser:
    """
    Subcommand parser.
    """
    parser = argparse.ArgumentParser(
        prog="nsdg",
        description="H(div)-DG space-time Navier-Stokes solver and manufactured-solution studies",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="Solve one discretization of a study")
    convergence_parser = subparsers.add_parser("convergence", help="Run a refinement study")
    for study_parser in (run_parser, convergence_parser):
        study_parser.add_argument("--config", required=True, type=pathlib.Path)
        study_parser.add_argument("--out", dest="output_directory", default=None)
        study_parser.add_argument(
            "--scheme", choices=["fully_implicit", "semi_implicit"], default=None
        )
        study_parser.add_argument("--k", type=int, choices=[1, 2], default=None)
        study_parser.add_argument(
            "--no-wall-time",
            action="store_true",
            help="Write 0 for wall_seconds so identical studies give identical files",
        )
    convergence_parser.add_argument(
        "--mode", choices=[mode.value for mode in study_config.StudyMode], default=None
    )

    rates_parser = subparsers.add_parser("rates", help="Rate table of a results CSV")
    rates_parser.add_argument("csv_path", type=pathlib.Path)

    forcing_parser = subparsers.add_parser(
        "verify-forcing", help="Compare a closed-form forcing with finite differences"
    )
    forcing_parser.add_argument("--case", required=True, choices=list(manufactured_case.CASE_NAMES))
    forcing_parser.add_argument("--nu", type=float, default=1.0)
    forcing_parser.add_argument("--samples", type=int, default=FORCING_SAMPLES)
    forcing_parser.add_argument("--tolerance", type=float, default=FORCING_TOLERANCE)

    return parser


def load_study(
    arguments: argparse.Namespace, config: dict, main_logger: logger.Logger
) -> "tuple[True, study_config.StudyConfig] | tuple[False, None]":
    """
    Study file with config.yaml solver defaults and CLI overrides.
    """
    result, settings = read_yaml.open_config(arguments.config)
    if not result:
        main_logger.error(f"Failed to load study file {arguments.config}")
        return False, None

    # Get Pylance to stop complaining
    assert settings is not None

    settings.setdefault(
        "output_directory", config.get("harness", {}).get("output_directory", "results")
    )
    overrides = {
        "output_directory": arguments.output_directory,
        "scheme": arguments.scheme,
        "k": arguments.k,
        "mode": getattr(arguments, "mode", None),
    }
    result, parsed = study_config.StudyConfig.create(settings, config.get("solver", {}), overrides)
    if not result:
        main_logger.error(f"Invalid study file {arguments.config}")
        return False, None

    return True, parsed


def command_run(arguments: argparse.Namespace, config: dict, main_logger: logger.Logger) -> int:
    """
    nsdg run.
    """
    result, parsed = load_study(arguments, config, main_logger)
    if not result:
        return -1

    # Get Pylance to stop complaining
    assert parsed is not None

    result, levels = parsed.levels()
    if not result or len(levels) != 1:
        main_logger.error("nsdg run needs exactly one mesh, one tau and one nu")
        return -1

    result, run = study.run_single(parsed, levels[0], main_logger)
    if not result:
        return -2

    # Get Pylance to stop complaining
    assert run is not None

    result, emitted = report.emit_report(
        [run],
        parsed.output_directory,
        f"{parsed.case}_{run.scheme}_run",
        main_logger,
        record_wall_time=not arguments.no_wall_time,
    )
    if not result:
        return -3

    print(emitted.summary, end="")
    return 0


def command_convergence(
    arguments: argparse.Namespace, config: dict, main_logger: logger.Logger
) -> int:
    """
    nsdg convergence; fails unless every level finished and every band passed.
    """
    result, parsed = load_study(arguments, config, main_logger)
    if not result:
        return -1

    # Get Pylance to stop complaining
    assert parsed is not None

    result, outcome = study.run_convergence(
        parsed, main_logger, study.worker_count_from_environment()
    )
    if not result:
        return -1

    # Get Pylance to stop complaining
    assert outcome is not None

    if outcome.results:
        result, emitted = report.emit_report(
            outcome.results,
            parsed.output_directory,
            f"{parsed.case}_{parsed.solver.scheme.value}_{parsed.mode.value}",
            main_logger,
            outcome.checks,
            record_wall_time=not arguments.no_wall_time,
        )
        if not result:
            return -3

        print(emitted.summary, end="")

    if not outcome.complete:
        main_logger.error(
            f"Study stopped after {len(outcome.results)} of {outcome.level_count} levels"
        )
        return -2

    if not outcome.passed:
        main_logger.error("At least one expected band failed")
        return -4

    return 0


def command_rates(arguments: argparse.Namespace, main_logger: logger.Logger) -> int:
    """
    nsdg rates.
    """
    result, rows = report.read_results_csv(arguments.csv_path, main_logger)
    if not result:
        return -1

    # Get Pylance to stop complaining
    assert rows is not None

    table = report.rate_table(rows)
    if not table:
        main_logger.warning("Neither h nor tau decreases down the rows, no rates")

    print(report.summary_text(rows, table, []), end="")
    print(report.rates_csv(table), end="")
    return 0


def command_verify_forcing(arguments: argparse.Namespace, main_logger: logger.Logger) -> int:
    """
    nsdg verify-forcing.
    """
    result, case = manufactured_case.manufactured_case(arguments.case, arguments.nu)
    if not result:
        main_logger.error(f"Unknown case {arguments.case}")
        return -1

    # Get Pylance to stop complaining
    assert case is not None

    residual = forcing_oracle.verify_forcing(case, arguments.samples)
    print(f"{arguments.case}: max |f - f_fd| = {residual:.3e}")
    if residual > arguments.tolerance:
        main_logger.error(
            f"Forcing of {arguments.case} disagrees with finite differences: {residual:.3e}"
        )
        return -1

    return 0


def main(argv: "list[str] | None" = None) -> int:
    """
    Main function.
    """
    arguments = build_parser().parse_args(argv)

    # Configuration settings
    result, config = read_yaml.open_config(logger.CONFIG_FILE_PATH)
    if not result:
        print("ERROR: Failed to load configuration file")
        return -1

    # Get Pylance to stop complaining
    assert config is not None

    # Setup main logger
    result, main_logger, _ = logger_main_setup.setup_main_logger(config)
    if not result:
        print("ERROR: Failed to create main logger")
        return -1

    # Get Pylance to stop complaining
    assert main_logger is not None

    if arguments.command == "run":
        return command_run(arguments, config, main_logger)

    if arguments.command == "convergence":
        return command_convergence(arguments, config, main_logger)

    if arguments.command == "rates":
        return command_rates(arguments, main_logger)

    return command_verify_forcing(arguments, main_logger)


def console_main() -> None:
    """
    Entry point of the nsdg script; exit code 0 only on success.
    """
    result_main = main()
    if result_main < 0:
        print(f"Failed with return code {result_main}")
    else:
        print("Success!")

    sys.exit(0 if result_main == 0 else 1)


if __name__ == "__main__":
    console_main()
