"""
CSV tables, rate tables and JSON metadata of runs.
"""

import csv
import io
import json
import math
import pathlib

from . import study
from . import study_config
from ..analysis import errors
from ..logger import logger


CSV_COLUMNS = (
    "case",
    "scheme",
    "k",
    "ell",
    "nu",
    "h",
    "tau",
    "err_u",
    "linf_l2",
    "a_norm",
    "gamma_jump",
    "p_final",
    "max_div",
    "fp_iters_total",
    "wall_seconds",
)

TEXT_COLUMNS = ("case", "scheme")
INTEGER_COLUMNS = ("k", "ell", "fp_iters_total")

RATE_COLUMNS = ("from_level", "to_level", "size", "size_from", "size_to") + tuple(
    study_config.RATE_COMPONENTS
)


class RateRow:
    """
    Empirical rates between two consecutive rows.
    """

    def __init__(
        self,
        from_level: int,
        size_name: str,
        size_from: float,
        size_to: float,
        rates: "dict[str, float]",
    ) -> None:
        self.from_level = from_level
        self.to_level = from_level + 1
        self.size_name = size_name
        self.size_from = size_from
        self.size_to = size_to
        self.rates = rates


class EmittedReport:
    """
    Paths written by emit_report and the summary text.
    """

    def __init__(
        self,
        csv_path: pathlib.Path,
        rates_path: "pathlib.Path | None",
        metadata_path: pathlib.Path,
        summary: str,
    ) -> None:
        self.csv_path = csv_path
        self.rates_path = rates_path
        self.metadata_path = metadata_path
        self.summary = summary


def format_value(value: "float | int | str") -> str:
    """
    Locale-independent text of a CSV cell.
    """
    if isinstance(value, str):
        return value

    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)

    if math.isnan(value):
        return "nan"

    return f"{value:.10e}"


def _refinement_size(rows: "list[dict]") -> "str | None":
    for name in ("h", "tau"):
        sizes = [row[name] for row in rows]
        if all(sizes[i + 1] < sizes[i] for i in range(len(sizes) - 1)):
            return name

    return None


def rate_table(rows: "list[dict]", levels: "list[int] | None" = None) -> "list[RateRow]":
    """
    Rates in h when h decreases down the rows, otherwise in tau when tau does.

    levels are the refinement indices of the rows (their positions by default); only rows
    with consecutive indices are paired. Rows with constant sizes (a viscosity sweep) have
    no rate table.
    """
    if len(rows) < 2:
        return []

    size_name = _refinement_size(rows)
    if size_name is None:
        return []

    if levels is None:
        levels = list(range(len(rows)))

    sizes = [row[size_name] for row in rows]
    table = []
    for i in range(len(rows) - 1):
        if levels[i + 1] != levels[i] + 1:
            continue

        rates = {}
        for name in study_config.RATE_COMPONENTS:
            result, values = errors.convergence_rates(
                [rows[i][name], rows[i + 1][name]], [sizes[i], sizes[i + 1]]
            )
            rates[name] = values[0] if result else math.nan

        table.append(RateRow(levels[i], size_name, sizes[i], sizes[i + 1], rates))

    return table


def results_csv(rows: "list[dict]") -> str:
    """
    Header and one line per row, in the given order.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_value(row[column]) for column in CSV_COLUMNS])

    return buffer.getvalue()


def rates_csv(table: "list[RateRow]") -> str:
    """
    Header and one line per consecutive pair of rows.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RATE_COLUMNS)
    for rate in table:
        writer.writerow(
            [
                str(rate.from_level),
                str(rate.to_level),
                rate.size_name,
                format_value(rate.size_from),
                format_value(rate.size_to),
            ]
            + [format_value(rate.rates[name]) for name in study_config.RATE_COMPONENTS]
        )

    return buffer.getvalue()


def summary_text(
    rows: "list[dict]", table: "list[RateRow]", checks: "list[study.StudyCheck]"
) -> str:
    """
    Human readable error and rate table.
    """
    header = ("level", "h", "tau", "nu", "err_u", "linf_l2", "p_final")
    widths = (5, 10, 10, 10, 12, 12, 12)
    lines = [" ".join(f"{name:>{width}}" for name, width in zip(header, widths))]
    for index, row in enumerate(rows):
        lines.append(
            f"{index:>5} {row['h']:>10.4e} {row['tau']:>10.4e} {row['nu']:>10.2e} "
            f"{row['err_u']:>12.4e} {row['linf_l2']:>12.4e} {row['p_final']:>12.4e}"
        )

    if table:
        lines.append(f"rates in {table[0].size_name}:")
        for rate in table:
            shown = " ".join(
                f"{name}={rate.rates[name]:.3f}" for name in study_config.RATE_COMPONENTS
            )
            lines.append(f"  {rate.from_level}->{rate.to_level}: {shown}")

    lines.extend(repr(check) for check in checks)
    return "\n".join(lines) + "\n"


def _metadata(
    runs: "list[study.RunResult]",
    checks: "list[study.StudyCheck]",
    record_wall_time: bool,
) -> dict:
    return {
        "runs": [
            {
                "level": run.level_index,
                "case": run.case,
                "scheme": run.scheme,
                "k": run.degree,
                "ell": run.time_degree,
                "nu": run.viscosity,
                "mesh": run.mesh_source,
                "h": run.h,
                "tau": run.tau,
                "err_u": run.report.err_u,
                "linf_l2": run.report.linf_l2_velocity,
                "a_norm_sq": run.report.a_norm_sq_weighted,
                "gamma_jump_sq": run.report.gamma_jump_sq,
                "p_final": run.report.pressure_l2_final,
                "max_div": run.report.max_divergence,
                "slab_iterations": run.slab_iterations,
                "fp_iters_total": run.fp_iters_total,
                "linear_solves": run.linear_solves,
                "wall_seconds": run.wall_seconds if record_wall_time else 0.0,
            }
            for run in runs
        ],
        "checks": [
            {
                "name": check.name,
                "values": check.values,
                "band": [check.low, check.high],
                "passed": check.passed,
            }
            for check in checks
        ],
    }


def emit_report(
    runs: "list[study.RunResult]",
    output_directory: "str | pathlib.Path",
    stem: str,
    local_logger: logger.Logger,
    checks: "list[study.StudyCheck] | None" = None,
    record_wall_time: bool = True,
) -> "tuple[True, EmittedReport] | tuple[False, None]":
    """
    Write <stem>.csv, <stem>_rates.csv (two or more refining runs) and <stem>.json.

    With record_wall_time False the wall_seconds cells are 0 and identical studies give
    byte-identical files.
    """
    if not runs:
        local_logger.error("No completed run to report")
        return False, None

    checks = checks or []
    rows = [run.to_row() for run in runs]
    if not record_wall_time:
        for row in rows:
            row["wall_seconds"] = 0.0

    table = rate_table(rows, [run.level_index for run in runs])
    directory = pathlib.Path(output_directory)
    csv_path = directory / f"{stem}.csv"
    rates_path = directory / f"{stem}_rates.csv" if table else None
    metadata_path = directory / f"{stem}.json"

    try:
        directory.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(results_csv(rows), encoding="utf-8")
        if rates_path is not None:
            rates_path.write_text(rates_csv(table), encoding="utf-8")
        metadata_path.write_text(
            json.dumps(_metadata(runs, checks, record_wall_time), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    except OSError as exception:
        local_logger.error(f"Could not write report to {directory}: {exception}")
        return False, None

    summary = summary_text(rows, table, checks)
    local_logger.info(f"Report written to {csv_path}")
    return True, EmittedReport(csv_path, rates_path, metadata_path, summary)


def read_results_csv(
    path: "str | pathlib.Path", local_logger: logger.Logger
) -> "tuple[True, list[dict]] | tuple[False, None]":
    """
    Parse a results CSV written by emit_report.
    """
    try:
        with open(path, newline="", encoding="utf-8") as file:
            reader = csv.DictReader(file)
            if reader.fieldnames is None or list(reader.fieldnames) != list(CSV_COLUMNS):
                local_logger.error(f"{path} does not have the results columns")
                return False, None

            rows = []
            for line_number, raw in enumerate(reader, start=2):
                try:
                    row = {}
                    for column in CSV_COLUMNS:
                        if column in TEXT_COLUMNS:
                            row[column] = raw[column]
                        elif column in INTEGER_COLUMNS:
                            row[column] = int(raw[column])
                        else:
                            row[column] = float(raw[column])
                except (TypeError, ValueError):
                    local_logger.error(f"{path}: malformed line {line_number}")
                    return False, None

                rows.append(row)
    except OSError as exception:
        local_logger.error(f"Could not read {path}: {exception}")
        return False, None

    return True, rows
