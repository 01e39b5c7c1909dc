"""
Single runs and convergence studies of the manufactured cases.
"""

import math
import multiprocessing as mp
import os
import pathlib
import time

import numpy as np

from . import study_config
from ..analysis import errors
from ..logger import logger
from ..manufactured import manufactured_case
from ..mesh import mesh
from ..mesh import triangle_format
from ..solver import solver_config
from ..solver import space_time_solver
from ..spaces import pressure_space
from ..spaces import velocity_space
from ..timedisc import time_grid
from utilities.workers import queue_proxy_wrapper
from utilities.workers import worker_controller
from utilities.workers import worker_manager


# Caps the number of level worker processes
THREADS_ENVIRONMENT_VARIABLE = "NSDG_THREADS"

# Seconds between checks of the result queue
RESULT_POLL_TIMEOUT = 0.5


class RunResult:  # pylint: disable=too-many-instance-attributes
    """
    Error report and metadata of one completed run.
    """

    def __init__(
        self,
        study: study_config.StudyConfig,
        level: study_config.LevelSpec,
        h: float,
        report: errors.ErrorReport,
        slab_iterations: "list[int]",
        linear_solves: int,
        wall_seconds: float,
    ) -> None:
        self.level_index = level.index
        self.case = study.case
        self.scheme = study.solver.scheme.value
        self.degree = study.degree
        self.time_degree = study.time_degree
        self.viscosity = level.viscosity
        self.h = h
        self.tau = level.tau
        self.mesh_source = repr(level.mesh_source)
        self.report = report
        self.slab_iterations = slab_iterations
        self.fp_iters_total = int(sum(slab_iterations))
        self.linear_solves = linear_solves
        self.wall_seconds = wall_seconds

    def component(self, name: str) -> float:
        """
        Error component by CSV column name; a_norm and gamma_jump are square roots.
        """
        values = {
            "err_u": self.report.err_u,
            "linf_l2": self.report.linf_l2_velocity,
            "a_norm": math.sqrt(self.report.a_norm_sq_weighted),
            "gamma_jump": math.sqrt(self.report.gamma_jump_sq),
            "p_final": self.report.pressure_l2_final,
        }
        return values[name]

    def to_row(self) -> dict:
        """
        CSV row values keyed by column name.
        """
        row = {
            "case": self.case,
            "scheme": self.scheme,
            "k": self.degree,
            "ell": self.time_degree,
            "nu": self.viscosity,
            "h": self.h,
            "tau": self.tau,
        }
        for name in study_config.RATE_COMPONENTS:
            row[name] = self.component(name)
        row["max_div"] = self.report.max_divergence
        row["fp_iters_total"] = self.fp_iters_total
        row["wall_seconds"] = self.wall_seconds
        return row

    def __repr__(self) -> str:
        return (
            f"level {self.level_index} ({self.mesh_source}, tau={self.tau}, nu={self.viscosity}): "
            f"{self.report}, fp_iters_total: {self.fp_iters_total}"
        )


class StudyCheck:
    """
    Pass/fail of one expected band.
    """

    def __init__(self, name: str, values: "list[float]", low: float, high: float) -> None:
        self.name = name
        self.values = values
        self.low = low
        self.high = high
        self.passed = len(values) > 0 and all(
            not math.isnan(value) and low <= value <= high for value in values
        )

    def __repr__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{value:.3f}" for value in self.values)
        return f"{status} {self.name}: [{shown}] in [{self.low}, {self.high}]"


class StudyResult:
    """
    Completed runs in config order, their empirical rates and band checks.
    """

    def __init__(
        self,
        study: study_config.StudyConfig,
        level_count: int,
        results: "list[RunResult]",
        rates: "dict[str, list[float]]",
        checks: "list[StudyCheck]",
    ) -> None:
        self.study = study
        self.level_count = level_count
        self.results = results
        self.rates = rates
        self.checks = checks

    @property
    def complete(self) -> bool:
        """
        Whether every level finished.
        """
        return len(self.results) == self.level_count

    @property
    def passed(self) -> bool:
        """
        Every level finished and every check passed.
        """
        return self.complete and all(check.passed for check in self.checks)


def worker_count_from_environment() -> int:
    """
    NSDG_THREADS as a positive integer, 1 when unset or invalid.
    """
    try:
        count = int(os.environ.get(THREADS_ENVIRONMENT_VARIABLE, "1"))
    except ValueError:
        return 1

    return max(count, 1)


def load_mesh(
    source: study_config.MeshSource, local_logger: logger.Logger
) -> "tuple[True, mesh.Mesh] | tuple[False, None]":
    """
    Generate or read the mesh of a level.
    """
    if source.is_structured:
        return mesh.build_structured_mesh(source.cells_per_side)

    return triangle_format.load_triangle_mesh_files(
        pathlib.Path(source.node_path), pathlib.Path(source.ele_path), local_logger
    )


def run_single(
    study: study_config.StudyConfig,
    level: study_config.LevelSpec,
    local_logger: logger.Logger,
) -> "tuple[True, RunResult] | tuple[False, None]":
    """
    Solve one discretization of the study case and measure its errors.
    """
    result, level_mesh = load_mesh(level.mesh_source, local_logger)
    if not result:
        local_logger.error(f"Failed to load mesh for {level}")
        return False, None

    # Get Pylance to stop complaining
    assert level_mesh is not None

    result, velocities = velocity_space.build_velocity_space(level_mesh, study.degree)
    if not result:
        local_logger.error(f"Failed to build RT_{study.degree} space")
        return False, None

    # Get Pylance to stop complaining
    assert velocities is not None

    result, pressures = pressure_space.build_pressure_space(level_mesh, study.degree)
    assert result and pressures is not None

    _, slab_count = study.slab_count(level.tau)
    result, grid = time_grid.TimeGrid.uniform(study.final_time, slab_count, study.time_degree)
    if not result:
        local_logger.error(f"Failed to build time grid for {level}")
        return False, None

    # Get Pylance to stop complaining
    assert grid is not None

    result, case = manufactured_case.manufactured_case(study.case, level.viscosity)
    if not result:
        local_logger.error(f"Unknown case {study.case}")
        return False, None

    # Get Pylance to stop complaining
    assert case is not None

    result, flow = manufactured_case.flow_problem(case, velocities, pressures, grid)
    if not result:
        local_logger.error(f"Failed to set up the flow problem for {level}")
        return False, None

    # Get Pylance to stop complaining
    assert flow is not None

    local_logger.info(f"Running {study.case} {study.solver.scheme.value} {level}")
    start = time.perf_counter()
    if study.solver.scheme == solver_config.Scheme.SEMI_IMPLICIT:
        result, solution = space_time_solver.run_semi_implicit(flow, study.solver, local_logger)
    else:
        result, solution = space_time_solver.run_fully_implicit(flow, study.solver, local_logger)
    wall_seconds = time.perf_counter() - start

    if not result:
        local_logger.error(f"Solver failed for {level}")
        return False, None

    # Get Pylance to stop complaining
    assert solution is not None

    report = errors.error_energy(solution, case)
    run = RunResult(
        study,
        level,
        level_mesh.h,
        report,
        solution.iteration_counts(),
        solution.linear_solve_count,
        wall_seconds,
    )
    local_logger.info(f"{run}, wall_seconds: {wall_seconds:.3f}")
    return True, run


def _run_levels_serial(
    study: study_config.StudyConfig,
    levels: "list[study_config.LevelSpec]",
    local_logger: logger.Logger,
) -> "list[RunResult]":
    completed = []
    for level in levels:
        result, run = run_single(study, level, local_logger)
        if not result:
            local_logger.error(f"Study aborted at level {level.index}")
            break

        completed.append(run)

    return completed


def _run_levels_parallel(
    study: study_config.StudyConfig,
    levels: "list[study_config.LevelSpec]",
    worker_count: int,
    local_logger: logger.Logger,
) -> "list[RunResult]":
    # study_worker imports this module
    from . import study_worker  # pylint: disable=import-outside-toplevel

    controller = worker_controller.WorkerController()
    mp_manager = mp.Manager()
    input_queue = queue_proxy_wrapper.QueueProxyWrapper(mp_manager)
    output_queue = queue_proxy_wrapper.QueueProxyWrapper(mp_manager)

    input_queue.put_all(levels)
    input_queue.fill_queue_with_sentinel(worker_count)

    result, properties = worker_manager.WorkerProperties.create(
        worker_count,
        study_worker.study_worker,
        (study,),
        input_queue,
        output_queue,
        controller,
        local_logger,
    )
    if not result:
        return []

    # Get Pylance to stop complaining
    assert properties is not None

    result, manager = worker_manager.WorkerManager.create(properties, local_logger)
    if not result:
        return []

    # Get Pylance to stop complaining
    assert manager is not None

    manager.start_workers()

    by_index = dict(manager.collect(len(levels), RESULT_POLL_TIMEOUT))
    manager.join_workers()
    mp_manager.shutdown()

    if controller.has_failed():
        local_logger.error("A study level failed, keeping completed levels")

    return [by_index[level.index] for level in levels if by_index.get(level.index) is not None]


def _rates(
    study: study_config.StudyConfig, runs: "list[RunResult]"
) -> "dict[str, list[float]]":
    if study.mode == study_config.StudyMode.NU_SWEEP or len(runs) < 2:
        return {}

    rates = {name: [] for name in study_config.RATE_COMPONENTS}
    for first, second in zip(runs, runs[1:]):
        # No rate across a failed level
        if second.level_index != first.level_index + 1:
            continue

        if study.mode == study_config.StudyMode.SPACE_TIME:
            sizes = [first.h, second.h]
        else:
            sizes = [first.tau, second.tau]

        for name in study_config.RATE_COMPONENTS:
            result, values = errors.convergence_rates(
                [first.component(name), second.component(name)], sizes
            )
            rates[name].append(values[0] if result else math.nan)

    return rates


def _checks(
    study: study_config.StudyConfig,
    runs: "list[RunResult]",
    rates: "dict[str, list[float]]",
) -> "list[StudyCheck]":
    checks = []
    for name, (low, high) in study.rate_bands.items():
        window = rates.get(name, [])[-study.rate_window :]
        checks.append(StudyCheck(f"{name} rate", window, low, high))

    if study.mode == study_config.StudyMode.NU_SWEEP:
        plateau = [run.report.err_u for run in runs if run.viscosity <= study.plateau_max_nu]
        if len(plateau) >= 2:
            spread = (max(plateau) - min(plateau)) / min(plateau) if min(plateau) > 0.0 else 0.0
            checks.append(
                StudyCheck("err_u plateau spread", [spread], 0.0, study.plateau_tolerance)
            )

    return checks


def run_convergence(
    study: study_config.StudyConfig,
    local_logger: logger.Logger,
    worker_count: int = 1,
) -> "tuple[True, StudyResult] | tuple[False, None]":
    """
    Run every level of the study, then compute rates and band checks.

    A failed level stops the study; completed levels are kept in the result.
    """
    result, levels = study.levels()
    if not result:
        local_logger.error(f"Study levels are inconsistent for mode {study.mode.value}")
        return False, None

    # Get Pylance to stop complaining
    assert levels is not None

    if len(levels) < 2:
        local_logger.error("A convergence study needs at least 2 levels")
        return False, None

    worker_count = min(worker_count, len(levels))
    if worker_count > 1:
        local_logger.info(f"Running {len(levels)} levels on {worker_count} workers")
        runs = _run_levels_parallel(study, levels, worker_count, local_logger)
    else:
        runs = _run_levels_serial(study, levels, local_logger)

    rates = _rates(study, runs)
    checks = _checks(study, runs, rates)
    outcome = StudyResult(study, len(levels), runs, rates, checks)
    for check in checks:
        local_logger.info(repr(check))

    return True, outcome


def error_ratios(first: "list[RunResult]", second: "list[RunResult]") -> np.ndarray:
    """
    Pointwise err_u(second) / err_u(first) of two studies with the same levels.
    """
    return np.array([b.report.err_u / a.report.err_u for a, b in zip(first, second)])
