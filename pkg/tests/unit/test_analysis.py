"""
Test error quantities, energy norms, rates and the trajectory evaluator.
"""

import math

import numpy as np
import pytest

from modules.analysis import energy
from modules.analysis import errors
from modules.analysis import trajectory_field
from modules.assembly import convection
from modules.assembly import spatial
from modules.logger import logger
from modules.manufactured import manufactured_case
from modules.mesh import mesh
from modules.solver import problem
from modules.solver import solver_config
from modules.solver import space_time_solver
from modules.solver import trajectory
from modules.spaces import pressure_space
from modules.spaces import velocity_space
from modules.timedisc import slab_basis
from modules.timedisc import time_grid


def build_spaces(
    n: int, degree: int
) -> "tuple[velocity_space.VelocitySpace, pressure_space.PressureSpace]":
    """
    Velocity and pressure spaces on the structured n x n mesh.
    """
    result, target_mesh = mesh.build_structured_mesh(n)
    assert result
    assert target_mesh is not None

    result, velocities = velocity_space.build_velocity_space(target_mesh, degree)
    assert result
    assert velocities is not None

    result, pressures = pressure_space.build_pressure_space(target_mesh, degree)
    assert result
    assert pressures is not None
    return velocities, pressures


def build_trajectory(
    velocities: velocity_space.VelocitySpace,
    pressures: pressure_space.PressureSpace,
    breaks: "list[float]",
    time_degree: int,
    velocity: "np.ndarray | None" = None,
    pressure: "np.ndarray | None" = None,
) -> trajectory.Trajectory:
    """
    Trajectory holding the same coefficients at every node of every slab (zero by default).
    """
    if velocity is None:
        velocity = np.zeros(velocities.dimension)
    if pressure is None:
        pressure = np.zeros(pressures.dimension)

    result, grid = time_grid.TimeGrid.create(breaks, time_degree)
    assert result
    assert grid is not None

    source = trajectory.Trajectory(grid, velocities, pressures, 1.0, 10.0, velocity)
    nodes = time_degree + 1
    for slab_index in range(1, grid.slab_count + 1):
        result, basis = slab_basis.slab_basis(grid, slab_index)
        assert result
        assert basis is not None
        source.append(
            trajectory.SlabSolution(
                basis,
                np.tile(velocity, (nodes, 1)),
                np.tile(pressure, (nodes, 1)),
                np.full((nodes, velocities.mesh.facet_count), 1.0e-8),
                1,
                1,
            )
        )

    return source


def build_case(name: str, viscosity: float = 1.0) -> manufactured_case.ManufacturedCase:
    """
    Manufactured case that must exist.
    """
    result, case = manufactured_case.manufactured_case(name, viscosity)
    assert result
    assert case is not None
    return case


def build_flow(
    case: manufactured_case.ManufacturedCase,
    n: int,
    degree: int,
    time_degree: int,
    slab_count: int,
) -> problem.FlowProblem:
    """
    Flow problem of a case on the n x n mesh over [0, 1].
    """
    velocities, pressures = build_spaces(n, degree)
    result, grid = time_grid.TimeGrid.uniform(1.0, slab_count, time_degree)
    assert result
    assert grid is not None

    result, flow = manufactured_case.flow_problem(case, velocities, pressures, grid)
    assert result
    assert flow is not None
    return flow


def build_operators(flow: problem.FlowProblem) -> spatial.SpatialOperators:
    """
    Spatial operators with the default penalty 10 k^2.
    """
    degree = flow.velocity_space.degree
    result, operators = spatial.assemble_spatial(
        flow.velocity_space, flow.pressure_space, flow.viscosity, 10.0 * degree**2
    )
    assert result
    assert operators is not None
    return operators


def solve(
    flow: problem.FlowProblem,
    scheme: str,
    local_logger: logger.Logger,
    penalty: "float | None" = None,
) -> trajectory.Trajectory:
    """
    Trajectory of a solve that must succeed.
    """
    result, config = solver_config.SolverConfig.create(scheme, penalty=penalty)
    assert result
    assert config is not None

    if config.scheme == solver_config.Scheme.SEMI_IMPLICIT:
        result, source = space_time_solver.run_semi_implicit(flow, config, local_logger)
    else:
        result, source = space_time_solver.run_fully_implicit(flow, config, local_logger)
    assert result
    assert source is not None
    return source


class ShiftedPressure:
    """
    An exact solution with its pressure moved by a constant.
    """

    def __init__(self, case: manufactured_case.ManufacturedCase, shift: float) -> None:
        self.case = case
        self.shift = shift

    def velocity(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        Unchanged velocity.
        """
        return self.case.velocity(points, time)

    def velocity_gradient(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        Unchanged gradient.
        """
        return self.case.velocity_gradient(points, time)

    def pressure(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        p + shift.
        """
        return self.case.pressure(points, time) + self.shift


class TestConvergenceRates:
    """
    Log-log slopes.
    """

    def test_second_order(self) -> None:
        """
        Errors (0.4, 0.1) over sizes (0.2, 0.1) give 2.
        """
        # Run
        result, actual = errors.convergence_rates([0.4, 0.1], [0.2, 0.1])

        # Test
        assert result
        assert actual is not None
        assert math.isclose(actual[0], 2.0)

    def test_flat(self) -> None:
        """
        Equal errors give 0.
        """
        # Run
        result, actual = errors.convergence_rates([1.0, 1.0], [0.5, 0.25])

        # Test
        assert result
        assert actual is not None
        assert math.isclose(actual[0], 0.0, abs_tol=1.0e-15)

    def test_power_law(self) -> None:
        """
        e = 3 s^1.5 has every rate 1.5.
        """
        # Setup
        sizes = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 12.0, 1.0 / 24.0]
        values = [3.0 * size**1.5 for size in sizes]

        # Run
        result, actual = errors.convergence_rates(values, sizes)

        # Test
        assert result
        assert actual is not None
        assert np.allclose(actual, 1.5, atol=1.0e-12)

    @pytest.mark.parametrize(
        "values,sizes",
        [
            ([1.0], [1.0]),
            ([1.0, 0.5], [1.0]),
            ([1.0, 0.0], [1.0, 0.5]),
            ([1.0, 0.5], [0.5, 0.5]),
            ([1.0, 0.5], [0.25, 0.5]),
        ],
    )
    def test_invalid(self, values: "list[float]", sizes: "list[float]") -> None:
        """
        Short lists, non-positive errors and non-decreasing sizes fail.
        """
        # Run
        result, actual = errors.convergence_rates(values, sizes)

        # Test
        assert not result
        assert actual is None


class TestErrorEnergy:
    """
    err(u) components against closed-form and discrete references.
    """

    def test_zero_against_zero(self) -> None:
        """
        Every component vanishes.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1)

        # Run
        actual = errors.error_energy(source, build_case("zero"))

        # Test
        assert actual.err_u == 0.0
        assert actual.pressure_l2_final == 0.0
        assert actual.max_divergence == 0.0

    def test_known_gap(self) -> None:
        """
        u_h = 0 against sol2: the Linf(L2) error is ||(y, x)||_L2 = sqrt(2/3).
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1)

        # Run
        actual = errors.error_energy(source, build_case("sol2"))

        # Test
        assert math.isclose(actual.linf_l2_velocity, math.sqrt(2.0 / 3.0), rel_tol=1.0e-10)
        assert actual.gamma_jump_sq == 0.0
        assert actual.a_norm_sq_weighted > 0.0

    def test_components_consistent(self) -> None:
        """
        err_u^2 is the sum of the squared components and of the per-slab breakdowns.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        coefficients = np.random.default_rng(67).normal(size=velocities.dimension)
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1, coefficients)

        # Run
        actual = errors.error_energy(source, build_case("sol1"))

        # Test
        expected = (
            actual.linf_l2_velocity**2 + actual.a_norm_sq_weighted + actual.gamma_jump_sq
        )
        assert math.isclose(actual.err_u**2, expected, rel_tol=1.0e-12)
        assert math.isclose(actual.a_norm_sq_weighted, actual.slab_a_norm_sq.sum())
        assert math.isclose(actual.gamma_jump_sq, actual.slab_gamma_jump_sq.sum())
        assert math.isclose(actual.linf_l2_velocity, actual.slab_linf_l2.max())
        assert actual.gamma_jump_sq > 0.0

    def test_against_itself(self, test_logger: logger.Logger) -> None:
        """
        A one-slab solution compared with its own evaluator has no Linf(L2) or pressure error.
        """
        # Setup
        case = build_case("sol1")
        velocities, pressures = build_spaces(2, 1)
        result, grid = time_grid.TimeGrid.uniform(0.5, 1, 1)
        assert result
        assert grid is not None
        result, flow = manufactured_case.flow_problem(case, velocities, pressures, grid)
        assert result
        assert flow is not None
        result, config = solver_config.SolverConfig.create()
        assert result
        assert config is not None
        result, source = space_time_solver.run_fully_implicit(flow, config, test_logger)
        assert result
        assert source is not None

        # Run
        actual = errors.error_energy(source, trajectory_field.TrajectoryField(source))

        # Test
        assert actual.linf_l2_velocity <= 1.0e-12
        assert actual.pressure_l2_final <= 1.0e-12

    def test_pressure_mean_invariant(self) -> None:
        """
        Shifting the exact pressure by a constant leaves the final pressure error unchanged.
        """
        # Setup
        case = build_case("sol1")
        velocities, pressures = build_spaces(2, 2)
        source = build_trajectory(velocities, pressures, [0.0, 1.0], 1)

        # Run
        expected = errors.error_pressure_final(source, case)
        actual = errors.error_pressure_final(source, ShiftedPressure(case, 3.0))

        # Test
        assert expected > 0.0
        assert math.isclose(actual, expected, rel_tol=1.0e-12)

    def test_projected_pressure(self) -> None:
        """
        A pressure already in Q_h, fed as the discrete pressure, has zero error.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)

        class LinearPressure:
            """
            p = x - 2 y, u = 0.
            """

            @staticmethod
            def velocity(points: np.ndarray, time: float) -> np.ndarray:
                return np.zeros(points.shape)

            @staticmethod
            def velocity_gradient(points: np.ndarray, time: float) -> np.ndarray:
                return np.zeros(points.shape + (2,))

            @staticmethod
            def pressure(points: np.ndarray, time: float) -> np.ndarray:
                return points[..., 0] - 2.0 * points[..., 1]

        coefficients = pressure_space.l2_project(
            pressures, lambda x: LinearPressure.pressure(x, 0.0)
        )
        source = build_trajectory(velocities, pressures, [0.0, 1.0], 1, pressure=coefficients)

        # Run
        actual = errors.error_pressure_final(source, LinearPressure())

        # Test
        assert actual <= 1.0e-12

    def test_divergence_norm(self) -> None:
        """
        u_h = (x, 0) has ||div u_h|| = 1; the zero trajectory has 0.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        coefficients = velocity_space.rt_interpolate(
            velocities, lambda x: np.column_stack((x[:, 0], np.zeros(len(x))))
        )
        source = build_trajectory(velocities, pressures, [0.0, 1.0], 1, coefficients)
        zero = build_trajectory(velocities, pressures, [0.0, 1.0], 1)

        # Test
        assert math.isclose(errors.divergence_norm(source), 1.0, rel_tol=1.0e-12)
        assert errors.divergence_norm(zero) == 0.0


class TestEnergy:
    """
    Energy norm pieces.
    """

    def test_time_jump_constant(self) -> None:
        """
        A trajectory constant in time has |u|_J^2 = ||u||^2.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        coefficients = np.random.default_rng(71).normal(size=velocities.dimension)
        source = build_trajectory(velocities, pressures, [0.0, 0.3, 1.0], 2, coefficients)
        result, operators = spatial.assemble_spatial(velocities, pressures, 1.0, 10.0)
        assert result
        assert operators is not None

        # Run
        actual = energy.time_jump_seminorm_squared(source, operators.mass)

        # Test
        assert math.isclose(actual, operators.mass_norm(coefficients) ** 2, rel_tol=1.0e-12)

    def test_zero_energy(self) -> None:
        """
        The zero trajectory has zero energy.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1)
        result, operators = spatial.assemble_spatial(velocities, pressures, 1.0, 10.0)
        assert result
        assert operators is not None

        # Run
        actual = energy.energy_norm_squared(source, operators)

        # Test
        assert actual == 0.0

    def test_data_norm_zero(self) -> None:
        """
        Zero data has zero data norm.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        result, grid = time_grid.TimeGrid.uniform(1.0, 2, 1)
        assert result
        assert grid is not None
        result, flow = manufactured_case.flow_problem(
            build_case("zero"), velocities, pressures, grid
        )
        assert result
        assert flow is not None

        # Run
        actual = energy.data_norm_squared(flow)

        # Test
        assert actual == 0.0

    def test_energy_constant_trajectory(self) -> None:
        """
        For u constant in time on [0, 1]: 2 ||u||^2 + nu ||u||_A^2 + |u|_gamma^2.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        coefficients = velocity_space.rt_interpolate(
            velocities, lambda x: np.column_stack((np.sin(np.pi * x[:, 1]), x[:, 0] ** 2))
        )
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1, coefficients)
        result, operators = spatial.assemble_spatial(velocities, pressures, 1.0, 10.0)
        assert result
        assert operators is not None

        gamma = np.full(velocities.mesh.facet_count, 1.0e-8)
        expected = (
            2.0 * operators.mass_norm(coefficients) ** 2
            + float(coefficients @ (operators.energy @ coefficients))
            + convection.gamma_seminorm_squared(operators, gamma, coefficients)
        )

        # Run
        actual = energy.energy_norm_squared(source, operators)

        # Test
        assert actual > 0.0
        assert math.isclose(actual, expected, rel_tol=1.0e-10)

    def test_data_norm_constant_forcing(self) -> None:
        """
        f = (1, 2) and u_0 = (y, x) on the unit square for T = 1 give 5 + 2/3.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        result, grid = time_grid.TimeGrid.uniform(1.0, 2, 1)
        assert result
        assert grid is not None

        def forcing(points: np.ndarray, time: float) -> np.ndarray:
            return np.broadcast_to(np.array([1.0, 2.0]), points.shape).copy()

        result, flow = problem.FlowProblem.create(
            velocities, pressures, grid, 1.0, forcing, lambda x: x[:, ::-1].copy()
        )
        assert result
        assert flow is not None

        # Run
        actual = energy.data_norm_squared(flow)

        # Test
        assert math.isclose(actual, 5.0 + 2.0 / 3.0, rel_tol=1.0e-12)


class TestSolvedTrajectories:
    """
    Stability, continuous dependence, penalty scaling and L-infinity sampling on small runs.
    """

    @pytest.mark.parametrize("scheme", ["fully_implicit", "semi_implicit"])
    def test_unconditional_stability(self, scheme: str, test_logger: logger.Logger) -> None:
        """
        Eight times larger steps at fixed mesh and data do not blow up the energy.
        """
        # Setup
        case = build_case("sol1")
        fine = build_flow(case, 4, 1, 1, 8)
        coarse = build_flow(case, 4, 1, 1, 1)
        operators = build_operators(fine)
        data = energy.data_norm_squared(fine)

        # Run
        fine_energy = energy.energy_norm_squared(solve(fine, scheme, test_logger), operators)
        coarse_energy = energy.energy_norm_squared(solve(coarse, scheme, test_logger), operators)

        # Test
        assert math.isclose(energy.data_norm_squared(coarse), data, rel_tol=1.0e-12)
        assert 0.0 < fine_energy <= data
        assert 0.0 < coarse_energy <= data
        assert coarse_energy <= 4.0 * fine_energy

    def test_continuous_dependence(self, test_logger: logger.Logger) -> None:
        """
        For a random forcing the energy over the data norm is bounded and barely moves when nu
        drops tenfold.
        """
        # Setup
        amplitudes = np.random.default_rng(79).uniform(-1.0, 1.0, (3, 3, 2))

        def forcing(points: np.ndarray, time: float) -> np.ndarray:
            values = np.zeros(points.shape)
            for i, j in np.ndindex(3, 3):
                mode = np.sin((i + 1) * np.pi * points[..., 0]) * np.sin(
                    (j + 1) * np.pi * points[..., 1]
                )
                values += (1.0 + time) * mode[..., None] * amplitudes[i, j]
            return values

        ratios = []
        for viscosity in (1.0e-2, 1.0e-3):
            base = build_flow(build_case("zero", viscosity), 3, 1, 1, 4)
            result, flow = problem.FlowProblem.create(
                base.velocity_space,
                base.pressure_space,
                base.grid,
                viscosity,
                forcing,
                base.initial_velocity,
            )
            assert result
            assert flow is not None

            # Run
            actual = energy.energy_norm_squared(
                solve(flow, "fully_implicit", test_logger), build_operators(flow)
            )
            ratios.append(actual / energy.data_norm_squared(flow))

        # Test
        assert all(0.0 < ratio <= 10.0 for ratio in ratios)
        assert 0.1 <= ratios[1] / ratios[0] <= 10.0

    def test_penalty_doubling(self, test_logger: logger.Logger) -> None:
        """
        Doubling sigma changes the solution less on a finer mesh.
        """
        # Setup
        case = build_case("sol1")
        differences = []
        for n, slab_count in ((2, 2), (4, 4)):
            flow = build_flow(case, n, 1, 1, slab_count)

            # Run
            default = solve(flow, "fully_implicit", test_logger)
            doubled = solve(flow, "fully_implicit", test_logger, 20.0)
            differences.append(
                errors.error_energy(
                    doubled, trajectory_field.TrajectoryField(default)
                ).linf_l2_velocity
            )

        # Test
        assert differences[1] < differences[0]

    def test_linf_sampling_adequate(self, test_logger: logger.Logger) -> None:
        """
        Doubling the interior sampling points moves the L-infinity L2 error by less than 1%.
        """
        # Setup
        case = build_case("sol1")
        source = solve(build_flow(case, 4, 1, 1, 3), "fully_implicit", test_logger)
        samples = source.grid.degree + 3

        # Run
        expected = errors.error_energy(source, case, samples).linf_l2_velocity
        actual = errors.error_energy(source, case, 2 * samples + 1).linf_l2_velocity

        # Test
        assert expected <= actual
        assert actual - expected < 0.01 * expected


class TestTrajectoryField:
    """
    Pointwise evaluation of a stored trajectory.
    """

    def test_linear_field(self) -> None:
        """
        A trajectory holding the interpolant of (y, x) evaluates to (y, x) with the swap
        gradient, and to the stored pressure.
        """
        # Setup
        velocities, pressures = build_spaces(2, 1)
        coefficients = velocity_space.rt_interpolate(velocities, lambda x: x[:, ::-1].copy())
        pressure = pressure_space.l2_project(pressures, lambda x: x[:, 0])
        source = build_trajectory(velocities, pressures, [0.0, 0.5, 1.0], 1, coefficients, pressure)
        field = trajectory_field.TrajectoryField(source)
        points = np.random.default_rng(73).uniform(0.05, 0.95, (10, 2))

        # Run
        values = field.velocity(points, 0.7)
        gradients = field.velocity_gradient(points, 0.7)
        pressures_at = field.pressure(points, 0.7)

        # Test
        assert np.allclose(values, points[:, ::-1], atol=1.0e-12)
        assert np.allclose(gradients, [[0.0, 1.0], [1.0, 0.0]], atol=1.0e-10)
        assert np.allclose(pressures_at, points[:, 0], atol=1.0e-12)
