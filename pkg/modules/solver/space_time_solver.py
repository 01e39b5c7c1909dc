"""
Slab-sequential space-time solver: fully implicit (fixed point on every slab) and
semi-implicit (fixed point on slab 1, one linear solve with the extended previous slab
as transport field afterwards).
"""

import numpy as np

from . import linear_solver
from . import problem
from . import solver_config
from . import trajectory
from ..assembly import convection
from ..assembly import slab_system
from ..assembly import spatial
from ..logger import logger
from ..spaces import velocity_space
from ..timedisc import slab_basis
from ..timedisc import slab_polynomial


# Relative tolerance of the discrete divergence check after each slab
DIVERGENCE_CHECK_TOLERANCE = 1.0e-9


class SlabData:
    """
    Loads and boundary normal moments at the Radau nodes of one slab.
    """

    def __init__(self, loads: np.ndarray, boundary_values: np.ndarray) -> None:
        self.loads = loads
        self.boundary_values = boundary_values


class LinearizedSolution:
    """
    Result of one linearized slab solve.
    """

    def __init__(
        self,
        velocity: np.ndarray,
        pressure: np.ndarray,
        multipliers: np.ndarray,
        gamma: np.ndarray,
    ) -> None:
        self.velocity = velocity
        self.pressure = pressure
        self.multipliers = multipliers
        self.gamma = gamma


class SpaceTimeSolver:
    """
    Owns the assembled spatial operators of a problem and advances its trajectory.
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        flow_problem: problem.FlowProblem,
        config: solver_config.SolverConfig,
        local_logger: logger.Logger,
    ) -> "tuple[True, SpaceTimeSolver] | tuple[False, None]":
        """
        Assemble the time-independent operators.
        """
        penalty = config.penalty_for(flow_problem.velocity_space.degree)
        result, operators = spatial.assemble_spatial(
            flow_problem.velocity_space,
            flow_problem.pressure_space,
            flow_problem.viscosity,
            penalty,
        )
        if not result:
            local_logger.error("Failed to assemble spatial operators")
            return False, None

        # Get Pylance to stop complaining
        assert operators is not None

        return True, SpaceTimeSolver(
            cls.__create_key, flow_problem, config, operators, local_logger
        )

    def __init__(
        self,
        class_private_create_key: object,
        flow_problem: problem.FlowProblem,
        config: solver_config.SolverConfig,
        operators: spatial.SpatialOperators,
        local_logger: logger.Logger,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is SpaceTimeSolver.__create_key, "Use create() method"

        self.problem = flow_problem
        self.config = config
        self.operators = operators
        self.__loads = spatial.LoadAssembler(operators, config.load_quadrature_degree)
        self.__gamma = convection.GammaEvaluator(operators)
        self.__logger = local_logger

    def gamma(self, transport_coefficients: np.ndarray) -> np.ndarray:
        """
        gamma_F of a velocity field with the configured safeguard.
        """
        return self.__gamma.gamma(transport_coefficients, self.config.c_s)

    def slab_data(self, basis: slab_basis.SlabBasis) -> SlabData:
        """
        Loads (f plus the viscous boundary terms of g) and boundary moments at the nodes.
        """
        flow = self.problem
        velocities = flow.velocity_space
        loads = np.zeros((basis.size, velocities.dimension))
        boundary_values = np.zeros((basis.size, len(velocities.boundary_dofs)))
        for i, time in enumerate(basis.nodes):
            loads[i] = self.__loads.body_force(
                lambda points, time=time: flow.forcing(points, time)
            )
            if flow.boundary_velocity is None:
                continue

            def boundary(points: np.ndarray, time: float = time) -> np.ndarray:
                return flow.boundary_velocity(points, time)

            loads[i] += flow.viscosity * self.__loads.boundary_penalty(boundary)
            boundary_values[i] = velocity_space.boundary_normal_moments(velocities, boundary)

        return SlabData(loads, boundary_values)

    def solve_linearized_slab(
        self,
        basis: slab_basis.SlabBasis,
        transport: slab_polynomial.SlabPolynomial,
        previous_end: np.ndarray,
        data: SlabData,
    ) -> "tuple[True, LinearizedSolution] | tuple[False, None]":
        """
        Solve the slab system with the convection field frozen to transport.
        """
        snapshots = []
        for i in range(basis.size):
            result, snapshot = convection.assemble_convection(
                self.operators,
                self.__gamma,
                transport.nodal_values[i],
                self.config.c_s,
                i,
                self.__logger,
            )
            if not result:
                self.__logger.error(f"Slab {basis.slab_index}: convection assembly failed")
                return False, None
            snapshots.append(snapshot)

        result, system = slab_system.build_slab_system(
            self.operators, basis, snapshots, data.loads, previous_end, data.boundary_values
        )
        if not result:
            self.__logger.error(f"Slab {basis.slab_index}: slab system has inconsistent sizes")
            return False, None

        # Get Pylance to stop complaining
        assert system is not None

        reduced_matrix, reduced_rhs = system.reduced()
        result, free_values = linear_solver.linear_solve(
            reduced_matrix, reduced_rhs, self.config.linear_solver_tol, self.__logger
        )
        if not result:
            self.__logger.error(f"Slab {basis.slab_index}: linear solve failed")
            return False, None

        velocity, pressure, multipliers = system.split(system.expand(free_values))

        for i in range(basis.size):
            divergence = float(np.linalg.norm(self.operators.divergence @ velocity[i]))
            size = max(self.operators.mass_norm(velocity[i]), 1.0)
            if divergence > DIVERGENCE_CHECK_TOLERANCE * size:
                self.__logger.warning(
                    f"Slab {basis.slab_index} node {i}: discrete divergence {divergence}"
                )

        gamma = np.array([snapshot.gamma for snapshot in snapshots])
        return True, LinearizedSolution(velocity, pressure, multipliers, gamma)

    def fixed_point(
        self, basis: slab_basis.SlabBasis, previous_end: np.ndarray
    ) -> "tuple[True, trajectory.SlabSolution] | tuple[False, None]":
        """
        Picard iteration on the convection field, starting from the constant extension of
        u(t_(n-1)^-).
        """
        data = self.slab_data(basis)
        guess = slab_polynomial.constant_extension(previous_end, basis)
        increment = np.inf
        for iteration in range(1, self.config.max_fixed_point_iters + 1):
            result, solution = self.solve_linearized_slab(basis, guess, previous_end, data)
            if not result:
                return False, None

            # Get Pylance to stop complaining
            assert solution is not None

            increment = max(
                self.operators.mass_norm(solution.velocity[i] - guess.nodal_values[i])
                for i in range(basis.size)
            )
            size = max(self.operators.mass_norm(velocity) for velocity in solution.velocity)
            guess = slab_polynomial.SlabPolynomial(basis, solution.velocity)

            if increment <= self.config.fixed_point_tol * max(1.0, size):
                gamma = np.array([self.gamma(velocity) for velocity in solution.velocity])
                self.__logger.info(
                    f"Slab {basis.slab_index}: {iteration} fixed-point iterations, "
                    f"increment {increment:.3e}",
                    False,
                )
                return True, trajectory.SlabSolution(
                    basis, solution.velocity, solution.pressure, gamma, iteration, iteration
                )

        self.__logger.error(
            f"Slab {basis.slab_index}: fixed point did not converge after "
            f"{self.config.max_fixed_point_iters} iterations, final increment {increment}"
        )
        return False, None

    def linear_step(
        self, basis: slab_basis.SlabBasis, previous: slab_polynomial.SlabPolynomial
    ) -> "tuple[True, trajectory.SlabSolution] | tuple[False, None]":
        """
        One linearized solve with the previous slab's polynomial extended as transport field.
        """
        transport = slab_polynomial.tilde_extend(previous, basis)
        result, solution = self.solve_linearized_slab(
            basis, transport, previous.right_value(), self.slab_data(basis)
        )
        if not result:
            return False, None

        # Get Pylance to stop complaining
        assert solution is not None

        return True, trajectory.SlabSolution(
            basis, solution.velocity, solution.pressure, solution.gamma, 1, 1
        )

    def run(self) -> "tuple[True, trajectory.Trajectory] | tuple[False, None]":
        """
        Advance over every slab of the time grid with the configured scheme.
        """
        flow = self.problem
        initial = velocity_space.rt_interpolate(flow.velocity_space, flow.initial_velocity)
        result_trajectory = trajectory.Trajectory(
            flow.grid,
            flow.velocity_space,
            flow.pressure_space,
            flow.viscosity,
            self.operators.penalty,
            initial,
        )

        semi_implicit = self.config.scheme == solver_config.Scheme.SEMI_IMPLICIT
        for slab_index in range(1, flow.grid.slab_count + 1):
            result, basis = slab_basis.slab_basis(flow.grid, slab_index)
            assert result and basis is not None

            if semi_implicit and slab_index > 1:
                previous = result_trajectory.slab(slab_index - 1).velocity_polynomial()
                result, slab = self.linear_step(basis, previous)
            else:
                result, slab = self.fixed_point(
                    basis, result_trajectory.end_velocity(slab_index - 1)
                )

            if not result:
                self.__logger.error(f"Solver failed on slab {slab_index}")
                return False, None

            # Get Pylance to stop complaining
            assert slab is not None

            if semi_implicit and slab_index == 1:
                if slab.iterations > self.config.slab1_iteration_warning:
                    self.__logger.warning(
                        f"Slab 1 fixed point needed {slab.iterations} iterations, "
                        "the step may be too large for the semi-implicit scheme"
                    )

            result_trajectory.append(slab)

        return True, result_trajectory


def solve_linearized_slab(
    solver: SpaceTimeSolver,
    basis: slab_basis.SlabBasis,
    transport: slab_polynomial.SlabPolynomial,
    previous_end: np.ndarray,
) -> "tuple[True, LinearizedSolution] | tuple[False, None]":
    """
    One Oseen-type slab solve for the solver's problem.
    """
    return solver.solve_linearized_slab(basis, transport, previous_end, solver.slab_data(basis))


def run_fully_implicit(
    flow_problem: problem.FlowProblem,
    config: solver_config.SolverConfig,
    local_logger: logger.Logger,
) -> "tuple[True, trajectory.Trajectory] | tuple[False, None]":
    """
    Fixed-point iteration to convergence on every slab.
    """
    if config.scheme != solver_config.Scheme.FULLY_IMPLICIT:
        local_logger.error("run_fully_implicit called with a semi-implicit config")
        return False, None

    result, solver = SpaceTimeSolver.create(flow_problem, config, local_logger)
    if not result:
        return False, None

    # Get Pylance to stop complaining
    assert solver is not None

    return solver.run()


def run_semi_implicit(
    flow_problem: problem.FlowProblem,
    config: solver_config.SolverConfig,
    local_logger: logger.Logger,
) -> "tuple[True, trajectory.Trajectory] | tuple[False, None]":
    """
    Fixed point on slab 1, then one linear solve per slab.
    """
    if config.scheme != solver_config.Scheme.SEMI_IMPLICIT:
        local_logger.error("run_semi_implicit called with a fully implicit config")
        return False, None

    result, solver = SpaceTimeSolver.create(flow_problem, config, local_logger)
    if not result:
        return False, None

    # Get Pylance to stop complaining
    assert solver is not None

    return solver.run()
