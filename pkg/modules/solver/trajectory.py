"""
Slab-by-slab record of a discrete solution.
"""

import numpy as np

from ..spaces import pressure_space
from ..spaces import velocity_space
from ..timedisc import slab_basis
from ..timedisc import slab_polynomial
from ..timedisc import time_grid


class SlabSolution:
    """
    Nodal velocity (ell+1, N_V) and pressure (ell+1, N_Q) of one slab, the gamma_F values
    (ell+1, F) of the convection field used at each node, and the fixed-point count.
    """

    def __init__(
        self,
        basis: slab_basis.SlabBasis,
        velocity: np.ndarray,
        pressure: np.ndarray,
        gamma: np.ndarray,
        iterations: int,
        linear_solves: int,
    ) -> None:
        self.basis = basis
        self.velocity = velocity
        self.pressure = pressure
        self.gamma = gamma
        self.iterations = iterations
        self.linear_solves = linear_solves

    def velocity_polynomial(self) -> slab_polynomial.SlabPolynomial:
        """
        Velocity coefficients as a polynomial in time.
        """
        return slab_polynomial.SlabPolynomial(self.basis, self.velocity)

    def pressure_polynomial(self) -> slab_polynomial.SlabPolynomial:
        """
        Pressure coefficients as a polynomial in time.
        """
        return slab_polynomial.SlabPolynomial(self.basis, self.pressure)


class Trajectory:
    """
    Append-only list of committed slabs.
    """

    def __init__(
        self,
        grid: time_grid.TimeGrid,
        velocities: velocity_space.VelocitySpace,
        pressures: pressure_space.PressureSpace,
        viscosity: float,
        penalty: float,
        initial_velocity: np.ndarray,
    ) -> None:
        self.grid = grid
        self.velocity_space = velocities
        self.pressure_space = pressures
        self.viscosity = viscosity
        self.penalty = penalty
        self.initial_velocity = initial_velocity
        self.slabs: "list[SlabSolution]" = []

    def append(self, slab: SlabSolution) -> None:
        """
        Commit the next slab.
        """
        assert slab.basis.slab_index == len(self.slabs) + 1
        self.slabs.append(slab)

    @property
    def is_complete(self) -> bool:
        """
        Whether every slab of the grid is committed.
        """
        return len(self.slabs) == self.grid.slab_count

    def slab(self, slab_index: int) -> SlabSolution:
        """
        Committed slab by 1-based index.
        """
        return self.slabs[slab_index - 1]

    def end_velocity(self, slab_index: int) -> np.ndarray:
        """
        u(t_n^-), with u(t_0^-) the interpolated initial datum.
        """
        if slab_index == 0:
            return self.initial_velocity

        return self.slab(slab_index).velocity_polynomial().right_value()

    def velocity_at(self, time: float) -> np.ndarray:
        """
        Velocity coefficients at time (t_n belongs to slab n, i.e. the left limit; t = 0 to slab 1).
        """
        return self.slab(self.grid.slab_of(time)).velocity_polynomial().evaluate(time)

    def pressure_at(self, time: float) -> np.ndarray:
        """
        Pressure coefficients at time.
        """
        return self.slab(self.grid.slab_of(time)).pressure_polynomial().evaluate(time)

    def iteration_counts(self) -> "list[int]":
        """
        Fixed-point iterations per slab.
        """
        return [slab.iterations for slab in self.slabs]

    @property
    def total_iterations(self) -> int:
        """
        Sum of fixed-point iterations over slabs.
        """
        return int(sum(self.iteration_counts()))

    @property
    def linear_solve_count(self) -> int:
        """
        Linear systems solved over all slabs.
        """
        return int(sum(slab.linear_solves for slab in self.slabs))
