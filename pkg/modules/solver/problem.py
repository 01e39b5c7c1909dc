"""
Data of one incompressible flow problem on a discretized space-time cylinder.
"""

from typing import Callable

import numpy as np

from ..spaces import pressure_space
from ..spaces import velocity_space
from ..timedisc import time_grid


# (points (N, 2), t) -> (N, 2)
TimeDependentField = Callable[[np.ndarray, float], np.ndarray]


class FlowProblem:
    """
    Spaces, time grid, viscosity, forcing f, initial velocity u_0 and boundary velocity g.

    boundary_velocity None means u = 0 on the boundary.
    """

    __create_key = object()

    @classmethod
    def create(
        cls,
        velocities: velocity_space.VelocitySpace,
        pressures: pressure_space.PressureSpace,
        grid: time_grid.TimeGrid,
        viscosity: float,
        forcing: TimeDependentField,
        initial_velocity: Callable[[np.ndarray], np.ndarray],
        boundary_velocity: "TimeDependentField | None" = None,
    ) -> "tuple[True, FlowProblem] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a FlowProblem object.
        """
        if viscosity <= 0.0:
            return False, None

        if velocities.mesh is not pressures.mesh or velocities.degree != pressures.degree:
            return False, None

        return True, FlowProblem(
            cls.__create_key,
            velocities,
            pressures,
            grid,
            viscosity,
            forcing,
            initial_velocity,
            boundary_velocity,
        )

    def __init__(
        self,
        class_private_create_key: object,
        velocities: velocity_space.VelocitySpace,
        pressures: pressure_space.PressureSpace,
        grid: time_grid.TimeGrid,
        viscosity: float,
        forcing: TimeDependentField,
        initial_velocity: Callable[[np.ndarray], np.ndarray],
        boundary_velocity: "TimeDependentField | None",
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is FlowProblem.__create_key, "Use create() method"

        self.velocity_space = velocities
        self.pressure_space = pressures
        self.grid = grid
        self.viscosity = viscosity
        self.forcing = forcing
        self.initial_velocity = initial_velocity
        self.boundary_velocity = boundary_velocity

    @property
    def is_homogeneous(self) -> bool:
        """
        Whether u = 0 on the boundary.
        """
        return self.boundary_velocity is None
