"""
Evaluate a discrete trajectory at arbitrary physical points, with the same interface as the
closed-form manufactured solutions.
"""

import numpy as np

from ..solver import trajectory
from ..spaces import reference_element


class TrajectoryField:
    """
    velocity(points, t) -> (N, 2), velocity_gradient(points, t) -> (N, 2, 2),
    pressure(points, t) -> (N,).

    Points must lie strictly inside elements for the gradient to be well defined.
    """

    def __init__(self, source: trajectory.Trajectory) -> None:
        self.__trajectory = source

    def __reference(self, points: np.ndarray) -> "tuple[np.ndarray, np.ndarray]":
        mesh = self.__trajectory.velocity_space.mesh
        elements = mesh.locate(points)
        assert np.all(elements >= 0), "Point outside the mesh"
        return elements, mesh.to_reference(elements, points)

    def __tabulate(self, points: np.ndarray, time: float) -> "tuple[np.ndarray, object]":
        space = self.__trajectory.velocity_space
        points = np.atleast_2d(points)
        elements, reference = self.__reference(points)
        flat = space.element.tabulate(reference)
        stacked = reference_element.ReferenceTabulation(
            flat.values[:, None], flat.gradients[:, None]
        )
        physical = space.piola(elements, stacked)
        local = space.local_coefficients(self.__trajectory.velocity_at(time))[elements]
        return local, physical

    def velocity(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        Discrete velocity at physical points.
        """
        local, physical = self.__tabulate(points, time)
        return np.einsum("ni,nic->nc", local, physical.values[:, 0])

    def velocity_gradient(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        Discrete velocity gradient at physical points.
        """
        local, physical = self.__tabulate(points, time)
        return np.einsum("ni,nicd->ncd", local, physical.gradients[:, 0])

    def pressure(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        Discrete pressure at physical points.
        """
        space = self.__trajectory.pressure_space
        points = np.atleast_2d(points)
        elements, reference = self.__reference(points)
        coefficients = self.__trajectory.pressure_at(time)[space.dof_map[elements]]
        return np.einsum("ni,ni->n", space.tabulate(reference), coefficients)
