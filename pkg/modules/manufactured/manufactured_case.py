"""
Closed-form exact solutions on the unit square and their momentum forcing
f = d_t u - nu lap u + (grad u) u + grad p.

With X = pi (x - 1/2), Y = pi (y - 1/2):
  sol1: u = cos t / 8 (-(1 + cos 2X) sin 2Y, (1 + cos 2Y) sin 2X), p = cos t (sin X - sin Y)
  sol2: u = cos(2 pi t) (y, x), p = cos(2 pi t) (sin X - sin Y)
  sol3: u = t (y, x), p = cos(2 pi t) (sin X - sin Y)
  zero: u = 0, p = 0
sol1 and zero vanish on the boundary; sol2 and sol3 need nonhomogeneous Dirichlet data.
"""

import math

import numpy as np

from ..solver import problem
from ..spaces import pressure_space
from ..spaces import velocity_space
from ..timedisc import time_grid


CASE_NAMES = ("sol1", "sol2", "sol3", "zero")


def _shifted(points: np.ndarray) -> "tuple[np.ndarray, np.ndarray]":
    return math.pi * (points[..., 0] - 0.5), math.pi * (points[..., 1] - 0.5)


class _Sol1:
    """
    Vortex vanishing on the boundary.
    """

    @staticmethod
    def profile(points: np.ndarray) -> np.ndarray:
        big_x, big_y = _shifted(points)
        return np.stack(
            (
                -(1.0 + np.cos(2.0 * big_x)) * np.sin(2.0 * big_y) / 8.0,
                (1.0 + np.cos(2.0 * big_y)) * np.sin(2.0 * big_x) / 8.0,
            ),
            axis=-1,
        )

    @staticmethod
    def velocity(points: np.ndarray, time: float) -> np.ndarray:
        return math.cos(time) * _Sol1.profile(points)

    @staticmethod
    def time_derivative(points: np.ndarray, time: float) -> np.ndarray:
        return -math.sin(time) * _Sol1.profile(points)

    @staticmethod
    def gradient(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        scale = math.cos(time) * math.pi / 4.0
        sin_x, sin_y = np.sin(2.0 * big_x), np.sin(2.0 * big_y)
        cos_x, cos_y = np.cos(2.0 * big_x), np.cos(2.0 * big_y)
        return scale * np.stack(
            (
                np.stack((sin_x * sin_y, -(1.0 + cos_x) * cos_y), axis=-1),
                np.stack(((1.0 + cos_y) * cos_x, -sin_x * sin_y), axis=-1),
            ),
            axis=-2,
        )

    @staticmethod
    def laplacian(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        scale = math.cos(time) * math.pi**2 / 2.0
        return scale * np.stack(
            (
                np.sin(2.0 * big_y) * (1.0 + 2.0 * np.cos(2.0 * big_x)),
                -np.sin(2.0 * big_x) * (1.0 + 2.0 * np.cos(2.0 * big_y)),
            ),
            axis=-1,
        )

    @staticmethod
    def pressure(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        return math.cos(time) * (np.sin(big_x) - np.sin(big_y))

    @staticmethod
    def pressure_gradient(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        return math.cos(time) * math.pi * np.stack((np.cos(big_x), -np.cos(big_y)), axis=-1)


class _Sol2:
    """
    Linear in space, periodic in time.
    """

    @staticmethod
    def velocity(points: np.ndarray, time: float) -> np.ndarray:
        return math.cos(2.0 * math.pi * time) * points[..., ::-1]

    @staticmethod
    def time_derivative(points: np.ndarray, time: float) -> np.ndarray:
        return -2.0 * math.pi * math.sin(2.0 * math.pi * time) * points[..., ::-1]

    @staticmethod
    def gradient(points: np.ndarray, time: float) -> np.ndarray:
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        return np.broadcast_to(
            math.cos(2.0 * math.pi * time) * swap, points.shape[:-1] + (2, 2)
        ).copy()

    @staticmethod
    def laplacian(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2,))

    @staticmethod
    def pressure(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        return math.cos(2.0 * math.pi * time) * (np.sin(big_x) - np.sin(big_y))

    @staticmethod
    def pressure_gradient(points: np.ndarray, time: float) -> np.ndarray:
        big_x, big_y = _shifted(points)
        return (
            math.cos(2.0 * math.pi * time)
            * math.pi
            * np.stack((np.cos(big_x), -np.cos(big_y)), axis=-1)
        )


class _Sol3(_Sol2):
    """
    Linear in space and time; only the pressure is not polynomial.
    """

    @staticmethod
    def velocity(points: np.ndarray, time: float) -> np.ndarray:
        return time * points[..., ::-1]

    @staticmethod
    def time_derivative(points: np.ndarray, time: float) -> np.ndarray:
        return points[..., ::-1].copy()

    @staticmethod
    def gradient(points: np.ndarray, time: float) -> np.ndarray:
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        return np.broadcast_to(time * swap, points.shape[:-1] + (2, 2)).copy()


class _Zero:
    """
    Zero data.
    """

    @staticmethod
    def velocity(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2,))

    @staticmethod
    def time_derivative(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2,))

    @staticmethod
    def gradient(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2, 2))

    @staticmethod
    def laplacian(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2,))

    @staticmethod
    def pressure(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1])

    @staticmethod
    def pressure_gradient(points: np.ndarray, time: float) -> np.ndarray:
        return np.zeros(points.shape[:-1] + (2,))


_FORMULAS = {"sol1": _Sol1, "sol2": _Sol2, "sol3": _Sol3, "zero": _Zero}
_HOMOGENEOUS = {"sol1": True, "sol2": False, "sol3": False, "zero": True}


class ManufacturedCase:
    """
    Exact velocity and pressure with their derivatives, the matching forcing, initial
    datum and boundary data. Evaluators take points (..., 2) and a time.
    """

    __create_key = object()

    @classmethod
    def create(
        cls, name: str, viscosity: float
    ) -> "tuple[True, ManufacturedCase] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a ManufacturedCase object.
        """
        if name not in _FORMULAS or viscosity <= 0.0:
            return False, None

        return True, ManufacturedCase(cls.__create_key, name, viscosity)

    def __init__(self, class_private_create_key: object, name: str, viscosity: float) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is ManufacturedCase.__create_key, "Use create() method"

        self.name = name
        self.viscosity = viscosity
        self.is_homogeneous = _HOMOGENEOUS[name]
        self.__formulas = _FORMULAS[name]

    def velocity(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        u.
        """
        return self.__formulas.velocity(np.asarray(points, dtype=float), time)

    def velocity_gradient(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        grad u with [..., c, d] = d u_c / d x_d.
        """
        return self.__formulas.gradient(np.asarray(points, dtype=float), time)

    def velocity_time_derivative(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        d_t u.
        """
        return self.__formulas.time_derivative(np.asarray(points, dtype=float), time)

    def velocity_laplacian(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        lap u.
        """
        return self.__formulas.laplacian(np.asarray(points, dtype=float), time)

    def pressure(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        p.
        """
        return self.__formulas.pressure(np.asarray(points, dtype=float), time)

    def pressure_gradient(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        grad p.
        """
        return self.__formulas.pressure_gradient(np.asarray(points, dtype=float), time)

    def forcing(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        f = d_t u - nu lap u + (grad u) u + grad p.
        """
        points = np.asarray(points, dtype=float)
        velocity = self.velocity(points, time)
        convection = np.einsum("...cd,...d->...c", self.velocity_gradient(points, time), velocity)
        return (
            self.velocity_time_derivative(points, time)
            - self.viscosity * self.velocity_laplacian(points, time)
            + convection
            + self.pressure_gradient(points, time)
        )

    def initial_velocity(self, points: np.ndarray) -> np.ndarray:
        """
        u_0 = u(., 0).
        """
        return self.velocity(points, 0.0)

    def boundary_velocity(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        g = u on the boundary.
        """
        return self.velocity(points, time)


def manufactured_case(
    name: str, viscosity: float
) -> "tuple[True, ManufacturedCase] | tuple[False, None]":
    """
    Look up an exact solution by name.
    """
    return ManufacturedCase.create(name, viscosity)


def flow_problem(
    case: ManufacturedCase,
    velocities: velocity_space.VelocitySpace,
    pressures: pressure_space.PressureSpace,
    grid: time_grid.TimeGrid,
) -> "tuple[True, problem.FlowProblem] | tuple[False, None]":
    """
    Flow problem whose exact solution is the case.
    """
    boundary = None if case.is_homogeneous else case.boundary_velocity
    return problem.FlowProblem.create(
        velocities,
        pressures,
        grid,
        case.viscosity,
        case.forcing,
        case.initial_velocity,
        boundary,
    )
