"""
Finite-difference check of the hand-derived forcing.
"""

from typing import Callable

import numpy as np

from . import manufactured_case


# Centered-difference step for first derivatives in space and time
DIFFERENCE_STEP = 1.0e-5

# Step of the fourth-order Laplacian stencil (a smaller step is dominated by round-off)
LAPLACIAN_STEP = 1.0e-3


def _unit(direction: int) -> np.ndarray:
    unit = np.zeros(2)
    unit[direction] = 1.0
    return unit


def finite_difference_forcing(
    case: manufactured_case.ManufacturedCase, points: np.ndarray, times: np.ndarray
) -> np.ndarray:
    """
    d_t u - nu lap u + (grad u) u + grad p from u and p alone, one time per point.
    """
    step = DIFFERENCE_STEP
    wide = LAPLACIAN_STEP

    def velocity(shift: np.ndarray, time_shift: float = 0.0) -> np.ndarray:
        return np.array(
            [
                case.velocity(point + shift, time + time_shift)
                for point, time in zip(points, times)
            ]
        )

    def pressure(shift: np.ndarray) -> np.ndarray:
        return np.array(
            [case.pressure(point + shift, time) for point, time in zip(points, times)]
        )

    zero = np.zeros(2)
    time_derivative = (velocity(zero, step) - velocity(zero, -step)) / (2.0 * step)

    gradient = np.zeros((len(points), 2, 2))
    laplacian = np.zeros((len(points), 2))
    pressure_gradient = np.zeros((len(points), 2))
    center = velocity(zero)
    for direction in range(2):
        unit = _unit(direction)
        gradient[:, :, direction] = (velocity(step * unit) - velocity(-step * unit)) / (2.0 * step)
        laplacian += (
            -velocity(2.0 * wide * unit)
            + 16.0 * velocity(wide * unit)
            - 30.0 * center
            + 16.0 * velocity(-wide * unit)
            - velocity(-2.0 * wide * unit)
        ) / (12.0 * wide**2)
        pressure_gradient[:, direction] = (pressure(step * unit) - pressure(-step * unit)) / (
            2.0 * step
        )

    return (
        time_derivative
        - case.viscosity * laplacian
        + np.einsum("ncd,nd->nc", gradient, center)
        + pressure_gradient
    )


def verify_forcing(
    case: manufactured_case.ManufacturedCase,
    samples: int,
    seed: int = 0,
    forcing: "Callable[[np.ndarray, float], np.ndarray] | None" = None,
) -> float:
    """
    max over random points in the unit square and t in [0, 1] of |f - f_fd|.

    forcing overrides the case's closed-form forcing (to check the oracle itself).
    """
    if forcing is None:
        forcing = case.forcing

    generator = np.random.default_rng(seed)
    points = generator.uniform(0.0, 1.0, (samples, 2))
    times = generator.uniform(0.0, 1.0, samples)

    closed = np.array([forcing(point, time) for point, time in zip(points, times)])
    return float(np.max(np.abs(closed - finite_difference_forcing(case, points, times))))
