"""
Energy norm of a discrete trajectory, its time-jump part, and the data norm of a problem.
"""

import numpy as np
import scipy.sparse

from . import errors
from ..assembly import convection
from ..assembly import spatial
from ..assembly import tabulation
from ..quadrature import quadrature
from ..solver import problem
from ..solver import trajectory


# Gauss-Legendre points per slab for int_0^T ||f(t)|| dt
DATA_NORM_TIME_POINTS = 6


def time_jump_seminorm_squared(
    source: trajectory.Trajectory, mass: scipy.sparse.spmatrix
) -> float:
    """
    |u|_J^2 = 1/2 (||u(T^-)||^2 + sum_(n=1)^(N-1) ||[u]_n||^2 + ||u(0^+)||^2).
    """
    slabs = source.slabs
    end = slabs[-1].velocity_polynomial().right_value()
    total = float(end @ (mass @ end))
    start = slabs[0].velocity_polynomial().left_value()
    total += float(start @ (mass @ start))
    for previous, current in zip(slabs[:-1], slabs[1:]):
        jump = (
            current.velocity_polynomial().left_value()
            - previous.velocity_polynomial().right_value()
        )
        total += float(jump @ (mass @ jump))

    return 0.5 * total


def energy_norm_squared(
    source: trajectory.Trajectory, operators: spatial.SpatialOperators
) -> float:
    """
    ||u||^2_{Linf(0,T;L2)} + nu int_0^T ||u||^2_A + |u|_J^2 + sum_n Q_n(|u|^2_gamma).

    The Linf part is sampled at the Radau nodes, slab ends and ell + 3 interior points.
    The A-norm integrand has degree 2 ell in time, so the Radau rule is exact.
    """
    degree = source.grid.degree
    linf_sq = 0.0
    a_norm_sq = 0.0
    gamma_sq = 0.0
    for slab in source.slabs:
        basis = slab.basis
        times = errors.linf_sample_times(basis.start, basis.end, basis.nodes, degree + 3)
        for values in slab.velocity_polynomial().evaluate(times):
            linf_sq = max(linf_sq, float(values @ (operators.mass @ values)))

        for i in range(basis.size):
            a_norm_sq += basis.weights[i] * float(
                slab.velocity[i] @ (operators.energy @ slab.velocity[i])
            )
            gamma_sq += basis.weights[i] * convection.gamma_seminorm_squared(
                operators, slab.gamma[i], slab.velocity[i]
            )

    return (
        linf_sq
        + source.viscosity * a_norm_sq
        + time_jump_seminorm_squared(source, operators.mass)
        + gamma_sq
    )


def data_norm_squared(flow_problem: problem.FlowProblem) -> float:
    """
    ||f||^2_{L1(0,T;L2)} + ||u_0||^2_{L2}.
    """
    velocities = flow_problem.velocity_space
    volume = tabulation.VolumeTabulation(
        velocities, flow_problem.pressure_space, 2 * velocities.degree + 4
    )
    flat_points = volume.points.reshape(-1, 2)

    def l2_norm(values: np.ndarray) -> float:
        values = values.reshape(volume.points.shape)
        return float(np.sqrt(np.einsum("ep,epc,epc->", volume.weights, values, values)))

    result, rule = quadrature.gauss_legendre(DATA_NORM_TIME_POINTS)
    assert result and rule is not None

    forcing_l1 = 0.0
    breaks = flow_problem.grid.breaks
    for start, end in zip(breaks[:-1], breaks[1:]):
        mapped = rule.mapped(float(start), float(end))
        forcing_l1 += sum(
            weight * l2_norm(np.asarray(flow_problem.forcing(flat_points, float(time))))
            for time, weight in zip(mapped.nodes, mapped.weights)
        )

    initial = l2_norm(np.asarray(flow_problem.initial_velocity(flat_points)))
    return forcing_l1**2 + initial**2
