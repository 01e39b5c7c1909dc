"""
Error quantities of a discrete trajectory against an exact solution.

err(u)^2 = ||e||^2_{Linf(0,T;L2)} + nu int_0^T ||e||^2_A + sum_n Q_n(|e|^2_gamma)
with e = u - u_h, ||v||^2_A = ||grad_h v||^2 + sum_F sigma / h_F ||[v]||^2_F and the gamma
seminorm evaluated with the Radau rule and the gamma_F values stored in the trajectory.
"""

import math
from typing import Protocol

import numpy as np

from ..assembly import tabulation
from ..quadrature import quadrature
from ..solver import trajectory


class ExactSolution(Protocol):
    """
    Closed-form velocity, velocity gradient and pressure.
    """

    def velocity(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        (N, 2) -> (N, 2).
        """

    def velocity_gradient(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        (N, 2) -> (N, 2, 2) with [c, d] = d u_c / d x_d.
        """

    def pressure(self, points: np.ndarray, time: float) -> np.ndarray:
        """
        (N, 2) -> (N,).
        """


class ErrorReport:  # pylint: disable=too-many-instance-attributes
    """
    Components of err(u) and the final-time pressure and divergence witnesses.
    """

    def __init__(
        self,
        slab_linf_l2: np.ndarray,
        slab_a_norm_sq: np.ndarray,
        slab_gamma_jump_sq: np.ndarray,
        pressure_l2_final: float,
        max_divergence: float,
    ) -> None:
        self.slab_linf_l2 = slab_linf_l2
        self.slab_a_norm_sq = slab_a_norm_sq
        self.slab_gamma_jump_sq = slab_gamma_jump_sq
        self.linf_l2_velocity = float(slab_linf_l2.max())
        self.a_norm_sq_weighted = float(slab_a_norm_sq.sum())
        self.gamma_jump_sq = float(slab_gamma_jump_sq.sum())
        self.err_u = math.sqrt(
            self.linf_l2_velocity**2 + self.a_norm_sq_weighted + self.gamma_jump_sq
        )
        self.pressure_l2_final = pressure_l2_final
        self.max_divergence = max_divergence

    def __repr__(self) -> str:
        return (
            f"err_u: {self.err_u:.6e}, linf_l2: {self.linf_l2_velocity:.6e}, "
            f"a_norm_sq: {self.a_norm_sq_weighted:.6e}, gamma_jump_sq: {self.gamma_jump_sq:.6e}, "
            f"p_final: {self.pressure_l2_final:.6e}, max_div: {self.max_divergence:.6e}"
        )


class ErrorIntegrator:
    """
    Spatial error integrals at degree 2k + 4 (volume) and k + 3 Gauss points (facets).
    """

    def __init__(self, source: trajectory.Trajectory) -> None:
        velocities = source.velocity_space
        self.trajectory = source
        self.volume = tabulation.VolumeTabulation(
            velocities, source.pressure_space, 2 * velocities.degree + 4
        )
        self.facets = tabulation.FacetTabulation(velocities, velocities.degree + 3)

    def velocity_l2_sq(self, exact: ExactSolution, coefficients: np.ndarray, time: float) -> float:
        """
        ||u(t) - u_h||^2_{L2}.
        """
        volume = self.volume
        local = self.trajectory.velocity_space.local_coefficients(coefficients)
        exact_values = exact.velocity(volume.points.reshape(-1, 2), time).reshape(
            volume.points.shape
        )
        difference = exact_values - volume.velocity_values(local)
        return float(np.einsum("ep,epc,epc->", volume.weights, difference, difference))

    def a_norm_sq(self, exact: ExactSolution, coefficients: np.ndarray, time: float) -> float:
        """
        ||u(t) - u_h||^2_A; the exact solution has no jumps and equals g on the boundary.
        """
        volume = self.volume
        facets = self.facets
        local = self.trajectory.velocity_space.local_coefficients(coefficients)

        exact_gradients = exact.velocity_gradient(volume.points.reshape(-1, 2), time).reshape(
            volume.points.shape + (2,)
        )
        difference = exact_gradients - volume.velocity_gradients(local)
        total = float(np.einsum("ep,epcd,epcd->", volume.weights, difference, difference))

        jumps = facets.jump_values(local)
        exact_traces = exact.velocity(facets.points.reshape(-1, 2), time).reshape(
            facets.points.shape
        )
        error_jumps = np.where(facets.interior[:, None, None], -jumps, exact_traces - jumps)
        penalty_weights = facets.weights * (self.trajectory.penalty / facets.diameters)[:, None]
        total += float(np.einsum("fq,fqc,fqc->", penalty_weights, error_jumps, error_jumps))
        return total

    def gamma_jump_sq(self, coefficients: np.ndarray, gamma: np.ndarray) -> float:
        """
        1/2 sum over interior facets of gamma_F ||[u_h]||^2_F (the exact solution has no jumps).
        """
        facets = self.facets
        local = self.trajectory.velocity_space.local_coefficients(coefficients)
        jumps = facets.jump_values(local)
        weights = 0.5 * facets.weights * (gamma * facets.interior)[:, None]
        return float(np.einsum("fq,fqc,fqc->", weights, jumps, jumps))

    def divergence_l2(self, coefficients: np.ndarray) -> float:
        """
        ||div u_h||_{L2}.
        """
        local = self.trajectory.velocity_space.local_coefficients(coefficients)
        divergence = self.volume.velocity_divergence(local)
        return float(np.sqrt(np.sum(self.volume.weights * divergence**2)))

    def velocity_l2(self, coefficients: np.ndarray) -> float:
        """
        ||u_h||_{L2}.
        """
        local = self.trajectory.velocity_space.local_coefficients(coefficients)
        values = self.volume.velocity_values(local)
        return float(np.sqrt(np.einsum("ep,epc,epc->", self.volume.weights, values, values)))


def linf_sample_times(
    start: float, end: float, nodes: np.ndarray, interior_count: int
) -> np.ndarray:
    """
    Radau nodes, the slab end and interior_count equispaced interior points.
    """
    interior = np.linspace(start, end, interior_count + 2)[1:-1]
    return np.unique(np.concatenate((nodes, [start, end], interior)))


def error_energy(
    source: trajectory.Trajectory,
    exact: ExactSolution,
    linf_interior_samples: int = 0,
    integrator: "ErrorIntegrator | None" = None,
) -> ErrorReport:
    """
    err(u) and its components, the final-time pressure error and the divergence witness.
    """
    if integrator is None:
        integrator = ErrorIntegrator(source)

    degree = source.grid.degree
    if linf_interior_samples <= 0:
        linf_interior_samples = degree + 3

    result, rule = quadrature.gauss_legendre(degree + 3)
    assert result and rule is not None

    slab_count = len(source.slabs)
    slab_linf = np.zeros(slab_count)
    slab_a_norm = np.zeros(slab_count)
    slab_gamma = np.zeros(slab_count)
    for n, slab in enumerate(source.slabs):
        basis = slab.basis
        velocity = slab.velocity_polynomial()

        times = linf_sample_times(basis.start, basis.end, basis.nodes, linf_interior_samples)
        samples = velocity.evaluate(times)
        slab_linf[n] = math.sqrt(
            max(
                integrator.velocity_l2_sq(exact, samples[i], float(time))
                for i, time in enumerate(times)
            )
        )

        mapped = rule.mapped(basis.start, basis.end)
        values = velocity.evaluate(mapped.nodes)
        slab_a_norm[n] = source.viscosity * sum(
            weight * integrator.a_norm_sq(exact, values[q], float(time))
            for q, (time, weight) in enumerate(zip(mapped.nodes, mapped.weights))
        )

        slab_gamma[n] = sum(
            basis.weights[i] * integrator.gamma_jump_sq(slab.velocity[i], slab.gamma[i])
            for i in range(basis.size)
        )

    return ErrorReport(
        slab_linf,
        slab_a_norm,
        slab_gamma,
        error_pressure_final(source, exact, integrator),
        divergence_norm(source, integrator),
    )


def error_pressure_final(
    source: trajectory.Trajectory,
    exact: ExactSolution,
    integrator: "ErrorIntegrator | None" = None,
) -> float:
    """
    ||(p - mean p) - (p_h - mean p_h)||_{L2} at t = T^-.
    """
    if integrator is None:
        integrator = ErrorIntegrator(source)

    volume = integrator.volume
    final_time = source.grid.final_time
    discrete = volume.pressure_values(source.slabs[-1].pressure_polynomial().right_value())
    exact_values = exact.pressure(volume.points.reshape(-1, 2), final_time).reshape(
        volume.weights.shape
    )

    area = float(volume.weights.sum())
    discrete = discrete - float(np.sum(volume.weights * discrete)) / area
    exact_values = exact_values - float(np.sum(volume.weights * exact_values)) / area
    return float(np.sqrt(np.sum(volume.weights * (exact_values - discrete) ** 2)))


def divergence_norm(
    source: trajectory.Trajectory, integrator: "ErrorIntegrator | None" = None
) -> float:
    """
    max over slabs and Radau nodes of ||div u_h||_{L2}.
    """
    if integrator is None:
        integrator = ErrorIntegrator(source)

    return max(
        (integrator.divergence_l2(values) for slab in source.slabs for values in slab.velocity),
        default=0.0,
    )


def max_velocity_norm(
    source: trajectory.Trajectory, integrator: "ErrorIntegrator | None" = None
) -> float:
    """
    max over slabs and Radau nodes of ||u_h||_{L2}.
    """
    if integrator is None:
        integrator = ErrorIntegrator(source)

    return max(
        (integrator.velocity_l2(values) for slab in source.slabs for values in slab.velocity),
        default=0.0,
    )


def convergence_rates(
    errors: "list[float]", sizes: "list[float]"
) -> "tuple[True, list[float]] | tuple[False, None]":
    """
    rate_i = log(e_i / e_(i+1)) / log(s_i / s_(i+1)).
    """
    if len(errors) != len(sizes) or len(errors) < 2:
        return False, None

    if any(value <= 0.0 for value in errors) or any(value <= 0.0 for value in sizes):
        return False, None

    if any(sizes[i + 1] >= sizes[i] for i in range(len(sizes) - 1)):
        return False, None

    return True, [
        math.log(errors[i] / errors[i + 1]) / math.log(sizes[i] / sizes[i + 1])
        for i in range(len(errors) - 1)
    ]
