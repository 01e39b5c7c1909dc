"""
Spatial operators of the velocity-pressure discretization and the right-hand side loads.
"""

from typing import Callable

import numpy as np

from . import tabulation
from ..spaces import pressure_space
from ..spaces import velocity_space


class SpatialOperators:  # pylint: disable=too-many-instance-attributes
    """
    mass: (u, v)
    diffusion: symmetric interior penalty form with penalty sigma over all facets
    divergence: -(div u, q), shape (N_Q, N_V)
    mean_vector: m . q = int_Omega q
    energy: discrete A-norm, ||grad_h v||^2 + sum_F sigma / h_F ||[v]||^2
    """

    def __init__(
        self,
        velocities: velocity_space.VelocitySpace,
        pressures: pressure_space.PressureSpace,
        viscosity: float,
        penalty: float,
        volume: tabulation.VolumeTabulation,
        facets: tabulation.FacetTabulation,
    ) -> None:
        self.velocity_space = velocities
        self.pressure_space = pressures
        self.viscosity = viscosity
        self.penalty = penalty
        self.volume = volume
        self.facets = facets

        size = velocities.dimension
        values = volume.velocity.values
        gradients = volume.velocity.gradients
        dofs = volume.velocity_dofs

        self.mass = tabulation.scatter_matrix(
            np.einsum("ep,epic,epjc->eij", volume.weights, values, values), dofs, dofs, (size, size)
        )
        stiffness = tabulation.scatter_matrix(
            np.einsum("ep,epicd,epjcd->eij", volume.weights, gradients, gradients),
            dofs,
            dofs,
            (size, size),
        )

        jumps = facets.jumps()
        normal_gradients = facets.average_normal_gradients()
        penalty_weights = facets.weights * (penalty / facets.diameters)[:, None]
        jump_penalty = np.einsum("fq,fqic,fqjc->fij", penalty_weights, jumps, jumps)
        consistency = np.einsum("fq,fqic,fqjc->fij", facets.weights, jumps, normal_gradients)
        stacked = facets.stacked_dofs

        # consistency[f, i, j] = ({grad phi_j} n, [phi_i]); the symmetric term is its transpose
        facet_diffusion = jump_penalty - consistency - np.transpose(consistency, (0, 2, 1))
        self.diffusion = stiffness + tabulation.scatter_matrix(
            facet_diffusion, stacked, stacked, (size, size)
        )
        self.energy = stiffness + tabulation.scatter_matrix(
            jump_penalty, stacked, stacked, (size, size)
        )

        self.divergence = tabulation.scatter_matrix(
            -np.einsum(
                "ep,pq,epj->eqj", volume.weights, volume.pressure, volume.velocity.divergence
            ),
            volume.pressure_dofs,
            dofs,
            (pressures.dimension, size),
        )
        self.mean_vector = pressures.mean_vector

    @property
    def velocity_size(self) -> int:
        """
        N_V.
        """
        return self.velocity_space.dimension

    @property
    def pressure_size(self) -> int:
        """
        N_Q.
        """
        return self.pressure_space.dimension

    def mass_norm(self, coefficients: np.ndarray) -> float:
        """
        L2(Omega) norm of a discrete velocity.
        """
        return float(np.sqrt(max(coefficients @ (self.mass @ coefficients), 0.0)))


def assemble_spatial(
    velocities: velocity_space.VelocitySpace,
    pressures: pressure_space.PressureSpace,
    viscosity: float,
    penalty: float,
) -> "tuple[True, SpatialOperators] | tuple[False, None]":
    """
    Assemble M, A, B and m. Volume integrals are exact for the trilinear convection
    integrand (degree 3k + 2); facet rules use k + 3 Gauss points.
    """
    if penalty <= 0.0 or viscosity <= 0.0:
        return False, None

    if velocities.mesh is not pressures.mesh:
        return False, None

    degree = velocities.degree
    volume = tabulation.VolumeTabulation(velocities, pressures, 3 * degree + 2)
    facets = tabulation.FacetTabulation(velocities, degree + 3)
    return True, SpatialOperators(velocities, pressures, viscosity, penalty, volume, facets)


class LoadAssembler:
    """
    Right-hand side vectors at a separately chosen quadrature degree.
    """

    def __init__(self, operators: SpatialOperators, quadrature_degree: int) -> None:
        velocities = operators.velocity_space
        self.__operators = operators
        self.__volume = tabulation.VolumeTabulation(
            velocities, operators.pressure_space, quadrature_degree
        )
        self.__boundary = tabulation.FacetTabulation(
            velocities, quadrature_degree // 2 + 1, velocities.boundary_facets
        )

    def body_force(self, forcing: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """
        (f, v) for every basis function v.
        """
        volume = self.__volume
        values = np.asarray(forcing(volume.points.reshape(-1, 2))).reshape(volume.points.shape)
        local = np.einsum("ep,epc,epic->ei", volume.weights, values, volume.velocity.values)
        return tabulation.scatter_vector(
            local, volume.velocity_dofs, self.__operators.velocity_size
        )

    def boundary_penalty(self, boundary_data: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """
        -(g, grad v n) + sigma / h_F (g, v) summed over boundary facets (without the viscosity).
        """
        facets = self.__boundary
        values = np.asarray(boundary_data(facets.points.reshape(-1, 2))).reshape(
            facets.points.shape
        )
        plus = facets.sides[0]
        normal_gradients = np.einsum("fqicd,fd->fqic", plus.gradients, facets.normals)
        penalty_weights = facets.weights * (self.__operators.penalty / facets.diameters)[:, None]
        local = np.einsum(
            "fq,fqc,fqic->fi", penalty_weights, values, plus.values
        ) - np.einsum("fq,fqc,fqic->fi", facets.weights, values, normal_gradients)
        return tabulation.scatter_vector(local, facets.dofs[0], self.__operators.velocity_size)
