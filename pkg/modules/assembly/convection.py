"""
Linearized convection form with upwind facet stabilization at one time node.

c(w; u, v) = ((grad u) w, v) - sum_{F interior} ((w . n_F) [u], {v})_F
             + 1/2 sum_{F interior} (gamma_F(w) [u], [v])_F
gamma_F(w) = max(c_S, max_F |w . n_F|)
"""

import numpy as np
import scipy.sparse

from . import spatial
from . import tabulation
from ..logger import logger


# Tolerance of the solenoidal check on transport fields
DIVERGENCE_WARNING_TOLERANCE = 1.0e-10


class ConvectionSnapshot:
    """
    transport: c_bar + c_hat, the volume and upwind parts
    penalty: c_tilde, the gamma-weighted jump penalty
    matrix: transport + penalty
    gamma: gamma_F on every facet (c_S on boundary facets, where it is not used)
    """

    def __init__(
        self,
        node_index: int,
        transport: scipy.sparse.csr_matrix,
        penalty: scipy.sparse.csr_matrix,
        gamma: np.ndarray,
        divergence_norm: float,
    ) -> None:
        self.node_index = node_index
        self.transport = transport
        self.penalty = penalty
        self.matrix = transport + penalty
        self.gamma = gamma
        self.divergence_norm = divergence_norm


class GammaEvaluator:
    """
    Samples |w . n_F| on a (2k + 3)-point Gauss-Legendre grid per facet.
    """

    def __init__(self, operators: spatial.SpatialOperators) -> None:
        velocities = operators.velocity_space
        self.__velocity_space = velocities
        self.__facets = tabulation.FacetTabulation(velocities, 2 * velocities.degree + 3)

    def gamma(self, transport_coefficients: np.ndarray, safeguard: float) -> np.ndarray:
        """
        gamma_F for every facet.
        """
        local = self.__velocity_space.local_coefficients(transport_coefficients)
        normal = np.abs(self.__facets.normal_velocity(local))
        gamma = np.maximum(safeguard, normal.max(axis=1))
        return np.where(self.__facets.interior, gamma, safeguard)


def gamma_penalty_matrix(
    operators: spatial.SpatialOperators, gamma: np.ndarray
) -> scipy.sparse.csr_matrix:
    """
    1/2 sum over interior facets of (gamma_F [u], [v]).
    """
    facets = operators.facets
    jumps = facets.jumps()
    weights = 0.5 * facets.weights * (gamma * facets.interior)[:, None]
    local = np.einsum("fq,fqic,fqjc->fij", weights, jumps, jumps)
    size = operators.velocity_size
    return tabulation.scatter_matrix(local, facets.stacked_dofs, facets.stacked_dofs, (size, size))


def gamma_seminorm_squared(
    operators: spatial.SpatialOperators, gamma: np.ndarray, coefficients: np.ndarray
) -> float:
    """
    |u|^2_{gamma} = 1/2 sum over interior facets of gamma_F ||[u]||^2_F.
    """
    facets = operators.facets
    local = operators.velocity_space.local_coefficients(coefficients)
    jumps = facets.jump_values(local)
    weights = 0.5 * facets.weights * (gamma * facets.interior)[:, None]
    return float(np.einsum("fq,fqc,fqc->", weights, jumps, jumps))


def assemble_convection(
    operators: spatial.SpatialOperators,
    gamma_evaluator: GammaEvaluator,
    transport_coefficients: np.ndarray,
    safeguard: float,
    node_index: int = 0,
    local_logger: "logger.Logger | None" = None,
) -> "tuple[True, ConvectionSnapshot] | tuple[False, None]":
    """
    Assemble the convection matrix for the transport field w at one time node.
    """
    if len(transport_coefficients) != operators.velocity_size or safeguard <= 0.0:
        return False, None

    volume = operators.volume
    facets = operators.facets
    local = operators.velocity_space.local_coefficients(transport_coefficients)
    size = operators.velocity_size

    divergence = volume.velocity_divergence(local)
    divergence_norm = float(np.sqrt(np.sum(volume.weights * divergence**2)))
    if local_logger is not None:
        scale = max(1.0, operators.mass_norm(transport_coefficients))
        tolerance = DIVERGENCE_WARNING_TOLERANCE * scale
        if divergence_norm > tolerance:
            local_logger.warning(
                f"Transport field at node {node_index} is not divergence free: {divergence_norm}"
            )

    transport_values = volume.velocity_values(local)
    volume_local = np.einsum(
        "ep,epjcd,epd,epic->eij",
        volume.weights,
        volume.velocity.gradients,
        transport_values,
        volume.velocity.values,
    )

    normal_velocity = facets.normal_velocity(local) * facets.interior[:, None]
    upwind_local = -np.einsum(
        "fq,fq,fqic,fqjc->fij",
        facets.weights,
        normal_velocity,
        facets.averages(),
        facets.jumps(),
    )

    transport = tabulation.scatter_matrix(
        volume_local, volume.velocity_dofs, volume.velocity_dofs, (size, size)
    ) + tabulation.scatter_matrix(
        upwind_local, facets.stacked_dofs, facets.stacked_dofs, (size, size)
    )

    gamma = gamma_evaluator.gamma(transport_coefficients, safeguard)
    penalty = gamma_penalty_matrix(operators, gamma)

    return True, ConvectionSnapshot(node_index, transport, penalty, gamma, divergence_norm)
