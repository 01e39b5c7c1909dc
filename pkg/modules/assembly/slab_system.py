"""
Block system of one time slab.

Unknowns are ordered [u_1 .. u_(ell+1), p_1 .. p_(ell+1), lambda_1 .. lambda_(ell+1)] (nodal
values at the Radau nodes). Rows of node i:
  sum_j G_ij M u_j + w_i (nu A + C_i) u_i + w_i B^T p_i = w_i F_i + e_i M u(t_(n-1)^-)
  w_i B u_i + w_i m lambda_i = 0
  w_i m^T p_i = 0
Boundary normal dofs are eliminated with their prescribed values.
"""

import numpy as np
import scipy.sparse

from . import convection
from . import spatial
from ..timedisc import slab_basis


class SlabSystem:  # pylint: disable=too-many-instance-attributes
    """
    Assembled slab system and its constrained-dof bookkeeping.
    """

    def __init__(
        self,
        slab_index: int,
        matrix: scipy.sparse.csr_matrix,
        right_hand_side: np.ndarray,
        constrained: np.ndarray,
        constrained_values: np.ndarray,
        node_count: int,
        velocity_size: int,
        pressure_size: int,
    ) -> None:
        self.slab_index = slab_index
        self.matrix = matrix
        self.right_hand_side = right_hand_side
        self.constrained = constrained
        self.constrained_values = constrained_values
        self.node_count = node_count
        self.velocity_size = velocity_size
        self.pressure_size = pressure_size

        is_free = np.ones(len(right_hand_side), dtype=bool)
        is_free[constrained] = False
        self.free = np.flatnonzero(is_free)

    @property
    def size(self) -> int:
        """
        Total number of unknowns including constrained ones.
        """
        return len(self.right_hand_side)

    def reduced(self) -> "tuple[scipy.sparse.csc_matrix, np.ndarray]":
        """
        System on the free unknowns with the constrained values moved to the right-hand side.
        """
        rows = self.matrix[self.free]
        reduced_matrix = rows[:, self.free].tocsc()
        lifted = rows[:, self.constrained] @ self.constrained_values
        return reduced_matrix, self.right_hand_side[self.free] - lifted

    def expand(self, free_values: np.ndarray) -> np.ndarray:
        """
        Full unknown vector from the free values.
        """
        full = np.zeros(self.size)
        full[self.free] = free_values
        full[self.constrained] = self.constrained_values
        return full

    def split(self, full: np.ndarray) -> "tuple[np.ndarray, np.ndarray, np.ndarray]":
        """
        Velocity (ell+1, N_V), pressure (ell+1, N_Q) and multipliers (ell+1,).
        """
        velocity_end = self.node_count * self.velocity_size
        pressure_end = velocity_end + self.node_count * self.pressure_size
        return (
            full[:velocity_end].reshape(self.node_count, self.velocity_size),
            full[velocity_end:pressure_end].reshape(self.node_count, self.pressure_size),
            full[pressure_end:],
        )

    def residual(self, full: np.ndarray) -> float:
        """
        Relative residual of the free rows.
        """
        reduced_matrix, reduced_rhs = self.reduced()
        difference = reduced_matrix @ full[self.free] - reduced_rhs
        return float(np.linalg.norm(difference) / max(np.linalg.norm(reduced_rhs), 1.0e-300))


def build_slab_system(
    operators: spatial.SpatialOperators,
    basis: slab_basis.SlabBasis,
    snapshots: "list[convection.ConvectionSnapshot]",
    loads: np.ndarray,
    previous_end: np.ndarray,
    boundary_values: np.ndarray,
) -> "tuple[True, SlabSystem] | tuple[False, None]":
    """
    Assemble the slab system.

    Parameters:
        loads: (ell+1, N_V) spatial loads at the Radau nodes, not yet weighted.
        previous_end: u(t_(n-1)^-), the RT interpolant of u_0 on the first slab.
        boundary_values: (ell+1, len(boundary_dofs)) prescribed normal moments per node.
    """
    nodes = basis.size
    velocity_size = operators.velocity_size
    pressure_size = operators.pressure_size
    boundary_dofs = operators.velocity_space.boundary_dofs

    if len(snapshots) != nodes:
        return False, None

    if loads.shape != (nodes, velocity_size) or previous_end.shape != (velocity_size,):
        return False, None

    if boundary_values.shape != (nodes, len(boundary_dofs)):
        return False, None

    if any(snapshot.matrix.shape != (velocity_size, velocity_size) for snapshot in snapshots):
        return False, None

    coupling = basis.temporal_coupling()
    weights = basis.weights
    mass = operators.mass
    viscous = operators.viscosity * operators.diffusion
    divergence = operators.divergence
    mean_column = scipy.sparse.csr_matrix(operators.mean_vector.reshape(-1, 1))

    blocks = [[None] * (3 * nodes) for _ in range(3 * nodes)]
    for i in range(nodes):
        for j in range(nodes):
            block = coupling[i, j] * mass
            if i == j:
                block = block + weights[i] * (viscous + snapshots[i].matrix)
            blocks[i][j] = block

        blocks[i][nodes + i] = weights[i] * divergence.T
        blocks[nodes + i][i] = weights[i] * divergence
        blocks[nodes + i][2 * nodes + i] = weights[i] * mean_column
        blocks[2 * nodes + i][nodes + i] = weights[i] * mean_column.T

    matrix = scipy.sparse.bmat(blocks, format="csr")

    right_hand_side = np.zeros(matrix.shape[0])
    inflow = mass @ previous_end
    for i in range(nodes):
        right_hand_side[i * velocity_size : (i + 1) * velocity_size] = (
            weights[i] * loads[i] + basis.left_values[i] * inflow
        )

    constrained = (
        np.arange(nodes)[:, None] * velocity_size + boundary_dofs[None, :]
    ).ravel()

    return True, SlabSystem(
        basis.slab_index,
        matrix,
        right_hand_side,
        constrained,
        boundary_values.ravel(),
        nodes,
        velocity_size,
        pressure_size,
    )


def temporal_form(
    mass: scipy.sparse.spmatrix,
    bases: "list[slab_basis.SlabBasis]",
    nodal_velocities: "list[np.ndarray]",
) -> float:
    """
    m(v, v) over all slabs: sum_n (d_t v, v)_(I_n) + (v(t_(n-1)^+) - v(t_(n-1)^-), v(t_(n-1)^+))
    with v(0^-) = 0.
    """
    total = 0.0
    previous_end = np.zeros(mass.shape[0])
    for basis, nodal in zip(bases, nodal_velocities):
        weighted = nodal @ mass.T
        total += float(np.einsum("ij,ia,ja->", basis.temporal_coupling(), nodal, weighted))
        total -= float(previous_end @ (mass @ (basis.left_values @ nodal)))
        previous_end = basis.right_values @ nodal

    return total
