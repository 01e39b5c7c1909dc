"""
Basis tabulations at physical quadrature points, shared by every assembly routine.
"""

import numpy as np
import scipy.sparse

from ..quadrature import quadrature
from ..spaces import pressure_space
from ..spaces import reference_element
from ..spaces import velocity_space


class VolumeTabulation:
    """
    Velocity and pressure bases at the points of a triangle rule on every element.
    """

    def __init__(
        self,
        velocities: velocity_space.VelocitySpace,
        pressures: pressure_space.PressureSpace,
        degree: int,
    ) -> None:
        target_mesh = velocities.mesh
        rule = quadrature.triangle_rule(min(degree, quadrature.MAX_TRIANGLE_DEGREE))
        self.elements = np.arange(target_mesh.element_count)

        self.rule = rule
        self.weights = rule.weights[None, :] * target_mesh.element_determinants[:, None]
        self.points = target_mesh.to_physical(self.elements[:, None], rule.nodes[None, :, :])
        self.velocity = velocities.piola(self.elements, velocities.element.tabulate(rule.nodes))
        self.velocity_dofs = velocities.dof_map
        self.pressure = pressures.tabulate(rule.nodes)
        self.pressure_dofs = pressures.dof_map

    def velocity_values(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        Discrete velocity at the points, shape (T, P, 2).
        """
        return np.einsum("ei,epic->epc", local_coefficients, self.velocity.values)

    def velocity_gradients(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        Discrete velocity gradient at the points, shape (T, P, 2, 2).
        """
        return np.einsum("ei,epicd->epcd", local_coefficients, self.velocity.gradients)

    def velocity_divergence(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        Discrete divergence at the points, shape (T, P).
        """
        return np.einsum("ei,epi->ep", local_coefficients, self.velocity.divergence)

    def pressure_values(self, coefficients: np.ndarray) -> np.ndarray:
        """
        Discrete pressure at the points, shape (T, P).
        """
        return np.einsum("ei,pi->ep", coefficients[self.pressure_dofs], self.pressure)


class FacetTabulation:  # pylint: disable=too-many-instance-attributes
    """
    Velocity basis on both sides of a set of facets at Gauss-Legendre points.

    Parameters run from the lower to the higher global vertex. Side 0 is K_+; on boundary
    facets the side 1 values are zero and its dofs point at K_+ (harmless zero entries).
    """

    def __init__(
        self,
        velocities: velocity_space.VelocitySpace,
        point_count: int,
        facets: "np.ndarray | None" = None,
    ) -> None:
        target_mesh = velocities.mesh
        if facets is None:
            facets = np.arange(target_mesh.facet_count)

        result, rule = quadrature.gauss_legendre(point_count)
        assert result and rule is not None

        self.facets = facets
        self.rule = rule
        self.interior = ~target_mesh.is_boundary_facet[facets]
        self.normals = target_mesh.facet_normals[facets]
        self.diameters = target_mesh.facet_diameters[facets]
        self.weights = rule.weights[None, :] * self.diameters[:, None]

        low = target_mesh.vertices[target_mesh.facet_vertices[facets, 0]]
        high = target_mesh.vertices[target_mesh.facet_vertices[facets, 1]]
        self.points = low[:, None, :] + rule.nodes[None, :, None] * (high - low)[:, None, :]

        self.sides = []
        self.dofs = []
        self.elements = []
        for side in range(2):
            elements = target_mesh.facet_elements[facets, side]
            present = elements >= 0
            elements = np.where(present, elements, target_mesh.facet_elements[facets, 0])
            local_facets = np.where(present, target_mesh.facet_local_index[facets, side], 0)
            if side == 1:
                local_facets = np.where(
                    present, local_facets, target_mesh.facet_local_index[facets, 0]
                )

            start = target_mesh.triangles[elements, (local_facets + 1) % 3]
            end = target_mesh.triangles[elements, (local_facets + 2) % 3]
            parameters = np.where(
                (start > end)[:, None], 1.0 - rule.nodes[None, :], rule.nodes[None, :]
            )
            reference_start = reference_element.REFERENCE_VERTICES[(local_facets + 1) % 3]
            reference_end = reference_element.REFERENCE_VERTICES[(local_facets + 2) % 3]
            reference_points = (
                reference_start[:, None, :]
                + parameters[:, :, None] * (reference_end - reference_start)[:, None, :]
            )

            flat = velocities.element.tabulate(reference_points.reshape(-1, 2))
            count = len(facets)
            stacked = reference_element.ReferenceTabulation(
                flat.values.reshape((count, len(rule)) + flat.values.shape[1:]),
                flat.gradients.reshape((count, len(rule)) + flat.gradients.shape[1:]),
            )
            physical = velocities.piola(elements, stacked)
            mask = present.astype(float)
            physical = velocity_space.PhysicalTabulation(
                physical.values * mask[:, None, None, None],
                physical.gradients * mask[:, None, None, None, None],
                physical.divergence * mask[:, None, None],
            )
            self.sides.append(physical)
            self.dofs.append(velocities.dof_map[elements])
            self.elements.append(elements)

        self.stacked_dofs = np.concatenate(self.dofs, axis=1)

    def jumps(self) -> np.ndarray:
        """
        [phi] = phi_+ - phi_- for the stacked dofs, shape (F, Q, 2n, 2).
        """
        return np.concatenate((self.sides[0].values, -self.sides[1].values), axis=2)

    def averages(self) -> np.ndarray:
        """
        {phi} for the stacked dofs (the trace itself on boundary facets), shape (F, Q, 2n, 2).
        """
        plus_weight = np.where(self.interior, 0.5, 1.0)[:, None, None, None]
        return np.concatenate(
            (plus_weight * self.sides[0].values, 0.5 * self.sides[1].values), axis=2
        )

    def average_normal_gradients(self) -> np.ndarray:
        """
        {grad phi} n_F for the stacked dofs, shape (F, Q, 2n, 2).
        """
        plus_weight = np.where(self.interior, 0.5, 1.0)[:, None, None, None]
        plus = np.einsum("fqicd,fd->fqic", self.sides[0].gradients, self.normals)
        minus = np.einsum("fqicd,fd->fqic", self.sides[1].gradients, self.normals)
        return np.concatenate((plus_weight * plus, 0.5 * minus), axis=2)

    def normal_velocity(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        w . n_F at the points, averaged over both sides on interior facets, shape (F, Q).
        """
        plus = np.einsum(
            "fi,fqic,fc->fq",
            local_coefficients[self.elements[0]],
            self.sides[0].values,
            self.normals,
        )
        minus = np.einsum(
            "fi,fqic,fc->fq",
            local_coefficients[self.elements[1]],
            self.sides[1].values,
            self.normals,
        )
        return np.where(self.interior[:, None], 0.5 * (plus + minus), plus)

    def jump_values(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        [u_h] at the points (the trace on boundary facets), shape (F, Q, 2).
        """
        plus = np.einsum(
            "fi,fqic->fqc", local_coefficients[self.elements[0]], self.sides[0].values
        )
        minus = np.einsum(
            "fi,fqic->fqc", local_coefficients[self.elements[1]], self.sides[1].values
        )
        return plus - minus

    def trace_values(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        u_h from K_+ at the points, shape (F, Q, 2).
        """
        return np.einsum(
            "fi,fqic->fqc", local_coefficients[self.elements[0]], self.sides[0].values
        )

    def trace_gradients(self, local_coefficients: np.ndarray) -> np.ndarray:
        """
        grad u_h from K_+ at the points, shape (F, Q, 2, 2).
        """
        return np.einsum(
            "fi,fqicd->fqcd", local_coefficients[self.elements[0]], self.sides[0].gradients
        )


def scatter_matrix(
    local: np.ndarray, rows: np.ndarray, columns: np.ndarray, shape: "tuple[int, int]"
) -> scipy.sparse.csr_matrix:
    """
    Sum local blocks (E, n, m) with global rows (E, n) and columns (E, m) into CSR.
    """
    all_rows = np.broadcast_to(rows[:, :, None], local.shape).ravel()
    all_columns = np.broadcast_to(columns[:, None, :], local.shape).ravel()
    return scipy.sparse.coo_matrix((local.ravel(), (all_rows, all_columns)), shape=shape).tocsr()


def scatter_vector(local: np.ndarray, rows: np.ndarray, size: int) -> np.ndarray:
    """
    Sum local vectors (E, n) with global rows (E, n).
    """
    return np.bincount(rows.ravel(), weights=local.ravel(), minlength=size)
