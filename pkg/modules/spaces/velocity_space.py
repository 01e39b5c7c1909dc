"""
Global RT_k velocity space: dof numbering, facet orientation signs, contravariant Piola
mapping, boundary normal dofs and the canonical RT interpolant.

Global numbering: facet f owns dofs f * (k + 1) + j, element e owns the interior dofs
F * (k + 1) + e * k (k + 1) + i. A global facet dof is the moment
int_0^1 u(x(s)) . (h_F n_F) P_j(2s - 1) ds with s running from the lower to the higher
vertex index and n_F the outward normal of K_+.
"""

from typing import Callable

import numpy as np

from . import reference_element
from ..mesh import mesh
from ..quadrature import quadrature


SUPPORTED_DEGREES = (1, 2)

VectorField = Callable[[np.ndarray], np.ndarray]


class PhysicalTabulation:
    """
    Piola-mapped basis on a set of elements: values (E, P, n, 2), gradients (E, P, n, 2, 2),
    divergence (E, P, n). Orientation signs are already applied.
    """

    def __init__(self, values: np.ndarray, gradients: np.ndarray, divergence: np.ndarray) -> None:
        self.values = values
        self.gradients = gradients
        self.divergence = divergence


class PointEvaluation:
    """
    Value, gradient matrix and divergence of a discrete velocity at one point.
    """

    def __init__(self, value: np.ndarray, gradient: np.ndarray, divergence: float) -> None:
        self.value = value
        self.gradient = gradient
        self.divergence = divergence

    def __repr__(self) -> str:
        return (
            f"value: {self.value}, gradient: {self.gradient.tolist()}, "
            f"divergence: {self.divergence}"
        )


class VelocitySpace:  # pylint: disable=too-many-instance-attributes
    """
    V_h = RT_k(T_h).
    """

    __create_key = object()

    @classmethod
    def create(
        cls, velocity_mesh: mesh.Mesh, degree: int
    ) -> "tuple[True, VelocitySpace] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a VelocitySpace object.
        """
        if degree not in SUPPORTED_DEGREES:
            return False, None

        result, element = reference_element.RaviartThomasElement.create(degree)
        if not result:
            return False, None

        # Get Pylance to stop complaining
        assert element is not None

        return True, VelocitySpace(cls.__create_key, velocity_mesh, element)

    def __init__(
        self,
        class_private_create_key: object,
        velocity_mesh: mesh.Mesh,
        element: reference_element.RaviartThomasElement,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is VelocitySpace.__create_key, "Use create() method"

        self.mesh = velocity_mesh
        self.element = element
        self.degree = element.degree
        self.local_dimension = element.dimension

        facet_dofs = element.facet_dof_count
        interior_dofs = element.interior_dof_count
        element_count = velocity_mesh.element_count
        self.interior_offset = velocity_mesh.facet_count * facet_dofs
        self.dimension = self.interior_offset + element_count * interior_dofs

        moments = np.arange(facet_dofs)
        self.dof_map = np.zeros((element_count, self.local_dimension), dtype=np.int64)
        self.dof_signs = np.ones((element_count, self.local_dimension))
        for local_facet in range(3):
            local = local_facet * facet_dofs + moments
            facets = velocity_mesh.element_facets[:, local_facet]
            self.dof_map[:, local] = facets[:, None] * facet_dofs + moments[None, :]

            start, end = mesh.LOCAL_FACET_VERTICES[local_facet]
            reversed_edge = (
                velocity_mesh.triangles[:, start] > velocity_mesh.triangles[:, end]
            )
            parity = np.where(reversed_edge[:, None], (-1.0) ** moments[None, :], 1.0)
            facet_signs = velocity_mesh.element_facet_signs[:, local_facet, None]
            self.dof_signs[:, local] = facet_signs * parity

        self.dof_map[:, 3 * facet_dofs :] = (
            self.interior_offset
            + np.arange(element_count)[:, None] * interior_dofs
            + np.arange(interior_dofs)[None, :]
        )

        boundary_facets = np.flatnonzero(velocity_mesh.is_boundary_facet)
        self.boundary_facets = boundary_facets
        self.boundary_dofs = (boundary_facets[:, None] * facet_dofs + moments[None, :]).ravel()

    def facet_dofs(self, facet: int) -> np.ndarray:
        """
        Global dofs of one facet.
        """
        count = self.element.facet_dof_count
        return facet * count + np.arange(count)

    def local_coefficients(self, coefficients: np.ndarray) -> np.ndarray:
        """
        Per-element coefficients of the mapped basis, shape (T, n).

        The orientation signs live in piola(), so these pair with a PhysicalTabulation as they are.
        """
        return coefficients[self.dof_map]

    def piola(
        self, elements: np.ndarray, tabulation: reference_element.ReferenceTabulation
    ) -> PhysicalTabulation:
        """
        Contravariant Piola transform of a reference tabulation onto the given elements.

        If tabulation has one point set (P, ...) it is shared by all elements; a stacked
        tabulation (E, P, ...) is mapped element by element.
        """
        jacobians = self.mesh.element_jacobians[elements]
        inverses = self.mesh.element_inverse_jacobians[elements]
        determinants = self.mesh.element_determinants[elements]
        signs = self.dof_signs[elements]

        values = tabulation.values
        gradients = tabulation.gradients
        divergence = tabulation.divergence
        if values.ndim == 3:
            values = np.broadcast_to(values, (len(elements),) + values.shape)
            gradients = np.broadcast_to(gradients, (len(elements),) + gradients.shape)
            divergence = np.broadcast_to(divergence, (len(elements),) + divergence.shape)

        scale = signs / determinants[:, None]
        mapped_values = np.einsum("eab,epib->epia", jacobians, values) * scale[:, None, :, None]
        mapped_gradients = (
            np.einsum("eab,epibc,ecd->epiad", jacobians, gradients, inverses)
            * scale[:, None, :, None, None]
        )
        mapped_divergence = divergence * scale[:, None, :]
        return PhysicalTabulation(mapped_values, mapped_gradients, mapped_divergence)


def build_velocity_space(
    velocity_mesh: mesh.Mesh, degree: int
) -> "tuple[True, VelocitySpace] | tuple[False, None]":
    """
    RT_k velocity space on a mesh, k in {1, 2}.
    """
    return VelocitySpace.create(velocity_mesh, degree)


def facet_moments(
    space: VelocitySpace, field: VectorField, facets: np.ndarray, point_count: int = 0
) -> np.ndarray:
    """
    Global facet dofs of a field on the given facets, shape (len(facets), k + 1).
    """
    if point_count <= 0:
        point_count = space.degree + 3

    result, rule = quadrature.gauss_legendre(point_count)
    assert result and rule is not None

    low = space.mesh.vertices[space.mesh.facet_vertices[facets, 0]]
    high = space.mesh.vertices[space.mesh.facet_vertices[facets, 1]]
    points = low[:, None, :] + rule.nodes[None, :, None] * (high - low)[:, None, :]
    values = np.asarray(field(points.reshape(-1, 2))).reshape(len(facets), len(rule), 2)

    scaled_normals = space.mesh.facet_normals[facets] * space.mesh.facet_diameters[facets, None]
    normal_values = np.einsum("fqc,fc->fq", values, scaled_normals)
    test = reference_element.facet_test_polynomials(space.degree, rule.nodes)
    return np.einsum("q,qj,fq->fj", rule.weights, test, normal_values)


def boundary_normal_moments(space: VelocitySpace, field: VectorField) -> np.ndarray:
    """
    Values of the boundary normal dofs (ordered as space.boundary_dofs) for a field.
    """
    return facet_moments(space, field, space.boundary_facets).ravel()


def rt_interpolate(space: VelocitySpace, field: VectorField) -> np.ndarray:
    """
    Canonical RT interpolant: normal moments on every facet and interior moments against
    vector polynomials of degree k - 1 (pulled back by the inverse Piola map).
    """
    target_mesh = space.mesh
    coefficients = np.zeros(space.dimension)

    all_facets = np.arange(target_mesh.facet_count)
    coefficients[: space.interior_offset] = facet_moments(space, field, all_facets).ravel()

    rule = quadrature.triangle_rule(min(2 * space.degree + 4, quadrature.MAX_TRIANGLE_DEGREE))
    elements = np.arange(target_mesh.element_count)
    points = target_mesh.to_physical(elements[:, None], rule.nodes[None, :, :])
    values = np.asarray(field(points.reshape(-1, 2))).reshape(len(elements), len(rule), 2)

    # Inverse Piola: v_hat = det J J^-1 v
    pulled_back = np.einsum(
        "eab,epb->epa", target_mesh.element_inverse_jacobians, values
    ) * target_mesh.element_determinants[:, None, None]
    scalar = reference_element.monomial_values(
        space.element.interior_moment_exponents(), rule.nodes
    )
    interior = np.einsum("p,pi,epc->eic", rule.weights, scalar, pulled_back)
    coefficients[space.interior_offset :] = interior.reshape(len(elements), -1).ravel()

    return coefficients


def evaluate(
    space: VelocitySpace, coefficients: np.ndarray, element: int, reference_point: np.ndarray
) -> "tuple[True, PointEvaluation] | tuple[False, None]":
    """
    Value, gradient and divergence of a discrete velocity at a reference point of an element.
    """
    if element < 0 or element >= space.mesh.element_count:
        return False, None

    if len(coefficients) != space.dimension:
        return False, None

    tabulation = space.element.tabulate(np.asarray(reference_point, dtype=float).reshape(1, 2))
    physical = space.piola(np.array([element]), tabulation)
    local = space.local_coefficients(coefficients)[element]

    value = np.einsum("i,ic->c", local, physical.values[0, 0])
    gradient = np.einsum("i,icd->cd", local, physical.gradients[0, 0])
    divergence = float(local @ physical.divergence[0, 0])
    return True, PointEvaluation(value, gradient, divergence)
