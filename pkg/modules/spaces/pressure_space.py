"""
Discontinuous P_k pressure space in the elementwise monomial basis x_hat^a y_hat^b of the
reference coordinates.
"""

from typing import Callable

import numpy as np

from . import reference_element
from ..mesh import mesh
from ..quadrature import quadrature


class PressureSpace:
    """
    Q_h = P_k(T_h); the zero-mean condition is imposed through mean_vector.
    """

    __create_key = object()

    @classmethod
    def create(
        cls, pressure_mesh: mesh.Mesh, degree: int
    ) -> "tuple[True, PressureSpace] | tuple[False, None]":
        """
        Falliable create (instantiation) method to create a PressureSpace object.
        """
        if degree < 1:
            return False, None

        return True, PressureSpace(cls.__create_key, pressure_mesh, degree)

    def __init__(
        self, class_private_create_key: object, pressure_mesh: mesh.Mesh, degree: int
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is PressureSpace.__create_key, "Use create() method"

        self.mesh = pressure_mesh
        self.degree = degree
        self.exponents = reference_element.monomial_exponents(degree)
        self.local_dimension = len(self.exponents)
        self.dimension = pressure_mesh.element_count * self.local_dimension
        self.dof_map = np.arange(self.dimension).reshape(-1, self.local_dimension)

        # m . q = int_Omega q_h
        reference_means = np.array(
            [quadrature.monomial_triangle_integral(a, b) for a, b in self.exponents]
        )
        self.mean_vector = (
            pressure_mesh.element_determinants[:, None] * reference_means[None, :]
        ).ravel()

    def tabulate(self, reference_points: np.ndarray) -> np.ndarray:
        """
        Basis values at reference points, shape (P, n).
        """
        return reference_element.monomial_values(self.exponents, np.atleast_2d(reference_points))

    def mean(self, coefficients: np.ndarray) -> float:
        """
        int_Omega q_h divided by |Omega|.
        """
        return float(self.mean_vector @ coefficients) / float(np.sum(self.mesh.element_areas))

    def evaluate(
        self, coefficients: np.ndarray, element: int, reference_point: np.ndarray
    ) -> float:
        """
        Pressure value at a reference point of an element.
        """
        return float(self.tabulate(reference_point)[0] @ coefficients[self.dof_map[element]])


def build_pressure_space(
    pressure_mesh: mesh.Mesh, degree: int
) -> "tuple[True, PressureSpace] | tuple[False, None]":
    """
    Discontinuous P_k pressure space on a mesh.
    """
    return PressureSpace.create(pressure_mesh, degree)


def l2_project(
    space: PressureSpace, function: Callable[[np.ndarray], np.ndarray], degree: int = 0
) -> np.ndarray:
    """
    Elementwise L2 projection of a scalar function (points (N, 2) -> (N,)).
    """
    if degree <= 0:
        degree = 2 * space.degree + 4

    rule = quadrature.triangle_rule(min(degree, quadrature.MAX_TRIANGLE_DEGREE))
    basis = space.tabulate(rule.nodes)
    local_mass = np.einsum("p,pi,pj->ij", rule.weights, basis, basis)

    elements = np.arange(space.mesh.element_count)
    points = space.mesh.to_physical(elements[:, None], rule.nodes[None, :, :])
    values = np.asarray(function(points.reshape(-1, 2))).reshape(len(elements), len(rule))
    moments = np.einsum("p,pi,ep->ei", rule.weights, basis, values)

    # The determinant cancels between mass and moments
    return np.linalg.solve(local_mass, moments.T).T.ravel()
