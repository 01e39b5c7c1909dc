"""
Raviart-Thomas element of degree k on the reference triangle (0, 0), (1, 0), (0, 1).

Degrees of freedom, in local order:
  facet moments  int_0^1 v(x(s)) . nu_i P_j(2s - 1) ds   (facet i, j = 0..k)
  interior moments  int v . p  for p in the vector monomials of degree <= k - 1
where facet i runs from vertex (i + 1) % 3 to vertex (i + 2) % 3 and nu_i is its outward
normal scaled by the facet length.
"""

import numpy as np

from ..quadrature import quadrature


REFERENCE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

# Outward normals scaled by facet length, rotating the local edge vector clockwise
REFERENCE_SCALED_NORMALS = np.array([[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def monomial_exponents(degree: int) -> np.ndarray:
    """
    Exponents (a, b) of x^a y^b with a + b <= degree, graded order.
    """
    if degree < 0:
        return np.zeros((0, 2), dtype=np.int64)

    return np.array(
        [(total - b, b) for total in range(degree + 1) for b in range(total + 1)], dtype=np.int64
    )


def monomial_values(exponents: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    x^a y^b at the points, shape (P, len(exponents)).
    """
    return points[:, None, 0] ** exponents[None, :, 0] * points[:, None, 1] ** exponents[None, :, 1]


def monomial_gradients(exponents: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Gradients of x^a y^b, shape (P, len(exponents), 2).
    """
    power_x = exponents[None, :, 0]
    power_y = exponents[None, :, 1]
    x = points[:, None, 0]
    y = points[:, None, 1]
    d_x = power_x * x ** np.maximum(power_x - 1, 0) * y**power_y
    d_y = power_y * y ** np.maximum(power_y - 1, 0) * x**power_x
    return np.stack((d_x, d_y), axis=2)


def facet_points(local_facet: int, parameters: np.ndarray) -> np.ndarray:
    """
    Points x(s) on a local facet, s in [0, 1] running in local counter-clockwise order.
    """
    start = REFERENCE_VERTICES[(local_facet + 1) % 3]
    end = REFERENCE_VERTICES[(local_facet + 2) % 3]
    return start + parameters[:, None] * (end - start)


def facet_test_polynomials(degree: int, parameters: np.ndarray) -> np.ndarray:
    """
    Shifted Legendre polynomials P_j(2s - 1), j = 0..degree, shape (len(parameters), degree + 1).
    """
    return np.polynomial.legendre.legvander(2.0 * parameters - 1.0, degree)


class ReferenceTabulation:
    """
    Values (P, n, 2), gradients (P, n, 2, 2) with [..., c, d] = d v_c / d x_d, and
    divergence (P, n) of the reference basis.
    """

    def __init__(self, values: np.ndarray, gradients: np.ndarray) -> None:
        self.values = values
        self.gradients = gradients
        self.divergence = gradients[..., 0, 0] + gradients[..., 1, 1]


class RaviartThomasElement:
    """
    Nodal basis of RT_k dual to the local degrees of freedom.
    """

    __create_key = object()

    @classmethod
    def create(cls, degree: int) -> "tuple[True, RaviartThomasElement] | tuple[False, None]":
        """
        Build the basis by inverting the dof functionals applied to a spanning set.
        """
        if degree < 1:
            return False, None

        return True, RaviartThomasElement(cls.__create_key, degree)

    def __init__(self, class_private_create_key: object, degree: int) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is RaviartThomasElement.__create_key, "Use create() method"

        self.degree = degree
        self.facet_dof_count = degree + 1
        self.interior_dof_count = degree * (degree + 1)
        self.dimension = 3 * self.facet_dof_count + self.interior_dof_count

        # Spanning set P_k^2 + x * homogeneous P_k as coefficients over monomials of degree <= k + 1
        self.__exponents = monomial_exponents(degree + 1)
        index = {tuple(exponent): i for i, exponent in enumerate(self.__exponents)}
        spanning = []
        for power_x, power_y in monomial_exponents(degree):
            for component in range(2):
                coefficients = np.zeros((2, len(self.__exponents)))
                coefficients[component, index[(power_x, power_y)]] = 1.0
                spanning.append(coefficients)
        for power_y in range(degree + 1):
            power_x = degree - power_y
            coefficients = np.zeros((2, len(self.__exponents)))
            coefficients[0, index[(power_x + 1, power_y)]] = 1.0
            coefficients[1, index[(power_x, power_y + 1)]] = 1.0
            spanning.append(coefficients)
        spanning = np.array(spanning)
        assert len(spanning) == self.dimension

        self.__interior_exponents = monomial_exponents(degree - 1)

        vandermonde = self.apply_dofs(
            lambda points: np.einsum(
                "pm,scm->psc", monomial_values(self.__exponents, points), spanning
            )
        )
        self.vandermonde_rank = int(np.linalg.matrix_rank(vandermonde))

        # Basis i = sum_s C[s, i] spanning_s
        self.__coefficients = np.einsum("si,scm->icm", np.linalg.inv(vandermonde), spanning)

    def local_dof(self, local_facet: int, moment: int) -> int:
        """
        Local index of the moment-th facet dof of a local facet.
        """
        return local_facet * self.facet_dof_count + moment

    def apply_dofs(self, evaluate: "(...) -> np.ndarray") -> np.ndarray:  # type: ignore
        """
        Apply every local dof functional to a family of m vector functions.

        evaluate maps reference points (P, 2) to values (P, m, 2); the result is (n, m).
        """
        result, facet_rule = quadrature.gauss_legendre(self.degree + 2)
        assert result and facet_rule is not None
        interior_rule = quadrature.triangle_rule(2 * self.degree + 1)

        rows = []
        test = facet_test_polynomials(self.degree, facet_rule.nodes)
        for local_facet in range(3):
            values = evaluate(facet_points(local_facet, facet_rule.nodes))
            normal_values = values @ REFERENCE_SCALED_NORMALS[local_facet]
            rows.append(np.einsum("q,qj,qm->jm", facet_rule.weights, test, normal_values))

        values = evaluate(interior_rule.nodes)
        scalar = monomial_values(self.__interior_exponents, interior_rule.nodes)
        for i in range(len(self.__interior_exponents)):
            for component in range(2):
                rows.append(
                    np.einsum(
                        "q,q,qm->m", interior_rule.weights, scalar[:, i], values[:, :, component]
                    )[None, :]
                )

        return np.concatenate(rows, axis=0)

    def interior_moment_exponents(self) -> np.ndarray:
        """
        Exponents of the scalar monomials behind the interior dofs (each used for x and y).
        """
        return self.__interior_exponents

    def tabulate(self, points: np.ndarray) -> ReferenceTabulation:
        """
        Basis values, gradients and divergence at reference points (P, 2).
        """
        points = np.atleast_2d(points)
        values = np.einsum(
            "pm,icm->pic", monomial_values(self.__exponents, points), self.__coefficients
        )
        gradients = np.einsum(
            "pmd,icm->picd", monomial_gradients(self.__exponents, points), self.__coefficients
        )
        return ReferenceTabulation(values, gradients)
