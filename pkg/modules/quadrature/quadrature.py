"""
Quadrature rules on the reference interval [0, 1] and the reference triangle.

Interval rules: left Gauss-Radau (time stepping) and Gauss-Legendre (error integrals).
Triangle rules: centroid rule for degree <= 1, otherwise the collapsed (conical product)
Gauss rule, which has positive weights and arbitrary exactness.
"""

import math

import numpy as np
import scipy.special


# Highest exactness degree served by triangle_rule()
MAX_TRIANGLE_DEGREE = 20


class QuadratureRule:
    """
    Nodes and positive weights on a reference domain.

    nodes has shape (m,) on the interval and (m, 2) on the triangle.
    """

    def __init__(self, nodes: np.ndarray, weights: np.ndarray, exactness_degree: int) -> None:
        self.nodes = nodes
        self.weights = weights
        self.exactness_degree = exactness_degree

    def __len__(self) -> int:
        return len(self.weights)

    def mapped(self, start: float, end: float) -> "QuadratureRule":
        """
        Affine image of an interval rule on [start, end]. Weights scale by (end - start).
        """
        assert self.nodes.ndim == 1, "Only interval rules can be mapped to an interval"
        length = end - start
        return QuadratureRule(
            start + length * self.nodes, length * self.weights, self.exactness_degree
        )

    def integrate(self, values: np.ndarray) -> "float | np.ndarray":
        """
        Weighted sum over the leading axis of values sampled at the nodes.
        """
        return np.tensordot(self.weights, values, axes=(0, 0))


def _legendre_moment_weights(nodes: np.ndarray) -> np.ndarray:
    """
    Solve the moment system on [0, 1] in the shifted Legendre basis: int P_j = delta_j0.
    """
    count = len(nodes)
    vandermonde = np.polynomial.legendre.legvander(2.0 * nodes - 1.0, count - 1).T
    moments = np.zeros(count)
    moments[0] = 1.0
    return np.linalg.solve(vandermonde, moments)


def gauss_radau_left(point_count: int) -> "tuple[True, QuadratureRule] | tuple[False, None]":
    """
    Left-sided Gauss-Radau rule on [0, 1]: first node is 0, right endpoint excluded.

    The free nodes are the Gauss-Jacobi nodes of the weight (1 + x) on [-1, 1].
    Exact for polynomials of degree 2 * point_count - 2.
    """
    if point_count < 1:
        return False, None

    if point_count == 1:
        return True, QuadratureRule(np.zeros(1), np.ones(1), 0)

    free_nodes, _ = scipy.special.roots_jacobi(point_count - 1, 0.0, 1.0)
    nodes = np.concatenate(([0.0], 0.5 * (np.sort(free_nodes) + 1.0)))
    weights = _legendre_moment_weights(nodes)

    return True, QuadratureRule(nodes, weights, 2 * point_count - 2)


def gauss_legendre(point_count: int) -> "tuple[True, QuadratureRule] | tuple[False, None]":
    """
    Gauss-Legendre rule on [0, 1], exact for polynomials of degree 2 * point_count - 1.
    """
    if point_count < 1:
        return False, None

    nodes, weights = scipy.special.roots_legendre(point_count)
    order = np.argsort(nodes)
    return True, QuadratureRule(
        0.5 * (nodes[order] + 1.0), 0.5 * weights[order], 2 * point_count - 1
    )


def triangle_rule(degree: int) -> QuadratureRule:
    """
    Rule on the reference triangle (0, 0), (1, 0), (0, 1) with exactness >= degree.

    Raises ValueError for degrees above MAX_TRIANGLE_DEGREE.
    """
    if degree < 0 or degree > MAX_TRIANGLE_DEGREE:
        raise ValueError(
            f"Unsupported triangle quadrature degree {degree}, maximum is {MAX_TRIANGLE_DEGREE}"
        )

    if degree <= 1:
        return QuadratureRule(np.array([[1.0 / 3.0, 1.0 / 3.0]]), np.array([0.5]), 1)

    # Duffy collapse x = u, y = (1 - u) v with Jacobian (1 - u)
    point_count = degree // 2 + 1
    jacobi_nodes, jacobi_weights = scipy.special.roots_jacobi(point_count, 1.0, 0.0)
    legendre_nodes, legendre_weights = scipy.special.roots_legendre(point_count)

    # Weight (1 - x) on [-1, 1] maps to 4 (1 - u) du on [0, 1]
    u = 0.5 * (jacobi_nodes + 1.0)
    u_weights = 0.25 * jacobi_weights
    v = 0.5 * (legendre_nodes + 1.0)
    v_weights = 0.5 * legendre_weights

    uu, vv = np.meshgrid(u, v, indexing="ij")
    nodes = np.column_stack((uu.ravel(), ((1.0 - uu) * vv).ravel()))
    weights = np.outer(u_weights, v_weights).ravel()

    return QuadratureRule(nodes, weights, 2 * point_count - 1)


def monomial_triangle_integral(power_x: int, power_y: int) -> float:
    """
    Exact integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
    """
    return (
        math.factorial(power_x)
        * math.factorial(power_y)
        / math.factorial(power_x + power_y + 2)
    )
