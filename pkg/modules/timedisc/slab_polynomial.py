"""
Slab-local polynomials in nodal (Radau-Lagrange) form and the operators acting on them.
"""

from typing import Callable

import numpy as np

from . import slab_basis
from ..quadrature import quadrature


# Gauss-Legendre points beyond ell used by the P_tau integrals
PROJECTION_EXTRA_POINTS = 4


class SlabPolynomial:
    """
    Degree-ell polynomial on one slab with values in a vector space.

    nodal_values[j] is the value at the j-th Radau node; trailing axes are the value shape.
    """

    def __init__(self, basis: slab_basis.SlabBasis, nodal_values: np.ndarray) -> None:
        assert nodal_values.shape[0] == basis.size
        self.basis = basis
        self.nodal_values = nodal_values

    def evaluate(self, time: "float | np.ndarray") -> np.ndarray:
        """
        Value at time (a scalar time returns one value, an array returns stacked values).
        """
        times = np.atleast_1d(np.asarray(time, dtype=float))
        values = np.tensordot(self.basis.values(times), self.nodal_values, axes=(1, 0))
        if np.ndim(time) == 0:
            return values[0]

        return values

    def derivative(self, time: "float | np.ndarray") -> np.ndarray:
        """
        Time derivative at time.
        """
        times = np.atleast_1d(np.asarray(time, dtype=float))
        values = np.tensordot(self.basis.derivatives(times), self.nodal_values, axes=(1, 0))
        if np.ndim(time) == 0:
            return values[0]

        return values

    def left_value(self) -> np.ndarray:
        """
        Value at t_(n-1)^+.
        """
        return np.tensordot(self.basis.left_values, self.nodal_values, axes=(0, 0))

    def right_value(self) -> np.ndarray:
        """
        Value at t_n^-.
        """
        return np.tensordot(self.basis.right_values, self.nodal_values, axes=(0, 0))


def radau_interpolate(
    basis: slab_basis.SlabBasis, provider: Callable[[float], "float | np.ndarray"]
) -> SlabPolynomial:
    """
    I_tau^R: Lagrange interpolation at the Radau nodes.
    """
    return SlabPolynomial(basis, np.array([np.asarray(provider(node)) for node in basis.nodes]))


def ptau_project(
    basis: slab_basis.SlabBasis, provider: Callable[[float], "float | np.ndarray"]
) -> SlabPolynomial:
    """
    P_tau: p(t_n^-) = v(t_n) and (v - p, q) = 0 on the slab for all q of degree < ell.
    """
    result, rule = quadrature.gauss_legendre(basis.degree + PROJECTION_EXTRA_POINTS)
    assert result and rule is not None
    rule = rule.mapped(basis.start, basis.end)

    samples = np.array([np.asarray(provider(time)) for time in rule.nodes])
    end_value = np.asarray(provider(basis.end))
    value_shape = end_value.shape

    matrix = np.zeros((basis.size, basis.size))
    right_hand_side = np.zeros((basis.size,) + value_shape)
    matrix[0] = basis.right_values
    right_hand_side[0] = end_value

    # Orthogonality against shifted Legendre polynomials of degree < ell
    lagrange_at_points = basis.values(rule.nodes)
    theta = (rule.nodes - basis.start) / basis.length
    for degree in range(basis.degree):
        test = np.polynomial.legendre.legval(2.0 * theta - 1.0, np.eye(degree + 1)[degree])
        matrix[degree + 1] = rule.integrate(test[:, None] * lagrange_at_points)
        right_hand_side[degree + 1] = rule.integrate(
            test.reshape((-1,) + (1,) * len(value_shape)) * samples
        )

    flat = right_hand_side.reshape(basis.size, -1)
    nodal = np.linalg.solve(matrix, flat).reshape((basis.size,) + value_shape)
    return SlabPolynomial(basis, nodal)


def tilde_extend(previous: SlabPolynomial, target: slab_basis.SlabBasis) -> SlabPolynomial:
    """
    Continue the polynomial of slab n-1 onto slab n and re-express it in the target's
    nodal basis.
    """
    return SlabPolynomial(target, previous.evaluate(target.nodes))


def constant_extension(value: np.ndarray, target: slab_basis.SlabBasis) -> SlabPolynomial:
    """
    Constant-in-time polynomial on the target slab.
    """
    return SlabPolynomial(target, np.repeat(value[None, ...], target.size, axis=0))
