"""
Lagrange bases at the left Gauss-Radau nodes of one slab.
"""

import numpy as np

from . import time_grid
from ..quadrature import quadrature


class SlabBasis:  # pylint: disable=too-many-instance-attributes
    """
    Nodes s_i, weights w_i, Lagrange basis L_j(s_i) = delta_ij, derivative matrix
    D[i, j] = L_j'(s_i), and the endpoint values e[j] = L_j(t_(n-1)), r[j] = L_j(t_n^-).
    """

    def __init__(self, slab_index: int, start: float, end: float, degree: int) -> None:
        result, rule = quadrature.gauss_radau_left(degree + 1)
        assert result and rule is not None

        self.slab_index = slab_index
        self.start = start
        self.end = end
        self.length = end - start
        self.degree = degree

        mapped = rule.mapped(start, end)
        self.nodes = mapped.nodes
        self.weights = mapped.weights

        # Monomial coefficients in theta = (t - start) / length: L_j = sum_p C[p, j] theta^p
        self.__coefficients = np.linalg.inv(np.polynomial.polynomial.polyvander(rule.nodes, degree))

        self.derivative_matrix = self.derivatives(self.nodes)
        self.left_values = self.values(np.array([start]))[0]
        self.right_values = self.values(np.array([end]))[0]

    @property
    def size(self) -> int:
        """
        Number of temporal nodes, ell + 1.
        """
        return self.degree + 1

    def values(self, times: np.ndarray) -> np.ndarray:
        """
        L_j(t) for every t, shape (len(times), ell + 1). Valid outside the slab as well.
        """
        theta = (np.asarray(times, dtype=float) - self.start) / self.length
        return np.polynomial.polynomial.polyvander(theta, self.degree) @ self.__coefficients

    def derivatives(self, times: np.ndarray) -> np.ndarray:
        """
        L_j'(t) for every t, shape (len(times), ell + 1).
        """
        theta = (np.asarray(times, dtype=float) - self.start) / self.length
        vandermonde = np.zeros((len(theta), self.degree + 1))
        for power in range(1, self.degree + 1):
            vandermonde[:, power] = power * theta ** (power - 1)

        return vandermonde @ self.__coefficients / self.length

    def temporal_coupling(self) -> np.ndarray:
        """
        G = diag(w) D + e e^T: test index i, trial index j, realising
        (d_t u, v)_(I_n) + (u(t_(n-1)^+), v(t_(n-1)^+)) with the Radau rule.
        """
        return np.diag(self.weights) @ self.derivative_matrix + np.outer(
            self.left_values, self.left_values
        )


def slab_basis(
    grid: time_grid.TimeGrid, slab_index: int
) -> "tuple[True, SlabBasis] | tuple[False, None]":
    """
    Basis on slab I_n = (t_(n-1), t_n), n being 1-based.
    """
    if slab_index < 1 or slab_index > grid.slab_count:
        return False, None

    return True, SlabBasis(
        slab_index,
        float(grid.breaks[slab_index - 1]),
        float(grid.breaks[slab_index]),
        grid.degree,
    )


def lebesgue_constant(basis: SlabBasis, sample_count: int = 200) -> float:
    """
    max over the slab of sum_j |L_j(t)|, sampled on an equispaced grid.
    """
    times = np.linspace(basis.start, basis.end, sample_count)
    return float(np.max(np.sum(np.abs(basis.values(times)), axis=1)))
