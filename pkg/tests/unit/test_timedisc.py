"""
Test time grids, Radau slab bases and the temporal operators.
"""

import math

import numpy as np
import pytest

from modules.quadrature import quadrature
from modules.timedisc import slab_basis
from modules.timedisc import slab_polynomial
from modules.timedisc import time_grid


def build_basis(start: float, end: float, degree: int) -> slab_basis.SlabBasis:
    """
    Basis of the single slab [start, end].
    """
    result, grid = time_grid.TimeGrid.create([start, end], degree)
    assert result
    assert grid is not None

    result, basis = slab_basis.slab_basis(grid, 1)
    assert result
    assert basis is not None
    return basis


def l2_norm_sq(basis: slab_basis.SlabBasis, nodal_values: np.ndarray) -> float:
    """
    Exact L2(I_n) norm squared of a degree-ell polynomial.
    """
    result, rule = quadrature.gauss_legendre(basis.degree + 1)
    assert result
    assert rule is not None

    mapped = rule.mapped(basis.start, basis.end)
    values = slab_polynomial.SlabPolynomial(basis, nodal_values).evaluate(mapped.nodes)
    return float(mapped.integrate(values**2))


class TestTimeGrid:
    """
    Construction and slab lookup.
    """

    def test_uniform(self) -> None:
        """
        Uniform steps and eta = 1.
        """
        # Run
        result, actual = time_grid.TimeGrid.uniform(1.0, 4, 1)

        # Test
        assert result
        assert actual is not None
        assert actual.slab_count == 4
        assert np.allclose(actual.steps, 0.25)
        assert math.isclose(actual.step_ratio, 1.0)
        assert math.isclose(actual.final_time, 1.0)

    def test_step_ratio(self) -> None:
        """
        eta is the largest ratio of consecutive steps.
        """
        # Run
        result, actual = time_grid.TimeGrid.create([0.0, 0.1, 0.3, 0.4], 1)

        # Test
        assert result
        assert actual is not None
        assert math.isclose(actual.step_ratio, 2.0)
        assert math.isclose(actual.max_step, 0.2)

    def test_not_increasing(self) -> None:
        """
        Repeated break points are rejected.
        """
        # Run
        result, actual = time_grid.TimeGrid.create([0.0, 0.5, 0.5, 1.0], 1)

        # Test
        assert not result
        assert actual is None

    def test_slab_of(self) -> None:
        """
        t_n belongs to slab n and t = 0 to slab 1.
        """
        # Setup
        result, grid = time_grid.TimeGrid.uniform(1.0, 4, 1)
        assert result
        assert grid is not None

        # Test
        assert grid.slab_of(0.0) == 1
        assert grid.slab_of(0.25) == 1
        assert grid.slab_of(0.3) == 2
        assert grid.slab_of(1.0) == 4

    def test_slab_index_out_of_range(self) -> None:
        """
        n = 0 and n = N + 1 are rejected.
        """
        # Setup
        result, grid = time_grid.TimeGrid.uniform(1.0, 2, 1)
        assert result
        assert grid is not None

        # Test
        assert not slab_basis.slab_basis(grid, 0)[0]
        assert not slab_basis.slab_basis(grid, 3)[0]


class TestSlabBasis:
    """
    Radau-Lagrange bases.
    """

    def test_degree_zero(self) -> None:
        """
        One node at the slab start, D = 0, r = 1.
        """
        # Run
        actual = build_basis(0.0, 1.0, 0)

        # Test
        assert np.allclose(actual.nodes, [0.0])
        assert np.allclose(actual.weights, [1.0])
        assert np.allclose(actual.derivative_matrix, [[0.0]])
        assert np.allclose(actual.right_values, [1.0])

    def test_degree_one(self) -> None:
        """
        Nodes 0, 2/3 with the closed-form D and r.
        """
        # Run
        actual = build_basis(0.0, 1.0, 1)

        # Test
        assert np.allclose(actual.nodes, [0.0, 2.0 / 3.0])
        assert np.allclose(actual.derivative_matrix, [[-1.5, 1.5], [-1.5, 1.5]])
        assert np.allclose(actual.right_values, [-0.5, 1.5])
        assert np.allclose(actual.left_values, [1.0, 0.0])

    def test_scaling(self) -> None:
        """
        Halving the slab doubles D and halves the weights.
        """
        # Setup
        full = build_basis(0.0, 1.0, 1)

        # Run
        half = build_basis(0.0, 0.5, 1)

        # Test
        assert np.allclose(half.derivative_matrix, 2.0 * full.derivative_matrix)
        assert np.allclose(half.weights, 0.5 * full.weights)

    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_invariants(self, degree: int) -> None:
        """
        D annihilates constants, endpoint partition of unity, weights sum to tau.
        """
        # Run
        actual = build_basis(0.5, 0.75, degree)

        # Test
        assert np.allclose(actual.derivative_matrix.sum(axis=1), 0.0, atol=1.0e-10)
        assert math.isclose(actual.right_values.sum(), 1.0)
        assert math.isclose(actual.left_values.sum(), 1.0)
        assert np.all(actual.weights > 0.0)
        assert math.isclose(actual.weights.sum(), 0.25)

    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_inverse_estimate(self, degree: int) -> None:
        """
        ||w||_inf^2 <= C ||w||_2^2 with C = (ell + 1)^3 / (2 tau), or the sharp 1 / tau at ell = 0.
        """
        # Setup
        basis = build_basis(1.0, 1.25, degree)
        if degree == 0:
            constant = 1.0 / basis.length
        else:
            constant = (degree + 1) ** 3 / (2.0 * basis.length)

        generator = np.random.default_rng(19)
        times = np.linspace(basis.start, basis.end, 200)

        # Test
        for _ in range(500):
            nodal = generator.normal(size=basis.size)
            sup = np.max(np.abs(slab_polynomial.SlabPolynomial(basis, nodal).evaluate(times)))
            assert sup**2 <= constant * l2_norm_sq(basis, nodal) * (1.0 + 1.0e-12)

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_interpolant_stability(self, degree: int) -> None:
        """
        ||I w||_inf <= Lambda ||w||_inf for w = sin on a long slab.
        """
        # Setup
        basis = build_basis(0.0, 3.0, degree)
        times = np.linspace(0.0, 3.0, 200)

        # Run
        interpolant = slab_polynomial.radau_interpolate(basis, math.sin)

        # Test
        bound = slab_basis.lebesgue_constant(basis) * np.max(np.abs(np.sin(times)))
        assert np.max(np.abs(interpolant.evaluate(times))) <= bound + 1.0e-12


class TestSlabPolynomial:
    """
    Interpolation, projection and extension.
    """

    def test_radau_interpolate(self) -> None:
        """
        ell = 1, v = t^2: nodal values 0, 4/9, i.e. the polynomial 2t/3.
        """
        # Setup
        basis = build_basis(0.0, 1.0, 1)

        # Run
        actual = slab_polynomial.radau_interpolate(basis, lambda t: t**2)

        # Test
        assert np.allclose(actual.nodal_values, [0.0, 4.0 / 9.0])
        assert math.isclose(actual.evaluate(0.9), 0.6)

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_interpolant_quadrature(self, degree: int) -> None:
        """
        int I(u) w = Q(u w) for degree-ell w, smooth random u.
        """
        # Setup
        basis = build_basis(0.2, 0.7, degree)
        result, rule = quadrature.gauss_legendre(degree + 2)
        assert result
        assert rule is not None
        mapped = rule.mapped(basis.start, basis.end)
        generator = np.random.default_rng(23)

        # Test
        for _ in range(100):
            frequency, phase = generator.uniform(0.5, 3.0), generator.uniform(0.0, math.pi)
            test_values = generator.normal(size=basis.size)

            def smooth(t: float, frequency: float = frequency, phase: float = phase) -> float:
                return math.sin(frequency * t + phase)

            interpolant = slab_polynomial.radau_interpolate(basis, smooth)
            test = slab_polynomial.SlabPolynomial(basis, test_values)
            actual = mapped.integrate(
                interpolant.evaluate(mapped.nodes) * test.evaluate(mapped.nodes)
            )
            expected = np.sum(
                basis.weights * np.array([smooth(node) for node in basis.nodes]) * test_values
            )
            assert math.isclose(actual, expected, abs_tol=1.0e-12)

    def test_ptau_quadratic(self) -> None:
        """
        ell = 1 on [0, 1], v = t^2: -1/3 + 4t/3.
        """
        # Setup
        basis = build_basis(0.0, 1.0, 1)

        # Run
        actual = slab_polynomial.ptau_project(basis, lambda t: t**2)

        # Test
        assert math.isclose(actual.evaluate(0.0), -1.0 / 3.0, abs_tol=1.0e-12)
        assert math.isclose(actual.evaluate(1.0), 1.0, abs_tol=1.0e-12)

    def test_ptau_degree_zero(self) -> None:
        """
        ell = 0: the endpoint value only.
        """
        # Setup
        basis = build_basis(0.0, 1.0, 0)

        # Run
        actual = slab_polynomial.ptau_project(basis, lambda t: t)

        # Test
        assert np.allclose(actual.nodal_values, [1.0])

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_ptau_reproduces_polynomials(self, degree: int) -> None:
        """
        A degree-ell vector-valued polynomial is its own projection.
        """
        # Setup
        basis = build_basis(0.3, 0.8, degree)
        expected = np.random.default_rng(29).normal(size=(basis.size, 3))
        polynomial = slab_polynomial.SlabPolynomial(basis, expected)

        # Run
        actual = slab_polynomial.ptau_project(basis, polynomial.evaluate)

        # Test
        assert np.allclose(actual.nodal_values, expected, atol=1.0e-12)

    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_ptau_rate(self, degree: int) -> None:
        """
        sup |sin - P sin| decays as tau^(ell + 1) under halving.
        """
        # Setup
        errors = []
        lengths = [0.4, 0.2, 0.1]
        for length in lengths:
            basis = build_basis(0.5, 0.5 + length, degree)
            projection = slab_polynomial.ptau_project(basis, math.sin)
            times = np.linspace(basis.start, basis.end, 200)
            errors.append(np.max(np.abs(np.sin(times) - projection.evaluate(times))))

        # Run
        actual = math.log(errors[-2] / errors[-1]) / math.log(2.0)

        # Test
        assert abs(actual - (degree + 1)) <= 0.2

    def test_tilde_constant(self) -> None:
        """
        Constants extend to constants.
        """
        # Setup
        previous = slab_polynomial.constant_extension(
            np.array([2.0, -1.0]), build_basis(0.0, 1.0, 2)
        )

        # Run
        actual = slab_polynomial.tilde_extend(previous, build_basis(1.0, 2.0, 2))

        # Test
        assert np.allclose(actual.nodal_values, [[2.0, -1.0]] * 3)

    def test_tilde_linear(self) -> None:
        """
        p(t) = a t on [0, 1] continues to nodal values a, 5a/3 on [1, 2].
        """
        # Setup
        slope = 3.0
        first = build_basis(0.0, 1.0, 1)
        previous = slab_polynomial.SlabPolynomial(first, slope * first.nodes)

        # Run
        actual = slab_polynomial.tilde_extend(previous, build_basis(1.0, 2.0, 1))

        # Test
        assert np.allclose(actual.nodal_values, [slope, 5.0 * slope / 3.0])
        assert math.isclose(actual.evaluate(1.5), 1.5 * slope)
