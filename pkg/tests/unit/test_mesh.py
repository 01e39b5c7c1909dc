"""
Test structured meshes, topology and geometry.
"""

import math

import numpy as np
import pytest

from modules.mesh import mesh


# pylint: disable=redefined-outer-name


@pytest.fixture
def unit_triangle() -> mesh.Mesh:  # type: ignore
    """
    Single right triangle (0, 0), (1, 0), (0, 1).
    """
    result, instance = mesh.Mesh.create(
        np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 2]])
    )
    assert result
    assert instance is not None

    yield instance  # type: ignore


@pytest.fixture
def mesh_4() -> mesh.Mesh:  # type: ignore
    """
    4 x 4 structured mesh.
    """
    result, instance = mesh.build_structured_mesh(4)
    assert result
    assert instance is not None

    yield instance  # type: ignore


class TestStructuredMesh:
    """
    build_structured_mesh counts and sizes.
    """

    def test_smallest(self) -> None:
        """
        n = 1: 4 vertices, 2 triangles, 5 facets with 4 on the boundary.
        """
        # Run
        result, actual = mesh.build_structured_mesh(1)

        # Test
        assert result
        assert actual is not None
        assert actual.vertex_count == 4
        assert actual.element_count == 2
        assert actual.facet_count == 5
        assert actual.boundary_facet_count == 4

    def test_n_2(self) -> None:
        """
        n = 2: 9 vertices, 8 triangles, 16 facets, 8 boundary facets.
        """
        # Run
        result, actual = mesh.build_structured_mesh(2)

        # Test
        assert result
        assert actual is not None
        assert actual.vertex_count == 9
        assert actual.element_count == 8
        assert actual.facet_count == 16
        assert actual.boundary_facet_count == 8
        assert np.allclose(actual.element_diameters, math.sqrt(2.0) / 2.0)

    def test_meshsize(self, mesh_4: mesh.Mesh) -> None:
        """
        n = 4: h is the diagonal of a quarter cell.
        """
        assert math.isclose(mesh_4.h, math.sqrt(2.0) / 4.0)

    def test_zero_cells(self) -> None:
        """
        n = 0 is rejected.
        """
        # Run
        result, actual = mesh.build_structured_mesh(0)

        # Test
        assert not result
        assert actual is None


class TestMeshInvariants:
    """
    Orientation, facet partition and normals.
    """

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_counts(self, n: int) -> None:
        """
        Euler relation and 3T = 2 |interior| + |boundary|.
        """
        # Setup
        result, instance = mesh.build_structured_mesh(n)
        assert result
        assert instance is not None

        interior = instance.facet_count - instance.boundary_facet_count

        # Test
        assert instance.euler_characteristic() == 1
        assert 3 * instance.element_count == 2 * interior + instance.boundary_facet_count

    def test_positive_areas(self, mesh_4: mesh.Mesh) -> None:
        """
        Counter-clockwise triangles and total area 1.
        """
        assert np.all(mesh_4.element_areas > 0.0)
        assert math.isclose(mesh_4.element_areas.sum(), 1.0, abs_tol=1.0e-14)

    def test_interior_normals(self, mesh_4: mesh.Mesh) -> None:
        """
        The facet normal points out of K_+ and into K_-.
        """
        # Setup
        interior = np.flatnonzero(~mesh_4.is_boundary_facet)
        midpoints = 0.5 * (
            mesh_4.vertices[mesh_4.facet_vertices[interior, 0]]
            + mesh_4.vertices[mesh_4.facet_vertices[interior, 1]]
        )
        centroids = mesh_4.vertices[mesh_4.triangles].mean(axis=1)

        # Run
        plus = np.einsum(
            "fd,fd->f",
            midpoints - centroids[mesh_4.facet_elements[interior, 0]],
            mesh_4.facet_normals[interior],
        )
        minus = np.einsum(
            "fd,fd->f",
            midpoints - centroids[mesh_4.facet_elements[interior, 1]],
            mesh_4.facet_normals[interior],
        )

        # Test
        assert np.all(plus > 0.0)
        assert np.all(minus < 0.0)
        assert np.all(mesh_4.facet_elements[interior, 0] < mesh_4.facet_elements[interior, 1])

    def test_boundary_normals_outward(self, mesh_4: mesh.Mesh) -> None:
        """
        Boundary normals point out of the unit square.
        """
        # Setup
        boundary = np.flatnonzero(mesh_4.is_boundary_facet)
        midpoints = 0.5 * (
            mesh_4.vertices[mesh_4.facet_vertices[boundary, 0]]
            + mesh_4.vertices[mesh_4.facet_vertices[boundary, 1]]
        )

        # Run
        actual = np.einsum("fd,fd->f", midpoints - 0.5, mesh_4.facet_normals[boundary])

        # Test
        assert np.all(actual > 0.0)

    def test_clockwise_reoriented(self) -> None:
        """
        A clockwise triangle is stored counter-clockwise.
        """
        # Run
        result, actual = mesh.Mesh.create(
            np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 2, 1]])
        )

        # Test
        assert result
        assert actual is not None
        assert actual.element_areas[0] > 0.0

    def test_degenerate_rejected(self) -> None:
        """
        Collinear vertices are rejected.
        """
        # Run
        result, actual = mesh.Mesh.create(
            np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), np.array([[0, 1, 2]])
        )

        # Test
        assert not result
        assert actual is None

    def test_non_conforming_rejected(self) -> None:
        """
        A facet shared by three triangles is rejected.
        """
        # Setup
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [0.5, 2.0]])
        triangles = np.array([[0, 1, 2], [0, 3, 1], [0, 1, 4]])

        # Run
        result, actual = mesh.Mesh.create(vertices, triangles)

        # Test
        assert not result
        assert actual is None

    def test_hanging_vertex_rejected(self) -> None:
        """
        A square whose centre vertex splits only one side of the diagonal is rejected.
        """
        # Setup
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]])
        triangles = np.array([[0, 1, 2], [0, 4, 3], [4, 2, 3]])

        # Run
        result, actual = mesh.Mesh.create(vertices, triangles)

        # Test
        assert not result
        assert actual is None

    def test_pinched_vertex_rejected(self) -> None:
        """
        Two triangles touching at one vertex are rejected.
        """
        # Setup
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        triangles = np.array([[0, 1, 2], [0, 3, 4]])

        # Run
        result, actual = mesh.Mesh.create(vertices, triangles)

        # Test
        assert not result
        assert actual is None

    def test_hole_rejected(self) -> None:
        """
        A ring of triangles around a square hole is rejected.
        """
        # Setup
        outer = [[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]]
        inner = [[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0]]
        vertices = np.array(outer + inner)
        triangles = []
        for i in range(4):
            j = (i + 1) % 4
            triangles.append([i, j, 4 + j])
            triangles.append([i, 4 + j, 4 + i])

        # Run
        result, actual = mesh.Mesh.create(vertices, np.array(triangles))

        # Test
        assert not result
        assert actual is None


class TestMetrics:
    """
    mesh_metrics on simple geometries.
    """

    def test_unit_triangle(self, unit_triangle: mesh.Mesh) -> None:
        """
        Area 1/2, h_K = sqrt 2, hypotenuse normal (1, 1) / sqrt 2.
        """
        # Run
        metrics = mesh.mesh_metrics(unit_triangle)

        # Test
        assert math.isclose(metrics.element_areas[0], 0.5)
        assert math.isclose(metrics.element_diameters[0], math.sqrt(2.0))

        hypotenuse = np.flatnonzero(
            np.all(np.sort(unit_triangle.facet_vertices, axis=1) == [1, 2], axis=1)
        )[0]
        assert math.isclose(metrics.facet_diameters[hypotenuse], math.sqrt(2.0))
        assert np.allclose(metrics.facet_normals[hypotenuse], [1.0 / math.sqrt(2.0)] * 2)

    def test_shape_regularity(self, unit_triangle: mesh.Mesh) -> None:
        """
        rho = h_K / (2 r) with r = (2 - sqrt 2) / 2 for the unit right triangle.
        """
        # Setup
        inradius = (2.0 - math.sqrt(2.0)) / 2.0
        expected = math.sqrt(2.0) / (2.0 * inradius)

        # Run
        actual = mesh.mesh_metrics(unit_triangle).shape_regularity

        # Test
        assert math.isclose(actual, expected)


class TestLocate:
    """
    Point location and reference maps.
    """

    def test_round_trip(self, mesh_4: mesh.Mesh) -> None:
        """
        Element centroids are located in their own element.
        """
        # Setup
        centroids = mesh_4.vertices[mesh_4.triangles].mean(axis=1)

        # Run
        actual = mesh_4.locate(centroids)

        # Test
        assert np.array_equal(actual, np.arange(mesh_4.element_count))
        assert np.allclose(
            mesh_4.to_reference(actual, centroids), np.full((len(actual), 2), 1.0 / 3.0)
        )

    def test_outside(self, mesh_4: mesh.Mesh) -> None:
        """
        Points outside the square give -1.
        """
        # Run
        actual = mesh_4.locate(np.array([[1.5, 0.5], [-0.1, 0.2]]))

        # Test
        assert np.array_equal(actual, [-1, -1])

    def test_json_dump(self, unit_triangle: mesh.Mesh) -> None:
        """
        The debug dump holds the vertex and triangle arrays.
        """
        # Run
        actual = mesh.mesh_to_json(unit_triangle)

        # Test
        assert '"triangles"' in actual
        assert '"vertices"' in actual
