"""
Conforming triangular meshes with facet topology and geometry.
"""

import json

import numpy as np


# Relative area threshold below which a triangle is degenerate
DEGENERATE_AREA_RATIO = 1.0e-14

# Local facet i is opposite local vertex i and runs from vertex (i + 1) % 3 to (i + 2) % 3
LOCAL_FACET_VERTICES = np.array([[1, 2], [2, 0], [0, 1]])

# Points per batch in Mesh.locate
LOCATE_CHUNK_SIZE = 512


class Mesh:  # pylint: disable=too-many-instance-attributes
    """
    Immutable conforming triangulation.

    Facets are sorted by their (low, high) vertex pair. For interior facets the first
    adjacent element (K_+) is the one with the lower index and the facet normal points out
    of it; boundary facets have second element -1 and an outward normal.
    """

    __create_key = object()

    @classmethod
    def create(
        cls, vertices: np.ndarray, triangles: np.ndarray
    ) -> "tuple[True, Mesh] | tuple[False, None]":
        """
        Build the facet topology. Clockwise triangles are re-oriented counter-clockwise.

        Parameters:
            vertices: (V, 2) coordinates.
            triangles: (T, 3) vertex indices.

        Returns:
            A tuple containing success status and the Mesh object (or None on failure).
        """
        vertices = np.asarray(vertices, dtype=float)
        triangles = np.array(triangles, dtype=np.int64)

        if vertices.ndim != 2 or vertices.shape[1] != 2 or len(vertices) < 3:
            return False, None

        if triangles.ndim != 2 or triangles.shape[1] != 3 or len(triangles) == 0:
            return False, None

        if triangles.min() < 0 or triangles.max() >= len(vertices):
            return False, None

        signed_areas = signed_triangle_areas(vertices, triangles)
        diameters = triangle_diameters(vertices, triangles)
        if np.any(np.abs(signed_areas) < DEGENERATE_AREA_RATIO * diameters**2):
            return False, None

        clockwise = signed_areas < 0.0
        triangles[clockwise] = triangles[clockwise][:, [0, 2, 1]]

        local_facets = triangles[:, LOCAL_FACET_VERTICES]
        keys = np.sort(local_facets.reshape(-1, 2), axis=1)
        facet_vertices, inverse = np.unique(keys, axis=0, return_inverse=True)
        element_facets = inverse.reshape(-1, 3)

        facet_elements = np.full((len(facet_vertices), 2), -1, dtype=np.int64)
        facet_local_index = np.full((len(facet_vertices), 2), -1, dtype=np.int64)
        for element, local_index in np.ndindex(element_facets.shape):
            facet = element_facets[element, local_index]
            # Elements are visited in increasing order so slot 0 is K_+
            slot = 0 if facet_elements[facet, 0] < 0 else 1
            if facet_elements[facet, slot] >= 0:
                # More than two elements share the facet
                return False, None
            facet_elements[facet, slot] = element
            facet_local_index[facet, slot] = local_index

        # Simply connected: V - E + T = 1
        if len(vertices) - len(facet_vertices) + len(triangles) != 1:
            return False, None

        # Hanging and pinched vertices show up as boundary vertices with degree other than 2
        boundary_vertices = facet_vertices[facet_elements[:, 1] < 0].ravel()
        boundary_degrees = np.bincount(boundary_vertices, minlength=len(vertices))
        if np.any((boundary_degrees != 0) & (boundary_degrees != 2)):
            return False, None

        return True, Mesh(
            cls.__create_key,
            vertices,
            triangles,
            facet_vertices,
            facet_elements,
            facet_local_index,
            element_facets,
        )

    def __init__(
        self,
        class_private_create_key: object,
        vertices: np.ndarray,
        triangles: np.ndarray,
        facet_vertices: np.ndarray,
        facet_elements: np.ndarray,
        facet_local_index: np.ndarray,
        element_facets: np.ndarray,
    ) -> None:
        """
        Private constructor, use create() method.
        """
        assert class_private_create_key is Mesh.__create_key, "Use create() method"

        self.vertices = vertices
        self.triangles = triangles
        self.facet_vertices = facet_vertices
        self.facet_elements = facet_elements
        self.facet_local_index = facet_local_index
        self.element_facets = element_facets
        self.is_boundary_facet = facet_elements[:, 1] < 0

        self.element_areas = signed_triangle_areas(vertices, triangles)
        self.element_diameters = triangle_diameters(vertices, triangles)

        # Affine maps x = x_0 + J x_hat
        corners = vertices[triangles]
        self.element_origins = corners[:, 0, :]
        self.element_jacobians = np.stack(
            (corners[:, 1, :] - corners[:, 0, :], corners[:, 2, :] - corners[:, 0, :]), axis=2
        )
        self.element_determinants = np.linalg.det(self.element_jacobians)
        self.element_inverse_jacobians = np.linalg.inv(self.element_jacobians)

        edges = vertices[facet_vertices[:, 1]] - vertices[facet_vertices[:, 0]]
        self.facet_diameters = np.linalg.norm(edges, axis=1)

        # Outward normal of K_+ from the counter-clockwise local edge
        plus = facet_elements[:, 0]
        local_edge = triangles[plus][
            np.arange(len(plus))[:, None], LOCAL_FACET_VERTICES[facet_local_index[:, 0]]
        ]
        tangents = vertices[local_edge[:, 1]] - vertices[local_edge[:, 0]]
        self.facet_normals = (
            np.column_stack((tangents[:, 1], -tangents[:, 0])) / self.facet_diameters[:, None]
        )

        self.element_facet_signs = np.where(
            facet_elements[element_facets, 0] == np.arange(len(triangles))[:, None], 1.0, -1.0
        )

        self.h = float(self.element_diameters.max())

    @property
    def vertex_count(self) -> int:
        """
        Number of vertices.
        """
        return len(self.vertices)

    @property
    def element_count(self) -> int:
        """
        Number of triangles.
        """
        return len(self.triangles)

    @property
    def facet_count(self) -> int:
        """
        Number of facets (interior and boundary).
        """
        return len(self.facet_vertices)

    @property
    def boundary_facet_count(self) -> int:
        """
        Number of boundary facets.
        """
        return int(np.count_nonzero(self.is_boundary_facet))

    def euler_characteristic(self) -> int:
        """
        V - E + T, equal to 1 for a simply connected domain.
        """
        return self.vertex_count - self.facet_count + self.element_count

    def to_physical(self, element: "int | np.ndarray", reference_points: np.ndarray) -> np.ndarray:
        """
        Map reference points (..., 2) into the given element(s).
        """
        return self.element_origins[element] + np.einsum(
            "...ab,...b->...a", self.element_jacobians[element], reference_points
        )

    def to_reference(self, element: "int | np.ndarray", points: np.ndarray) -> np.ndarray:
        """
        Map physical points (..., 2) of the given element(s) to the reference triangle.
        """
        return np.einsum(
            "...ab,...b->...a",
            self.element_inverse_jacobians[element],
            points - self.element_origins[element],
        )

    def locate(self, points: np.ndarray, tolerance: float = 1.0e-12) -> np.ndarray:
        """
        Index of an element containing each point (N, 2), -1 for points outside the mesh.
        """
        points = np.atleast_2d(points)
        located = np.full(len(points), -1, dtype=np.int64)
        for start in range(0, len(points), LOCATE_CHUNK_SIZE):
            chunk = points[start : start + LOCATE_CHUNK_SIZE]
            reference = np.einsum(
                "tab,tnb->tna",
                self.element_inverse_jacobians,
                chunk[None, :, :] - self.element_origins[:, None, :],
            )
            barycentric_min = np.minimum(
                np.minimum(reference[..., 0], reference[..., 1]),
                1.0 - reference[..., 0] - reference[..., 1],
            )
            inside = barycentric_min >= -tolerance
            found = inside.any(axis=0)
            located[start : start + len(chunk)] = np.where(found, inside.argmax(axis=0), -1)

        return located


class MeshMetrics:
    """
    Geometric quantities of a mesh.
    """

    def __init__(self, mesh: Mesh) -> None:
        corners = mesh.vertices[mesh.triangles]
        perimeters = (
            np.linalg.norm(corners[:, 1] - corners[:, 0], axis=1)
            + np.linalg.norm(corners[:, 2] - corners[:, 1], axis=1)
            + np.linalg.norm(corners[:, 0] - corners[:, 2], axis=1)
        )
        inradii = 2.0 * mesh.element_areas / perimeters

        self.h = mesh.h
        self.element_diameters = mesh.element_diameters
        self.element_areas = mesh.element_areas
        self.facet_diameters = mesh.facet_diameters
        self.facet_normals = mesh.facet_normals
        self.shape_regularity = float(np.max(mesh.element_diameters / (2.0 * inradii)))


def signed_triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """
    Signed areas, positive for counter-clockwise triangles.
    """
    corners = vertices[triangles]
    first = corners[:, 1] - corners[:, 0]
    second = corners[:, 2] - corners[:, 0]
    return 0.5 * (first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0])


def triangle_diameters(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """
    Longest edge of each triangle.
    """
    corners = vertices[triangles]
    return np.max(
        np.stack(
            (
                np.linalg.norm(corners[:, 1] - corners[:, 0], axis=1),
                np.linalg.norm(corners[:, 2] - corners[:, 1], axis=1),
                np.linalg.norm(corners[:, 0] - corners[:, 2], axis=1),
            )
        ),
        axis=0,
    )


def build_structured_mesh(n: int) -> "tuple[True, Mesh] | tuple[False, None]":
    """
    Uniform n x n grid of the unit square, each cell split along its rising diagonal.
    """
    if n < 1:
        return False, None

    coordinates = np.linspace(0.0, 1.0, n + 1)
    grid_x, grid_y = np.meshgrid(coordinates, coordinates, indexing="xy")
    vertices = np.column_stack((grid_x.ravel(), grid_y.ravel()))

    def index(i: int, j: int) -> int:
        return j * (n + 1) + i

    triangles = []
    for j in range(n):
        for i in range(n):
            triangles.append((index(i, j), index(i + 1, j), index(i + 1, j + 1)))
            triangles.append((index(i, j), index(i + 1, j + 1), index(i, j + 1)))

    return Mesh.create(vertices, np.array(triangles))


def mesh_metrics(mesh: Mesh) -> MeshMetrics:
    """
    Meshsize, element and facet geometry, and the shape-regularity ratio.
    """
    return MeshMetrics(mesh)


def mesh_to_json(mesh: Mesh) -> str:
    """
    Debug dump of the vertex and triangle arrays.
    """
    return json.dumps(
        {"vertices": mesh.vertices.tolist(), "triangles": mesh.triangles.tolist()}, indent=1
    )
