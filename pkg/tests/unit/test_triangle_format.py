"""
Test the Triangle .node / .ele reader.
"""

import numpy as np

from modules.logger import logger
from modules.mesh import mesh
from modules.mesh import triangle_format


UNIT_SQUARE_NODE = """# unit square
4 2 0 0
1 0.0 0.0
2 1.0 0.0
3 1.0 1.0
4 0.0 1.0
"""

UNIT_SQUARE_ELE = """2 3 0
1 1 2 3
2 1 3 4
"""


def test_matches_structured_mesh(test_logger: logger.Logger) -> None:
    """
    The two-triangle square equals build_structured_mesh(1) up to facet order.
    """
    # Setup
    result, expected = mesh.build_structured_mesh(1)
    assert result
    assert expected is not None

    # Run
    result, actual = triangle_format.load_triangle_mesh(
        UNIT_SQUARE_NODE, UNIT_SQUARE_ELE, test_logger
    )

    # Test
    assert result
    assert actual is not None
    assert np.allclose(actual.vertices, expected.vertices[[0, 1, 3, 2]])
    assert actual.facet_count == expected.facet_count
    assert actual.boundary_facet_count == expected.boundary_facet_count
    assert np.isclose(actual.h, expected.h)


def test_zero_based(test_logger: logger.Logger) -> None:
    """
    0-based files are detected from the first vertex index.
    """
    # Setup
    node_text = "3 2 0 0\n0 0 0\n1 1 0\n2 0 1\n"
    ele_text = "1 3 0\n0 0 1 2\n"

    # Run
    result, actual = triangle_format.load_triangle_mesh(node_text, ele_text, test_logger)

    # Test
    assert result
    assert actual is not None
    assert np.array_equal(actual.triangles, [[0, 1, 2]])


def test_clockwise_accepted(test_logger: logger.Logger) -> None:
    """
    A clockwise triangle is stored counter-clockwise.
    """
    # Setup
    node_text = "3 2\n1 0 0\n2 1 0\n3 0 1\n"
    ele_text = "1 3\n1 1 3 2\n"

    # Run
    result, actual = triangle_format.load_triangle_mesh(node_text, ele_text, test_logger)

    # Test
    assert result
    assert actual is not None
    assert actual.element_areas[0] > 0.0


def test_index_out_of_range(test_logger: logger.Logger) -> None:
    """
    Referencing vertex 99 of a 4-vertex file fails.
    """
    # Setup
    ele_text = "1 3 0\n1 1 2 99\n"

    # Run
    result, actual = triangle_format.load_triangle_mesh(UNIT_SQUARE_NODE, ele_text, test_logger)

    # Test
    assert not result
    assert actual is None


def test_malformed_header(test_logger: logger.Logger) -> None:
    """
    A non-numeric header fails.
    """
    # Run
    result, actual = triangle_format.load_triangle_mesh(
        "four 2 0 0\n", UNIT_SQUARE_ELE, test_logger
    )

    # Test
    assert not result
    assert actual is None


def test_degenerate(test_logger: logger.Logger) -> None:
    """
    Collinear vertices fail.
    """
    # Setup
    node_text = "3 2\n1 0 0\n2 1 0\n3 2 0\n"
    ele_text = "1 3\n1 1 2 3\n"

    # Run
    result, actual = triangle_format.load_triangle_mesh(node_text, ele_text, test_logger)

    # Test
    assert not result
    assert actual is None
