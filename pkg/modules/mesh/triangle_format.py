"""
Reader for the Triangle mesh generator's .node / .ele text format.
"""

import pathlib

import numpy as np

from . import mesh
from ..logger import logger


def _data_lines(text: str) -> "list[tuple[int, list[str]]]":
    """
    Non-empty lines with comments stripped, as (1-based line number, tokens).
    """
    lines = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            lines.append((line_number, content.split()))

    return lines


def _parse_node(
    node_text: str, local_logger: logger.Logger
) -> "tuple[True, tuple[np.ndarray, int]] | tuple[False, None]":
    """
    Vertex coordinates and the detected index base.
    """
    lines = _data_lines(node_text)
    if len(lines) == 0:
        local_logger.error(".node: missing header line")
        return False, None

    header_number, header = lines[0]
    try:
        count = int(header[0])
        dimension = int(header[1]) if len(header) > 1 else 2
    except ValueError:
        local_logger.error(f".node line {header_number}: malformed header {header}")
        return False, None

    if count < 3 or dimension != 2:
        local_logger.error(f".node line {header_number}: expected >= 3 points in 2D, got {header}")
        return False, None

    if len(lines) - 1 < count:
        local_logger.error(f".node: header announces {count} points, found {len(lines) - 1}")
        return False, None

    vertices = np.zeros((count, 2))
    base = None
    for position, (line_number, tokens) in enumerate(lines[1 : count + 1]):
        try:
            index = int(tokens[0])
            x, y = float(tokens[1]), float(tokens[2])
        except (ValueError, IndexError):
            local_logger.error(f".node line {line_number}: malformed entry {tokens}")
            return False, None

        if base is None:
            base = index
            if base not in (0, 1):
                local_logger.error(f".node line {line_number}: first index must be 0 or 1")
                return False, None

        if index - base != position:
            local_logger.error(f".node line {line_number}: index {index} out of sequence")
            return False, None

        vertices[position] = (x, y)

    assert base is not None
    return True, (vertices, base)


def load_triangle_mesh(
    node_text: str, ele_text: str, local_logger: logger.Logger
) -> "tuple[True, mesh.Mesh] | tuple[False, None]":
    """
    Build a Mesh from .node and .ele contents.

    The index base (0 or 1) is taken from the first vertex index. Clockwise triangles are
    stored counter-clockwise; degenerate triangles are rejected.

    Parameters:
        node_text: Contents of the .node file.
        ele_text: Contents of the .ele file.
        local_logger: Receives an error naming the offending line on failure.

    Returns:
        A tuple containing success status and the Mesh object (or None on failure).
    """
    result, node_data = _parse_node(node_text, local_logger)
    if not result:
        return False, None

    assert node_data is not None
    vertices, base = node_data

    lines = _data_lines(ele_text)
    if len(lines) == 0:
        local_logger.error(".ele: missing header line")
        return False, None

    header_number, header = lines[0]
    try:
        count = int(header[0])
        nodes_per_triangle = int(header[1]) if len(header) > 1 else 3
    except ValueError:
        local_logger.error(f".ele line {header_number}: malformed header {header}")
        return False, None

    if count < 1 or nodes_per_triangle < 3:
        local_logger.error(f".ele line {header_number}: invalid header {header}")
        return False, None

    if len(lines) - 1 < count:
        local_logger.error(f".ele: header announces {count} triangles, found {len(lines) - 1}")
        return False, None

    triangles = np.zeros((count, 3), dtype=np.int64)
    for position, (line_number, tokens) in enumerate(lines[1 : count + 1]):
        try:
            corners = [int(token) - base for token in tokens[1:4]]
        except ValueError:
            local_logger.error(f".ele line {line_number}: malformed entry {tokens}")
            return False, None

        if len(corners) != 3:
            local_logger.error(f".ele line {line_number}: expected 3 vertex indices")
            return False, None

        for corner in corners:
            if corner < 0 or corner >= len(vertices):
                local_logger.error(
                    f".ele line {line_number}: vertex index {corner + base} out of range"
                )
                return False, None

        triangles[position] = corners
        area = mesh.signed_triangle_areas(vertices, triangles[position : position + 1])[0]
        diameter = mesh.triangle_diameters(vertices, triangles[position : position + 1])[0]
        if abs(area) < mesh.DEGENERATE_AREA_RATIO * diameter**2:
            local_logger.error(f".ele line {line_number}: degenerate triangle {tokens[1:4]}")
            return False, None

    result, loaded = mesh.Mesh.create(vertices, triangles)
    if not result:
        local_logger.error("Triangle mesh is not conforming")
        return False, None

    return True, loaded


def load_triangle_mesh_files(
    node_path: pathlib.Path, ele_path: pathlib.Path, local_logger: logger.Logger
) -> "tuple[True, mesh.Mesh] | tuple[False, None]":
    """
    Read a .node / .ele file pair from disk.
    """
    try:
        node_text = pathlib.Path(node_path).read_text(encoding="utf-8")
        ele_text = pathlib.Path(ele_path).read_text(encoding="utf-8")
    except OSError as exception:
        local_logger.error(f"Could not read Triangle files: {exception}")
        return False, None

    return load_triangle_mesh(node_text, ele_text, local_logger)
