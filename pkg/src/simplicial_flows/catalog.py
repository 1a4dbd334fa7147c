"""Worked-example complexes, labellings and conjugacy matrices."""
from __future__ import annotations

import numpy as np

from .complex import OrientedComplex, build_complex

# Two triangles glued along an edge.  Edge basis e1..e5 as drawn, not lexicographic.
DIAMOND_TRIANGLES = [(1, 2, 3), (1, 3, 4)]
DIAMOND_EDGE_ORDER = [(1, 2), (2, 3), (1, 3), (1, 4), (3, 4)]

# the right-hand labelling: vertex i on the left is vertex DIAMOND_RELABEL[i] on the right
DIAMOND_RELABEL = {1: 1, 2: 3, 3: 4, 4: 2}

# M^{-1} for the Lorenz + Sel'kov realization on the diamond's edge space.  Its
# columns are the first three rows of B_1 followed by the two columns of B_2.
LORENZ_SELKOV_M_INV = np.array([
    [-1, 0, -1, -1, 0],
    [1, -1, 0, 0, 0],
    [0, 1, 1, 0, -1],
    [1, 1, -1, 0, 0],
    [0, 0, 1, -1, 1],
], dtype=float).T

# M^{-1} for the Guckenheimer-Holmes realization on the tetrahedron's triangle space
GH_M_INV = np.array([
    [1, 1, 0, 1],
    [1, 0, 0, -1],
    [0, 0, 1, 1],
    [0, 1, 1, -1],
], dtype=float)

GH_M = np.array([
    [1, 3, 1, -1],
    [2, -2, -2, 2],
    [-1, 1, 3, 1],
    [1, -1, 1, -1],
], dtype=float) / 4


def diamond(labelling: str = "left") -> OrientedComplex:
    """Two triangles sharing an edge, with the edge basis in drawn order.

    ``labelling="right"`` relabels the vertices by DIAMOND_RELABEL and keeps
    every simplex in the same basis position.
    """
    if labelling == "left":
        return build_complex(DIAMOND_TRIANGLES, {1: DIAMOND_EDGE_ORDER, 2: DIAMOND_TRIANGLES})
    if labelling == "right":
        s = DIAMOND_RELABEL
        tri = [tuple(sorted(s[v] for v in t)) for t in DIAMOND_TRIANGLES]
        edges = [tuple(sorted(s[v] for v in e)) for e in DIAMOND_EDGE_ORDER]
        return build_complex(tri, {1: edges, 2: tri})
    raise ValueError("labelling must be 'left' or 'right'")


def tetrahedron() -> OrientedComplex:
    return build_complex([(1, 2, 3, 4)])


def simplex(labels) -> OrientedComplex:
    return build_complex([tuple(labels)])


def path_graph(n: int) -> OrientedComplex:
    return build_complex([(i, i + 1) for i in range(1, n)])


def hollow_triangle() -> OrientedComplex:
    return build_complex([(1, 2), (1, 3), (2, 3)])


def complete_graph(n: int) -> OrientedComplex:
    return build_complex([(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


NAMED = {
    "diamond": diamond,
    "diamond-right": lambda: diamond("right"),
    "tetrahedron": tetrahedron,
    "hollow-triangle": hollow_triangle,
}
