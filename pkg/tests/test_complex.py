import numpy as np
import pytest
from hypothesis import given

from simplicial_flows import boundary_matrix, build_complex, complex_from_dict
from simplicial_flows.complex import lower_adjacent, upper_adjacent
from simplicial_flows.errors import ComplexError, DimensionError

from conftest import complexes


def test_single_triangle_closure():
    X = build_complex([(1, 2, 3)])
    assert X.simplices(0) == ((1,), (2,), (3,))
    assert X.simplices(1) == ((1, 2), (1, 3), (2, 3))
    assert X.n(2) == 1 and X.d_max == 2


def test_two_triangles_lexicographic():
    X = build_complex([[1, 2, 3], [1, 3, 4]])
    assert X.simplices(1) == ((1, 2), (1, 3), (1, 4), (2, 3), (3, 4))
    assert X.n(0) == 4 and X.n(2) == 2


def test_tetrahedron_counts(tetra):
    assert [tetra.n(d) for d in range(4)] == [4, 6, 4, 1]


def test_boundary_of_triangle():
    # d[1,2,3] = [2,3] - [1,3] + [1,2]
    X = build_complex([(1, 2, 3)])
    assert boundary_matrix(X, 2).entries[:, 0].tolist() == [1, -1, 1]


def test_drawn_order_boundaries(diamond):
    assert diamond.simplices(1) == ((1, 2), (2, 3), (1, 3), (1, 4), (3, 4))
    assert diamond.boundary(2).tolist() == [[1, 0], [1, 0], [-1, 1], [0, -1], [0, 1]]
    assert diamond.boundary(1).tolist() == [[-1, 0, -1, -1, 0], [1, -1, 0, 0, 0],
                                            [0, 1, 1, 0, -1], [0, 0, 0, 1, 1]]


def test_out_of_range_boundaries(diamond):
    with pytest.raises(DimensionError):
        boundary_matrix(diamond, 0)
    with pytest.raises(DimensionError):
        boundary_matrix(diamond, 3)
    assert diamond.boundary(3).shape == (2, 0)
    assert diamond.boundary(0).shape == (0, 4)


@pytest.mark.parametrize("bad", [[], [(1, 2), (2, 1)], [(0, 1)], [(1, 1, 2)], [(1.5, 2)]])
def test_rejects_bad_input(bad):
    with pytest.raises(ComplexError):
        build_complex(bad)


def test_bad_explicit_ordering():
    with pytest.raises(ComplexError):
        build_complex([(1, 2, 3)], {1: [(1, 2), (2, 3)]})


def test_noncontiguous_labels():
    X = build_complex([(7, 8), (3, 7)])
    assert X.vertex_labels == (3, 7, 8)
    assert X.boundary(1).tolist() == [[-1, 0], [1, -1], [0, 1]]


def test_adjacency(diamond):
    assert lower_adjacent(diamond, (1, 2, 3), (1, 3, 4))
    assert upper_adjacent(diamond, (1, 2), (2, 3))
    assert not upper_adjacent(diamond, (1, 2), (3, 4))
    with pytest.raises(ComplexError):
        upper_adjacent(diamond, (1, 2), (2, 4))


def test_dict_round_trip(diamond):
    Y = complex_from_dict(diamond.to_dict())
    assert Y.simplices_by_dim == diamond.simplices_by_dim


def test_boundary_is_read_only(diamond):
    with pytest.raises(ValueError):
        boundary_matrix(diamond, 2).entries[0, 0] = 5


@given(complexes())
def test_boundary_squares_to_zero(X):
    for d in range(1, X.d_max):
        assert not np.any(X.boundary(d) @ X.boundary(d + 1))


@given(complexes())
def test_columns_alternate(X):
    for d in range(1, X.d_max + 1):
        B = X.boundary(d)
        faces = X.simplices(d - 1)
        for j, s in enumerate(X.simplices(d)):
            col = B[:, j]
            assert np.count_nonzero(col) == d + 1
            for k in range(d + 1):
                assert col[faces.index(s[:k] + s[k + 1:])] == (-1) ** k


@given(complexes())
def test_rebuild_is_idempotent(X):
    Y = build_complex(X.maximal_simplices())
    assert Y.simplices_by_dim == X.simplices_by_dim
