import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from simplicial_flows import build_complex, pseudoinverse, reduced_laplacian, triple_decomposition
from simplicial_flows.errors import DimensionError
from simplicial_flows.hodge import checked_rank, exact_rank, harmonic_dimension, numerical_rank
from simplicial_flows import catalog

from conftest import complexes


def rank_factorization_pinv(L):
    """L = F C with F of full column rank and C of full row rank."""
    U, s, Vt = np.linalg.svd(L)
    r = int(np.sum(s > 1e-10 * s.max())) if s.size else 0
    F = U[:, :r] * s[:r]
    C = Vt[:r]
    return C.T @ np.linalg.inv(C @ C.T) @ np.linalg.inv(F.T @ F) @ F.T


def test_pinv_identity_and_zero():
    assert np.allclose(pseudoinverse(np.eye(3)).pinv, np.eye(3))
    z = pseudoinverse(np.zeros((2, 4)))
    assert z.pinv.shape == (4, 2) and not z.pinv.any() and z.rank == 0


def test_pinv_matches_rank_factorization(diamond):
    B = diamond.boundary(2).astype(float)
    P = pseudoinverse(B)
    assert P.pinv.shape == (2, 5)
    assert np.allclose(P.pinv, rank_factorization_pinv(B), atol=1e-12)
    assert max(P.penrose_residuals().values()) < 1e-12


@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.integers(-3, 3).map(float)))
def test_penrose_axioms(L):
    P = pseudoinverse(L)
    assert max(P.penrose_residuals().values()) < 1e-9
    assert np.allclose(pseudoinverse(L.T).pinv, P.pinv.T, atol=1e-9)
    assert P.rank == exact_rank(L)


def test_exact_rank():
    assert exact_rank(np.array([[1, 2], [2, 4]])) == 1
    assert exact_rank(np.zeros((3, 0))) == 0
    assert checked_rank(np.array([[1, 0], [0, 1], [1, 1]])) == 2


@pytest.mark.parametrize("make, d, expected", [
    (catalog.tetrahedron, 2, (3, 1, 0)),
    (catalog.diamond, 1, (3, 2, 0)),
    (lambda: build_complex([(1, 2, 3)]), 1, (2, 1, 0)),
    (catalog.hollow_triangle, 1, (2, 0, 1)),
    (catalog.tetrahedron, 0, (0, 3, 1)),
])
def test_ranks(make, d, expected):
    td = triple_decomposition(make(), d)
    assert (td.r_down, td.r_up, td.w) == expected


def test_top_flow_ignores_up(tetra):
    td = triple_decomposition(tetra, 2, include_up=False)
    assert (td.r_down, td.r_up, td.w) == (3, 0, 1)
    assert not td.Q.any()


def test_top_dimension_has_no_up(diamond):
    td = triple_decomposition(diamond, 2)
    assert td.r_up == 0 and not td.Q.any()


def test_harmonic_dimension():
    assert harmonic_dimension(catalog.hollow_triangle(), 1) == 1
    assert harmonic_dimension(catalog.diamond(), 1) == 0
    assert harmonic_dimension(catalog.tetrahedron(), 0) == 1


def test_dimension_out_of_range(diamond):
    with pytest.raises(DimensionError):
        triple_decomposition(diamond, 3)
    with pytest.raises(DimensionError):
        reduced_laplacian(diamond, 0, "up")


def test_reduced_laplacian_two_triangles(diamond):
    # B_2^T B_2 = [[3, -1], [-1, 3]]
    for kind in ("up", "down"):
        L = reduced_laplacian(diamond, 2, kind)
        assert np.allclose(L.eigenvalues, [2.0, 4.0])


def test_reduced_laplacian_single_edge():
    L = reduced_laplacian(build_complex([(1, 2)]), 1, "up")
    assert np.allclose(L.matrix, [[2.0]])


@given(complexes())
def test_decomposition_identities(X):
    for d in range(X.d_max + 1):
        td = triple_decomposition(X, d)
        I = np.eye(td.n)
        P, Q, R = td.P, td.Q, td.R
        for A in (P, Q, R):
            assert np.abs(A @ A - A).max(initial=0) < 1e-9
            assert np.abs(A - A.T).max(initial=0) < 1e-9
        assert np.abs(P + Q + R - I).max(initial=0) < 1e-9
        for A, B in ((P, Q), (Q, P), (P, R), (Q, R)):
            assert np.abs(A @ B).max(initial=0) < 1e-9
        Bd, Bu = X.boundary(d), X.boundary(d + 1)
        assert np.abs(P @ Bd.T - Bd.T).max(initial=0) < 1e-9
        assert np.abs(Q @ Bu - Bu).max(initial=0) < 1e-9
        # ker B_d = im B_{d+1} + W_d
        assert np.abs(Bd @ (Q + R)).max(initial=0) < 1e-9
        assert td.r_down + td.r_up + td.w == td.n
        assert td.r_down == numerical_rank(Bd) == exact_rank(Bd)


@given(complexes())
def test_reduced_laplacians_positive(X):
    for D in range(1, X.d_max + 1):
        for kind in ("up", "down"):
            L = reduced_laplacian(X, D, kind)
            assert np.allclose(L.matrix, L.matrix.T)
            assert np.all(L.eigenvalues > 1e-9)
