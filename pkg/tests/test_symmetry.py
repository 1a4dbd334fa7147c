import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplicial_flows import CouplingFunction, VectorFieldSpec, assemble
from simplicial_flows import catalog
from simplicial_flows.errors import ComplexError, PreconditionError
from simplicial_flows.simulate import integrate
from simplicial_flows.symmetry import (SignedSimplexMap, VertexPermutation, find_symmetries,
                                       group_closed, inversions, is_symmetry, relabel_map_T,
                                       relabeled_boundary, sgn, symmetry_map_S,
                                       verify_relabel_conjugacy, verify_symmetry)

from conftest import complexes

SIGMA = VertexPermutation(catalog.DIAMOND_RELABEL)


def up_spec(X, expr="x - x**3/3 + sin(2*x)", d=1):
    return VectorFieldSpec(d, up=CouplingFunction.uniform(expr, X.n(d + 1)))


def test_relabel_signs(diamond):
    assert [sgn(t, SIGMA) for t in diamond.simplices(2)] == [1, -1]
    assert np.array_equal(relabel_map_T(diamond, SIGMA, 2).matrix, np.diag([1, -1]))
    assert np.array_equal(relabel_map_T(diamond, SIGMA, 1).matrix, np.diag([1, 1, 1, 1, -1]))


def test_relabeled_boundary_matches_right_labelling(diamond, diamond_right):
    assert np.array_equal(relabeled_boundary(diamond, SIGMA, 2), diamond_right.boundary(2))
    # vertex rows of the right labelling are in label order, so match them through sigma
    rows = [diamond_right.index((SIGMA(v),)) for (v,) in diamond.simplices(0)]
    assert np.array_equal(relabeled_boundary(diamond, SIGMA, 1), diamond_right.boundary(1)[rows])


@pytest.mark.parametrize("d", [1, 2])
def test_boundary_relabel_identity(diamond, d):
    T = relabel_map_T(diamond, SIGMA, d).matrix
    Tm = relabel_map_T(diamond, SIGMA, d - 1).matrix
    assert np.array_equal(diamond.boundary(d) @ T, Tm @ relabeled_boundary(diamond, SIGMA, d))


def test_relabel_conjugacy_odd_and_even(diamond):
    assert verify_relabel_conjugacy(diamond, SIGMA, up_spec(diamond))
    assert verify_relabel_conjugacy(diamond, SIGMA, VectorFieldSpec(
        2, down=CouplingFunction.uniform("tanh(x)", 5)))
    with pytest.raises(PreconditionError):
        verify_relabel_conjugacy(diamond, SIGMA, up_spec(diamond, "x**2"))
    res = verify_relabel_conjugacy(diamond, SIGMA, up_spec(diamond, "x**2"), require_odd=False)
    assert not res and res.witness is not None


def test_sgn_is_brute_force_parity():
    perms = list(itertools.permutations(range(1, 6)))
    for p in perms[::7]:
        sigma = VertexPermutation(dict(zip(range(1, 6), p)))
        for A in itertools.combinations(range(1, 6), 3):
            images = [sigma(v) for v in A]
            # sign of the sorting permutation, via its cycle count
            order = sorted(range(3), key=lambda k: images[k])
            seen, cyc = set(), 0
            for k in range(3):
                if k not in seen:
                    cyc += 1
                    while k not in seen:
                        seen.add(k)
                        k = order[k]
            assert sgn(A, sigma) == (-1) ** (3 - cyc)


def test_sgn_rejects_unsorted():
    with pytest.raises(ValueError):
        sgn((2, 1), SIGMA)


def test_inversions():
    assert inversions([1, 2, 3]) == 0
    assert inversions([3, 2, 1]) == 3


def test_permutation_basics():
    s = VertexPermutation.from_cycles([(1, 3)], [1, 2, 3, 4])
    assert s(1) == 3 and s(2) == 2
    assert (s * s).is_identity()
    assert s.cycles() == [(1, 3)]
    assert VertexPermutation.from_json(s.to_json()) == s
    assert SIGMA * SIGMA.inverse() == VertexPermutation.identity([1, 2, 3, 4])
    with pytest.raises(ValueError):
        VertexPermutation({1: 2, 2: 2})


def test_signed_map_validation():
    with pytest.raises(ValueError):
        SignedSimplexMap(1, np.array([[1, 1], [0, 1]]))
    assert SignedSimplexMap(1, -np.eye(3, dtype=int)).is_diagonal()


def test_diamond_symmetries(diamond):
    G = find_symmetries(diamond)
    assert len(G) == 4 and group_closed(G)
    assert len(find_symmetries(catalog.tetrahedron())) == 24
    path = find_symmetries(catalog.path_graph(3))
    assert sorted(map(str, path)) == sorted(map(str, [VertexPermutation.identity([1, 2, 3]),
                                                     VertexPermutation.from_cycles([(1, 3)], [1, 2, 3])]))


def test_symmetry_map_on_diamond(diamond):
    s = VertexPermutation.from_cycles([(1, 3)], [1, 2, 3, 4])
    S = symmetry_map_S(diamond, s, 1).matrix
    St = symmetry_map_S(diamond, s, 1, signed=False).matrix
    assert np.array_equal(St, [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 1, 0, 0],
                               [0, 0, 0, 0, 1], [0, 0, 0, 1, 0]])
    assert np.array_equal(S, [[0, -1, 0, 0, 0], [-1, 0, 0, 0, 0], [0, 0, -1, 0, 0],
                              [0, 0, 0, 0, 1], [0, 0, 0, 1, 0]])
    spec = up_spec(diamond)
    assert verify_symmetry(diamond, s, spec)
    bad = verify_symmetry(diamond, s, spec, signed=False)
    assert not bad and bad.witness is not None


def test_non_symmetry_rejected(diamond):
    s = VertexPermutation.from_cycles([(1, 2)], [1, 2, 3, 4])
    assert not is_symmetry(diamond, s)
    with pytest.raises(PreconditionError):
        symmetry_map_S(diamond, s, 1)
    with pytest.raises(ComplexError):
        relabel_map_T(diamond, VertexPermutation.identity([1, 2, 3]), 1)


def test_symmetry_needs_uniform_coupling(diamond):
    s = VertexPermutation.from_cycles([(1, 3)], [1, 2, 3, 4])
    spec = VectorFieldSpec(1, up=CouplingFunction.componentwise(["x", "x**3"]))
    with pytest.raises(PreconditionError):
        verify_symmetry(diamond, s, spec)


@settings(max_examples=25)
@given(complexes(max_vertices=6))
def test_representation_laws(X):
    G = find_symmetries(X)
    rng = np.random.default_rng(len(G))
    pairs = [(G[i], G[j]) for i, j in rng.integers(0, len(G), size=(6, 2))]
    for d in range(X.d_max + 1):
        for a, b in pairs:
            Sa, Sb = symmetry_map_S(X, a, d).matrix, symmetry_map_S(X, b, d).matrix
            assert np.array_equal(Sa @ Sb, symmetry_map_S(X, a * b, d).matrix)
            assert np.array_equal(Sa.T, symmetry_map_S(X, a.inverse(), d).matrix)
            # the cocycle identity behind the composition law
            for s in X.simplices(d):
                img = tuple(sorted(b(v) for v in s))
                assert sgn(img, a) * sgn(s, b) == sgn(s, a * b)


@settings(max_examples=25)
@given(complexes(max_vertices=6))
def test_symmetries_intertwine_boundaries(X):
    for g in find_symmetries(X):
        for d in range(1, X.d_max + 1):
            B = X.boundary(d)
            assert np.array_equal(B @ symmetry_map_S(X, g, d).matrix,
                                  symmetry_map_S(X, g, d - 1).matrix @ B)


@settings(max_examples=20)
@given(complexes(max_vertices=6), st.integers(0, 2**32 - 1))
def test_random_relabelling(X, seed):
    rng = np.random.default_rng(seed)
    labels = list(X.vertex_labels)
    sigma = VertexPermutation(dict(zip(labels, rng.permutation(labels).tolist())))
    T2 = np.eye(0)
    for d in range(X.d_max + 1):
        T2 = relabel_map_T(X, sigma, d).matrix
        assert np.array_equal(T2 @ T2, np.eye(X.n(d), dtype=int))
        if d >= 1:
            assert np.array_equal(X.boundary(d) @ T2,
                                  relabel_map_T(X, sigma, d - 1).matrix @ relabeled_boundary(X, sigma, d))


def test_invariant_line_depends_on_labelling(diamond, diamond_right):
    # {x4 = x5} is invariant only on the right labelling
    def drift(X):
        G = assemble(X, up_spec(X, "x - x**3"))
        x0 = np.array([0.3, -0.2, 0.5, 0.4, 0.4])
        tr = integrate(G, x0, h=1e-2, T=5.0)
        return np.max(np.abs(tr.states[:, 3] - tr.states[:, 4]))

    assert drift(diamond_right) < 1e-12
    assert drift(diamond) > 1e-3
