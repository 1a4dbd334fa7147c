import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplicial_flows import CouplingFunction, VectorFieldSpec, assemble, build_complex
from simplicial_flows import catalog
from simplicial_flows.coloring import (AntiColoring, ColorModuleElement, canonical_colorings,
                                       classical_graph_check, delta_membership, enumerate_balanced,
                                       induced_coloring, invariance_oracle, is_balanced,
                                       normalize_partition, orbit_coloring)
from simplicial_flows.errors import DimensionError, GuardExceeded, PreconditionError
from simplicial_flows.simulate import integrate
from simplicial_flows.symmetry import find_symmetries, symmetry_map_S

from conftest import complexes

Q = [[(1, 2)], [(2, 3), (1, 3), (1, 4), (3, 4)]]


def K2(*vals):
    return AntiColoring.parse(2, list(vals))


def test_induced_down_colorings(diamond):
    assert induced_coloring(diamond, K2("+c", "+c"), "down").labels() == ["c", "c", "0", "-c", "c"]
    assert induced_coloring(diamond, K2("+c", "-c"), "down").labels() == ["c", "c", "-2c", "c", "-c"]


def test_down_balanced_trivial_partition(diamond):
    for vals in (("+c", "+d"), ("+c", "+c"), ("+c", "-c"), ("0", "0")):
        assert is_balanced(diamond, K2(*vals), None, "down")
    r = is_balanced(diamond, K2("+c", "0"), None, "down")
    assert not r and r.witness["vector"] == ["3c", "-c"]
    assert not is_balanced(diamond, K2("0", "+c"), None, "down")


def test_down_balanced_split_partition(diamond):
    assert is_balanced(diamond, K2("+c", "+d"), Q, "down")
    assert is_balanced(diamond, K2("0", "0"), Q, "down")
    for vals in (("+c", "+c"), ("+c", "-c")):
        r = is_balanced(diamond, K2(*vals), Q, "down")
        assert not r and r.witness["vector"] == ["c", "0"]


def test_enumeration_counts(diamond):
    spaces = {K.space_description() for K in enumerate_balanced(diamond, 2, None, "down")}
    assert spaces == {"full", "x2=x1", "x2=-x1", "x1=0, x2=0"}
    spaces = {K.space_description() for K in enumerate_balanced(diamond, 2, Q, "down")}
    assert spaces == {"full", "x1=0, x2=0"}


def test_single_simplex_has_two_spaces():
    X = build_complex([(1, 2)])
    assert len(enumerate_balanced(X, 1, None, "down")) == 2


def test_canonical_enumeration_is_exhaustive():
    # number of anti-synchrony spaces on n coordinates: 1, 2, 6, 24 (cf. signed set partitions)
    assert [sum(1 for _ in canonical_colorings(n)) for n in range(4)] == [1, 2, 6, 24]
    seen = set()
    for codes in canonical_colorings(3):
        K = AntiColoring.from_codes(1, codes)
        assert K.canonical().codes() == codes
        seen.add(K.space_description())
    assert len(seen) == 24  # every space exactly once


def test_canonical_renames():
    K = AntiColoring.parse(1, ["-d", "+c", "+d"])
    assert K.canonical().codes() == (1, 2, -1)


def test_entry_parsing_errors():
    with pytest.raises(ValueError):
        AntiColoring.parse(1, ["+c", "+e"], colors=["c"])
    with pytest.raises(ValueError):
        AntiColoring(1, ("c",), ((0, 0),))


def test_from_dict(diamond):
    K = AntiColoring.from_dict(diamond, {"[1,2,3]": "+c", "[1,3,4]": "-c"})
    assert K.codes() == (1, -1)
    assert AntiColoring.from_dict(diamond, K.to_dict(diamond)) == K
    with pytest.raises(DimensionError):
        AntiColoring.from_dict(diamond, {"[1,2,3]": "+c"})


def test_module_arithmetic():
    c, d = ColorModuleElement({"c": 1}), ColorModuleElement({"d": 1})
    a = 2 * c - d
    assert str(a) == "2c-d"
    assert not (a - a)
    assert -(-a) == a


def test_delta_membership():
    K = AntiColoring.parse(1, ["+c", "-c", "0", "+d"])
    c = ColorModuleElement({"c": 1})
    z = ColorModuleElement()
    assert delta_membership([c, -c, z, 3 * c], K)
    assert not delta_membership([c, c, z, z], K)
    assert not delta_membership([c, -c, c, z], K)
    with pytest.raises(DimensionError):
        delta_membership([c], K)


def test_representative_sign_does_not_matter(diamond):
    # flipping every color flips every induced entry, which must not change the verdict
    for codes in canonical_colorings(5, 2):
        K = AntiColoring.from_codes(1, codes)
        Kn = AntiColoring.from_codes(1, [-c for c in codes])
        assert bool(is_balanced(diamond, K)) == bool(is_balanced(diamond, Kn))


def test_partition_validation(diamond):
    assert normalize_partition(diamond, 1, None) == [[0, 1, 2, 3, 4]]
    assert normalize_partition(diamond, 1, Q) == [[0], [1, 2, 3, 4]]
    with pytest.raises(PreconditionError):
        normalize_partition(diamond, 1, [[0, 1]])
    with pytest.raises(DimensionError):
        normalize_partition(diamond, 1, [[(1, 2, 3)]])


def test_guard():
    with pytest.raises(GuardExceeded):
        enumerate_balanced(catalog.complete_graph(6), 1, max_simplices=12)


def test_oracle_agrees_on_diamond(diamond):
    for part in (None, Q):
        for codes in canonical_colorings(2):
            K = AntiColoring.from_codes(2, codes)
            assert bool(is_balanced(diamond, K, part, "down")) == invariance_oracle(diamond, K, part, "down")
    for codes in canonical_colorings(5, 2):
        K = AntiColoring.from_codes(1, codes)
        assert bool(is_balanced(diamond, K, None, "up")) == invariance_oracle(diamond, K, None, "up")


def test_oracle_residual_is_reported(diamond):
    ok, res = invariance_oracle(diamond, K2("+c", "0"), None, "down", return_residual=True)
    assert not ok and res > 1e-3


def test_classical_path_examples():
    P3 = catalog.path_graph(3)
    assert classical_graph_check(P3, AntiColoring.parse(0, ["+c", "+d", "+c"]))
    assert not classical_graph_check(P3, AntiColoring.parse(0, ["+c", "+c", "+d"]))
    with pytest.raises(PreconditionError):
        classical_graph_check(P3, AntiColoring.parse(0, ["+c", "-c", "+d"]))


def random_graph(rng, n):
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.45]
    return build_complex(edges + [(v,) for v in range(1, n + 1)])


def test_classical_check_agrees_with_balanced_on_graphs():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(50):
        X = random_graph(rng, int(rng.integers(3, 6)))
        if X.d_max < 1:
            continue
        n = X.n(0)
        codes = rng.integers(1, 3, size=n).tolist()
        K = AntiColoring.from_codes(0, codes)
        assert classical_graph_check(X, K) == bool(is_balanced(X, K, None, "up"))
        checked += 1
    assert checked >= 40


@settings(max_examples=20)
@given(complexes(max_vertices=5, max_top=4), st.integers(0, 2**32 - 1))
def test_orbit_colorings_are_balanced(X, seed):
    rng = np.random.default_rng(seed)
    G = find_symmetries(X)
    g = G[int(rng.integers(len(G)))]
    for d in range(X.d_max + 1):
        K = orbit_coloring(X, symmetry_map_S(X, g, d).matrix, d)
        if d < X.d_max:
            assert is_balanced(X, K, None, "up")
            assert invariance_oracle(X, K, None, "up", trials=20)
        if d >= 1:
            assert is_balanced(X, K, None, "down")


@settings(max_examples=15)
@given(complexes(max_vertices=5, max_top=4), st.integers(0, 2**32 - 1))
def test_oracle_matches_balanced_random(X, seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(0, X.d_max + 1))
    n = X.n(d)
    for _ in range(4):
        K = AntiColoring.from_codes(d, rng.integers(-2, 3, size=n).tolist())
        for direction in ("up", "down"):
            if (direction == "up" and d == X.d_max) or (direction == "down" and d == 0):
                continue
            assert bool(is_balanced(X, K, None, direction)) == invariance_oracle(X, K, None, direction, trials=30)


def test_balanced_space_is_invariant_under_flow(diamond):
    K = AntiColoring.parse(2, ["+c", "-c"])
    G = assemble(diamond, VectorFieldSpec(2, down=CouplingFunction.uniform("x - x**3 + sin(x)", 5)))
    tr = integrate(G, np.array([0.4, -0.4]), h=1e-2, T=10.0)
    assert np.max(np.abs(tr.states[:, 0] + tr.states[:, 1])) <= 1e-7
