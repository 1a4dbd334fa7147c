"""Vertex relabelings, complex symmetries and their signed representations.

A vertex permutation sigma acts on an oriented simplex A = [i_0, ..., i_d]
by sending it to sigma(A) with the sign of the permutation that sorts
(sigma(i_0), ..., sigma(i_d)).  Two matrix families come out of this:

* T_sigma^d, diagonal with entries sgn(A_s, sigma), comparing a complex to
  its relabeled copy in the same simplex order;
* S_sigma^d, the signed permutation s -> sgn(A_s, sigma) sigma(s), defined
  when sigma maps the complex onto itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .complex import OrientedComplex
from .dynamics import DEFAULT_SEED, AssembledField, VectorFieldSpec, assemble
from .errors import ComplexError, PreconditionError

# pointwise checks use this many seeded points at this relative tolerance
N_CHECK_POINTS = 25
CHECK_RTOL = 1e-9


class VertexPermutation:
    """A bijection of a finite set of vertex labels."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[int, int]):
        m = {int(k): int(v) for k, v in mapping.items()}
        if sorted(m) != sorted(m.values()):
            raise ComplexError(f"not a bijection of {sorted(m)}: {m}")
        self._map = m

    @classmethod
    def identity(cls, labels: Iterable[int]) -> "VertexPermutation":
        return cls({v: v for v in labels})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], labels: Iterable[int]) -> "VertexPermutation":
        """Build from disjoint cycles, e.g. ``[(1, 3)]``, fixing all other labels."""
        m = {v: v for v in labels}
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a not in m:
                    raise ComplexError(f"label {a} not in the vertex set")
                m[a] = b
        return cls(m)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(self._map))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self._map)

    def __call__(self, v: int) -> int:
        try:
            return self._map[v]
        except KeyError:
            raise ComplexError(f"permutation undefined on label {v}") from None

    def __mul__(self, other: "VertexPermutation") -> "VertexPermutation":
        """Composition: (self * other)(v) = self(other(v))."""
        if self.domain != other.domain:
            raise ComplexError("permutations act on different label sets")
        return VertexPermutation({v: self(other(v)) for v in other.domain})

    def inverse(self) -> "VertexPermutation":
        return VertexPermutation({b: a for a, b in self._map.items()})

    def is_identity(self) -> bool:
        return all(a == b for a, b in self._map.items())

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest label."""
        seen, out = set(), []
        for v in self.domain:
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self(v)
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self(w)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def to_json(self) -> dict[str, int]:
        return {str(k): self._map[k] for k in self.domain}

    @classmethod
    def from_json(cls, data: Mapping) -> "VertexPermutation":
        return cls({int(k): int(v) for k, v in data.items()})

    def __eq__(self, other):
        return isinstance(other, VertexPermutation) and self._map == other._map

    def __hash__(self):
        return hash(tuple(sorted(self._map.items())))

    def __repr__(self):
        cyc = self.cycles()
        return "VertexPermutation(" + ("".join(str(c).replace(",", "") for c in cyc) or "id") + ")"


def inversions(seq) -> int:
    return sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])


def sgn(A: Iterable[int], sigma: VertexPermutation) -> int:
    """Sign of the permutation sorting (sigma(i_0), ..., sigma(i_d)) for ascending A."""
    A = tuple(A)
    if any(a >= b for a, b in zip(A, A[1:])):
        raise ValueError(f"simplex {A} is not strictly ascending")
    return -1 if inversions([sigma(v) for v in A]) % 2 else 1


@dataclass(frozen=True)
class SignedSimplexMap:
    """A signed permutation matrix on C_d, with exactly one +-1 per row and column."""

    d: int
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.int64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("signed simplex map must be square")
        if M.size and not (np.all(np.abs(M).sum(axis=0) == 1) and np.all(np.abs(M).sum(axis=1) == 1)
                           and np.all(np.isin(M, (-1, 0, 1)))):
            raise ValueError("matrix is not a signed permutation")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    def __matmul__(self, other):
        if isinstance(other, SignedSimplexMap):
            return SignedSimplexMap(self.d, self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def T(self) -> "SignedSimplexMap":
        return SignedSimplexMap(self.d, self.matrix.T)

    def is_diagonal(self) -> bool:
        return bool(np.all(self.matrix == np.diag(np.diag(self.matrix))))


def _check_acts_on(X: OrientedComplex, sigma: VertexPermutation):
    if sigma.domain != X.vertex_labels:
        raise ComplexError(
            f"permutation acts on {list(sigma.domain)}, complex has labels {list(X.vertex_labels)}")


def relabel_map_T(X: OrientedComplex, sigma: VertexPermutation, d: int) -> SignedSimplexMap:
    """Diagonal map with entries sgn(A_s, sigma) in the basis of X_d."""
    _check_acts_on(X, sigma)
    return SignedSimplexMap(d, np.diag([sgn(s, sigma) for s in X.simplices(d)]).astype(np.int64)
                            if X.n(d) else np.zeros((0, 0), dtype=np.int64))


def relabeled_boundary(X: OrientedComplex, sigma: VertexPermutation, d: int) -> np.ndarray:
    """Boundary matrix of the relabeled complex, in the simplex order of X.

    Vertex v of X is called sigma(v) after relabeling, and each simplex is
    re-oriented by its new labels.  Rows and columns stay indexed by the
    simplices of X, matched by vertex set.
    """
    _check_acts_on(X, sigma)
    rows, cols = X.simplices(d - 1) if d >= 1 else (), X.simplices(d)
    B = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if d < 1 or d > X.d_max:
        return B
    for j, s in enumerate(cols):
        ordered = sorted(s, key=sigma)  # vertices in order of their new labels
        for k in range(len(ordered)):
            face = tuple(sorted(ordered[:k] + ordered[k + 1:]))
            B[X.index(face), j] = -1 if k % 2 else 1
    return B


def _image(s, sigma) -> tuple[int, ...]:
    return tuple(sorted(sigma(v) for v in s))


def is_symmetry(X: OrientedComplex, sigma: VertexPermutation) -> bool:
    """True iff sigma maps every simplex of X onto a simplex of X."""
    if sigma.domain != X.vertex_labels:
        return False
    return all(_image(s, sigma) in X for d in range(X.d_max + 1) for s in X.simplices(d))


def symmetry_map_S(X: OrientedComplex, sigma: VertexPermutation, d: int,
                   signed: bool = True) -> SignedSimplexMap:
    """S_sigma^d (signed) or the plain permutation S~_sigma^d (``signed=False``)."""
    if not is_symmetry(X, sigma):
        raise PreconditionError(f"{sigma} is not a symmetry of the complex")
    n = X.n(d)
    S = np.zeros((n, n), dtype=np.int64)
    for j, s in enumerate(X.simplices(d)):
        S[X.index(_image(s, sigma)), j] = sgn(s, sigma) if signed else 1
    return SignedSimplexMap(d, S)


def _signature(X: OrientedComplex, v: int) -> tuple[int, ...]:
    return tuple(sum(1 for s in X.simplices(d) if v in s) for d in range(X.d_max + 1))


def find_symmetries(X: OrientedComplex) -> list[VertexPermutation]:
    """All vertex permutations preserving the simplex set, by backtracking.

    Candidates for each vertex are restricted to vertices with the same
    per-dimension incidence counts, and every simplex whose vertices are all
    assigned is checked as soon as its last vertex is placed.
    """
    labels = list(X.vertex_labels)
    sig = {v: _signature(X, v) for v in labels}
    simplex_sets = {d: set(X.simplices(d)) for d in range(X.d_max + 1)}
    # simplices to check once vertex labels[i] is placed (its largest position)
    pos = {v: i for i, v in enumerate(labels)}
    check_at: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in labels]
    for d in range(1, X.d_max + 1):
        for s in X.simplices(d):
            check_at[max(pos[v] for v in s)].append((d, s))

    found, assign, used = [], {}, set()

    def extend(i):
        if i == len(labels):
            found.append(VertexPermutation(dict(assign)))
            return
        v = labels[i]
        for w in labels:
            if w in used or sig[w] != sig[v]:
                continue
            assign[v] = w
            if all(tuple(sorted(assign[u] for u in s)) in simplex_sets[d] for d, s in check_at[i]):
                used.add(w)
                extend(i + 1)
                used.discard(w)
            del assign[v]

    extend(0)
    return found


def group_closed(group: list[VertexPermutation]) -> bool:
    """Closure of a finite set of permutations under composition and inverse."""
    members = set(group)
    return all(a * b in members for a in group for b in group) and all(g.inverse() in members for g in group)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a pointwise identity check; truthy iff it passed."""

    ok: bool
    residual: float
    witness: np.ndarray | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "residual": self.residual,
                "witness": None if self.witness is None else self.witness.tolist(),
                "detail": self.detail}


def _pointwise(lhs_fn, rhs_fn, n: int, seed: int, n_points: int, tol: float,
               scale: float = 2.0) -> CheckResult:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-scale, scale, size=(n_points, n))
    lhs, rhs = lhs_fn(pts), rhs_fn(pts)
    err = np.max(np.abs(lhs - rhs), axis=-1, initial=0.0)
    rel = err / (1.0 + np.maximum(np.max(np.abs(lhs), axis=-1, initial=0.0),
                                  np.max(np.abs(rhs), axis=-1, initial=0.0)))
    worst = int(np.argmax(rel)) if rel.size else 0
    ok = bool(np.all(rel <= tol))
    return CheckResult(ok, float(rel[worst]) if rel.size else 0.0,
                       None if ok else pts[worst])


def _require_odd(spec: VectorFieldSpec, uniform: bool = False):
    for name in ("internal", "down", "up"):
        f = getattr(spec, name)
        if f is None:
            continue
        f.require_odd_componentwise(f"{name} coupling")
        if uniform and name != "internal" and len({c.expr for c in f.components}) > 1:
            raise PreconditionError(f"{name} coupling must use one odd function for every simplex")


def _relabeled_field(X: OrientedComplex, sigma: VertexPermutation, spec: VectorFieldSpec) -> AssembledField:
    d = spec.d
    return AssembledField(spec, relabeled_boundary(X, sigma, d).astype(float),
                          relabeled_boundary(X, sigma, d + 1).astype(float))


def verify_relabel_conjugacy(X: OrientedComplex, sigma: VertexPermutation, spec: VectorFieldSpec,
                             direction: str | None = None, require_odd: bool = True,
                             seed: int = DEFAULT_SEED, n_points: int = N_CHECK_POINTS,
                             tol: float = CHECK_RTOL) -> CheckResult:
    """Check T G = G~ T on C_d at seeded points.

    G is the field of ``spec`` on X and G~ the same couplings on the
    relabeled complex.  ``direction`` restricts the check to the ``"up"`` or
    ``"down"`` coupling term; by default the whole field is compared.  With
    ``require_odd=False`` the oddness precondition is skipped, so the check
    can exhibit failures for non-odd couplings.
    """
    if require_odd:
        _require_odd(spec)
    G = assemble(X, spec)
    Gt = _relabeled_field(X, sigma, spec)
    T = relabel_map_T(X, sigma, spec.d).matrix.astype(float)
    part = {None: "__call__", "up": "up_part", "down": "down_part"}[direction]
    g, gt = getattr(G, part), getattr(Gt, part)
    # row-vector convention: (T x) for each row x is x @ T.T
    return _pointwise(lambda P: g(P) @ T.T, lambda P: gt(P @ T.T), G.dim, seed, n_points, tol)


def verify_symmetry(X: OrientedComplex, sigma: VertexPermutation, spec: VectorFieldSpec,
                    signed: bool = True, direction: str | None = None,
                    require_precondition: bool = True, seed: int = DEFAULT_SEED,
                    n_points: int = N_CHECK_POINTS, tol: float = CHECK_RTOL) -> CheckResult:
    """Check G(S x) = S G(x) for S = S_sigma^d (or the unsigned S~ when ``signed=False``).

    A failing check carries a witness point.
    """
    if require_precondition:
        _require_odd(spec, uniform=True)
    G = assemble(X, spec)
    S = symmetry_map_S(X, sigma, spec.d, signed=signed).matrix.astype(float)
    part = {None: "__call__", "up": "up_part", "down": "down_part"}[direction]
    g = getattr(G, part)
    res = _pointwise(lambda P: g(P @ S.T), lambda P: g(P) @ S.T, G.dim, seed, n_points, tol)
    label = "S" if signed else "S~"
    return CheckResult(res.ok, res.residual, res.witness,
                       f"{label}_{sigma} {'commutes' if res.ok else 'does not commute'} with the field")

