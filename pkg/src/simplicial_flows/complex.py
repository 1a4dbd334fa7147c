"""Finite oriented simplicial complexes and their boundary matrices.

A complex is stored as one ordered list of simplices per dimension.  Each
simplex is a strictly ascending tuple of positive integer vertex labels, so
the orientation is the one induced by the labelling.  The list order is the
basis of the chain space C_d and never changes after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ComplexError, DimensionError

Simplex = tuple[int, ...]


def _as_simplex(labels: Iterable[int]) -> Simplex:
    vals = list(labels)
    if not vals:
        raise ComplexError("simplices must be nonempty")
    for v in vals:
        if isinstance(v, bool) or int(v) != v or int(v) <= 0:
            raise ComplexError(f"vertex labels must be positive integers, got {v!r}")
    s = tuple(sorted(int(v) for v in vals))
    if len(set(s)) != len(s):
        raise ComplexError(f"repeated vertex in simplex {vals!r}")
    return s


@dataclass(frozen=True)
class OrientedComplex:
    """Immutable oriented simplicial complex.

    ``simplices_by_dim[d]`` is the ordered basis of C_d.  Use
    :func:`build_complex` rather than calling the constructor directly.
    """

    simplices_by_dim: tuple[tuple[Simplex, ...], ...]
    _index: tuple[dict, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices_by_dim)
        object.__setattr__(self, "_index", index)

    @property
    def d_max(self) -> int:
        return len(self.simplices_by_dim) - 1

    @property
    def vertex_labels(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices_by_dim[0])

    def simplices(self, d: int) -> tuple[Simplex, ...]:
        if 0 <= d <= self.d_max:
            return self.simplices_by_dim[d]
        return ()

    def n(self, d: int) -> int:
        """Dimension of the chain space C_d (zero outside 0..d_max)."""
        return len(self.simplices(d))

    def index(self, simplex: Iterable[int]) -> int:
        s = tuple(sorted(simplex))
        d = len(s) - 1
        try:
            return self._index[d][s]
        except (IndexError, KeyError):
            raise ComplexError(f"simplex {list(s)} is not in the complex") from None

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        d = len(s) - 1
        return 0 <= d <= self.d_max and s in self._index[d]

    def maximal_simplices(self) -> list[Simplex]:
        """Simplices that are not a face of any other simplex."""
        covered: set[Simplex] = set()
        for d in range(1, self.d_max + 1):
            for s in self.simplices_by_dim[d]:
                covered.update(combinations(s, d))
        out = []
        for level in self.simplices_by_dim:
            out.extend(s for s in level if s not in covered)
        return out

    def boundary(self, d: int) -> np.ndarray:
        """Integer matrix of the boundary map C_d -> C_{d-1}.

        Unlike :func:`boundary_matrix` this never raises: B_0 and
        B_{d_max+1} (and anything further out) are returned as zero maps of
        the appropriate shape.
        """
        rows, cols = self.n(d - 1), self.n(d)
        B = np.zeros((rows, cols), dtype=np.int64)
        if d < 1 or d > self.d_max:
            return B
        faces = self._index[d - 1]
        for j, s in enumerate(self.simplices_by_dim[d]):
            for k in range(d + 1):
                B[faces[s[:k] + s[k + 1:]], j] = -1 if k % 2 else 1
        return B

    def to_dict(self) -> dict:
        return {
            "maximal_simplices": [list(s) for s in self.maximal_simplices()],
            "ordering": {str(d): [list(s) for s in level]
                         for d, level in enumerate(self.simplices_by_dim)},
        }


@dataclass(frozen=True)
class BoundaryMatrix:
    """Matrix of the boundary map C_d -> C_{d-1} in the fixed bases."""

    d: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def build_complex(
    maximal_simplices: Sequence[Iterable[int]],
    ordering: Mapping[int, Sequence[Iterable[int]]] | None = None,
) -> OrientedComplex:
    """Downward closure of ``maximal_simplices``.

    Simplices of each dimension are sorted lexicographically unless
    ``ordering`` supplies an explicit order for that dimension, which must be
    a permutation of the closure at that dimension.  The explicit form exists
    so that bases drawn by hand (as in worked examples) can be reproduced.
    """
    if len(maximal_simplices) == 0:
        raise ComplexError("empty complex description")
    tops = [_as_simplex(s) for s in maximal_simplices]
    if len(set(tops)) != len(tops):
        dup = next(s for s in tops if tops.count(s) > 1)
        raise ComplexError(f"duplicate maximal simplex {list(dup)}")

    d_max = max(len(s) for s in tops) - 1
    levels: list[set[Simplex]] = [set() for _ in range(d_max + 1)]
    for s in tops:
        for k in range(1, len(s) + 1):
            levels[k - 1].update(combinations(s, k))

    ordered = []
    for d, level in enumerate(levels):
        if ordering is not None and (d in ordering or str(d) in ordering):
            given = ordering[d] if d in ordering else ordering[str(d)]
            seq = [_as_simplex(s) for s in given]
            if len(seq) != len(set(seq)) or set(seq) != level:
                raise ComplexError(
                    f"ordering for dimension {d} is not a permutation of the "
                    f"{len(level)} simplices in the closure")
            ordered.append(tuple(seq))
        else:
            ordered.append(tuple(sorted(level)))
    return OrientedComplex(tuple(ordered))


def complex_from_dict(data: Mapping) -> OrientedComplex:
    if "maximal_simplices" not in data:
        raise ComplexError("complex description needs a 'maximal_simplices' list")
    ordering = data.get("ordering")
    if ordering is not None:
        ordering = {int(k): v for k, v in ordering.items()}
    return build_complex(data["maximal_simplices"], ordering)


def boundary_matrix(X: OrientedComplex, d: int) -> BoundaryMatrix:
    if not 1 <= d <= X.d_max:
        raise DimensionError(f"boundary dimension {d} outside 1..{X.d_max}")
    return BoundaryMatrix(d, X.boundary(d))


def _check_same_dim(X: OrientedComplex, F1, F2) -> tuple[Simplex, Simplex]:
    a, b = tuple(sorted(F1)), tuple(sorted(F2))
    for s in (a, b):
        if s not in X:
            raise ComplexError(f"simplex {list(s)} is not in the complex")
    if len(a) != len(b):
        raise DimensionError("adjacency is only defined between simplices of equal dimension")
    return a, b


def upper_adjacent(X: OrientedComplex, F1, F2) -> bool:
    """True iff F1 and F2 are both faces of a common (d+1)-simplex."""
    a, b = _check_same_dim(X, F1, F2)
    if a == b:
        return False
    union = tuple(sorted(set(a) | set(b)))
    return len(union) == len(a) + 1 and union in X


def lower_adjacent(X: OrientedComplex, F1, F2) -> bool:
    """True iff F1 and F2 share a common (d-1)-face."""
    a, b = _check_same_dim(X, F1, F2)
    if a == b or len(a) == 1:
        return False
    return len(set(a) & set(b)) == len(a) - 1
