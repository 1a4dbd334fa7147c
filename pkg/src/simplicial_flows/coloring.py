"""Anti-colorings, induced colorings and balanced-ness.

An anti-coloring assigns to every d-simplex a signed color +k, -k or 0.  It
determines the anti-synchrony space Delta_K = {x_s = x_t if K(s) = K(t),
x_s = -x_t if K(s) = -K(t)}.  Whether Delta_K is invariant for every
up- (down-) coupled field whose odd coupling is constant on the classes of a
partition is decided combinatorially by the balanced conditions below.

Elements of the free Z-module on the colors are stored as integer
coefficient vectors, one entry per color, so a vector of such elements is
an integer matrix with one row per simplex.  All of this is exact; only the
dynamical oracle uses floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .complex import OrientedComplex
from .dynamics import DEFAULT_SEED
from .errors import DimensionError, GuardExceeded, PreconditionError

DEFAULT_MAX_SIMPLICES = 12
ORACLE_TRIALS = 100
ORACLE_TOL = 1e-9


class ColorModuleElement:
    """An element sum_k a_k k of the free Z-module on a set of color names."""

    __slots__ = ("_coef",)

    def __init__(self, coefficients: Mapping[str, int] | None = None):
        self._coef = {k: int(v) for k, v in (coefficients or {}).items() if int(v) != 0}

    @classmethod
    def from_vector(cls, vec, colors: Sequence[str]) -> "ColorModuleElement":
        return cls({c: int(v) for c, v in zip(colors, vec)})

    def to_vector(self, colors: Sequence[str]) -> np.ndarray:
        unknown = set(self._coef) - set(colors)
        if unknown:
            raise ValueError(f"colors {sorted(unknown)} are not in {list(colors)}")
        return np.array([self._coef.get(c, 0) for c in colors], dtype=np.int64)

    @property
    def coefficients(self) -> dict[str, int]:
        return dict(self._coef)

    def __add__(self, other):
        out = dict(self._coef)
        for k, v in other._coef.items():
            out[k] = out.get(k, 0) + v
        return ColorModuleElement(out)

    def __neg__(self):
        return ColorModuleElement({k: -v for k, v in self._coef.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, r: int):
        return ColorModuleElement({k: int(r) * v for k, v in self._coef.items()})

    def __eq__(self, other):
        return isinstance(other, ColorModuleElement) and self._coef == other._coef

    def __hash__(self):
        return hash(tuple(sorted(self._coef.items())))

    def __bool__(self):
        return bool(self._coef)

    def __str__(self):
        if not self._coef:
            return "0"
        parts = []
        for k in sorted(self._coef):
            v = self._coef[k]
            mag = "" if abs(v) == 1 else str(abs(v))
            parts.append(("-" if v < 0 else "+") + mag + k)
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s

    __repr__ = __str__


def _parse_entry(text: str) -> tuple[str | None, int]:
    t = str(text).strip()
    if t in ("0", ""):
        return None, 0
    sign = 1
    if t[0] in "+-":
        sign = -1 if t[0] == "-" else 1
        t = t[1:].strip()
    if not t or not (t[0].isalpha() or t[0] == "_"):
        raise ValueError(f"bad color entry {text!r}; expected '+c', '-c', 'c' or '0'")
    return t, sign


@dataclass(frozen=True)
class AntiColoring:
    """Signed colors on the d-simplices, stored as (color index or None, sign).

    ``colors`` lists the color names; index ``i`` refers to ``colors[i]``.
    A zero entry is ``(None, 0)``.
    """

    d: int
    colors: tuple[str, ...]
    entries: tuple[tuple[int | None, int], ...]

    def __post_init__(self):
        for idx, sign in self.entries:
            if (idx is None) != (sign == 0) or sign not in (-1, 0, 1):
                raise ValueError(f"bad entry {(idx, sign)}")
            if idx is not None and not 0 <= idx < len(self.colors):
                raise ValueError(f"color index {idx} outside the color set")

    @classmethod
    def parse(cls, d: int, values: Sequence[str], colors: Sequence[str] | None = None) -> "AntiColoring":
        """From strings such as ``["+c", "-c", "0"]``; colors ordered by first use unless given."""
        parsed = [_parse_entry(v) for v in values]
        names = list(colors) if colors is not None else []
        for name, _ in parsed:
            if name is not None and name not in names:
                if colors is not None:
                    raise ValueError(f"color {name!r} not in {list(colors)}")
                names.append(name)
        return cls(d, tuple(names), tuple((None, 0) if n is None else (names.index(n), s)
                                          for n, s in parsed))

    @classmethod
    def from_codes(cls, d: int, codes: Sequence[int], colors: Sequence[str] | None = None) -> "AntiColoring":
        """From signed integer codes: 0 is uncolored, +-k is +-(k-th color)."""
        m = max((abs(c) for c in codes), default=0)
        names = tuple(colors) if colors is not None else tuple(_default_names(m))
        if len(names) < m:
            raise ValueError("not enough color names")
        return cls(d, names, tuple((None, 0) if c == 0 else (abs(c) - 1, 1 if c > 0 else -1)
                                   for c in codes))

    @classmethod
    def from_dict(cls, X: OrientedComplex, data: Mapping[str, str]) -> "AntiColoring":
        """From ``{"[1,2,3]": "+c", ...}``; every simplex of one dimension must appear."""
        import json
        keyed = {tuple(sorted(json.loads(k))): v for k, v in data.items()}
        dims = {len(k) - 1 for k in keyed}
        if len(dims) != 1:
            raise DimensionError("coloring mixes simplices of different dimensions")
        d = dims.pop()
        missing = [s for s in X.simplices(d) if s not in keyed]
        if missing or len(keyed) != X.n(d):
            raise DimensionError(f"coloring must cover exactly the {d}-simplices; missing {missing}")
        return cls.parse(d, [keyed[s] for s in X.simplices(d)])

    def to_dict(self, X: OrientedComplex) -> dict[str, str]:
        return {"[" + ",".join(map(str, s)) + "]": v for s, v in zip(X.simplices(self.d), self.labels())}

    def labels(self) -> list[str]:
        return ["0" if i is None else ("+" if s > 0 else "-") + self.colors[i] for i, s in self.entries]

    def codes(self) -> tuple[int, ...]:
        return tuple(0 if i is None else s * (i + 1) for i, s in self.entries)

    def __len__(self):
        return len(self.entries)

    def matrix(self) -> np.ndarray:
        """The color vector K-bar as an integer matrix (simplices x colors)."""
        K = np.zeros((len(self.entries), len(self.colors)), dtype=np.int64)
        for r, (i, s) in enumerate(self.entries):
            if i is not None:
                K[r, i] = s
        return K

    def vector(self) -> list[ColorModuleElement]:
        return [ColorModuleElement.from_vector(row, self.colors) for row in self.matrix()]

    def canonical(self) -> "AntiColoring":
        """Rename colors by first occurrence and flip signs so each first occurrence is positive."""
        order, flip = {}, {}
        for i, s in self.entries:
            if i is not None and i not in order:
                order[i], flip[i] = len(order), s
        return AntiColoring.from_codes(self.d, [0 if i is None else s * flip[i] * (order[i] + 1)
                                                for i, s in self.entries])

    def space_description(self) -> str:
        """Human-readable equations for Delta_K, with x_1.. indexing the simplices."""
        eqs, first = [], {}
        for r, (i, s) in enumerate(self.entries, start=1):
            if i is None:
                eqs.append(f"x{r}=0")
            elif i in first:
                r0, s0 = first[i]
                eqs.append(f"x{r}={'' if s == s0 else '-'}x{r0}")
            else:
                first[i] = (r, s)
        return "full" if not eqs else ", ".join(eqs)

    def projector(self) -> np.ndarray:
        """Orthogonal projection of C_d onto Delta_K."""
        K = self.matrix().astype(float)
        norms = np.sum(K * K, axis=0)
        K = K[:, norms > 0] / np.sqrt(norms[norms > 0])
        return K @ K.T


def _default_names(m: int) -> list[str]:
    base = "cdefghkmnpqrsuvw"
    return [base[i] if i < len(base) else f"k{i}" for i in range(m)]


@dataclass(frozen=True)
class InducedColoring:
    """Induced coloring on the (d+1)- (up) or (d-1)-simplices (down)."""

    direction: str
    dim: int
    colors: tuple[str, ...]
    matrix: np.ndarray  # simplices x colors, integer coefficients

    def vector(self) -> list[ColorModuleElement]:
        return [ColorModuleElement.from_vector(r, self.colors) for r in self.matrix]

    def labels(self) -> list[str]:
        return [str(e) for e in self.vector()]


def _target_dim(X: OrientedComplex, d: int, direction: str) -> int:
    if direction == "up":
        if d >= X.d_max:
            raise DimensionError(f"no up-direction from d={d}; the complex has dimension {X.d_max}")
        return d + 1
    if direction == "down":
        if d <= 0:
            raise DimensionError("no down-direction from d=0")
        return d - 1
    raise ValueError("direction must be 'up' or 'down'")


def induced_coloring(X: OrientedComplex, K: AntiColoring, direction: str) -> InducedColoring:
    """B_{d+1}^T K-bar (up) or B_d K-bar (down), in exact integer arithmetic."""
    if len(K) != X.n(K.d):
        raise DimensionError(f"coloring has {len(K)} entries, X_{K.d} has {X.n(K.d)} simplices")
    D = _target_dim(X, K.d, direction)
    Km = K.matrix()
    M = X.boundary(D).T @ Km if direction == "up" else X.boundary(K.d) @ Km
    return InducedColoring(direction, D, K.colors, M)


def _check_delta(V: np.ndarray, K: AntiColoring) -> tuple[int, int] | None:
    """First pair (s, t) violating membership of V in Delta_K, or None; (s, s) for a nonzero zero-entry."""
    first: dict[int, int] = {}
    for s, (i, sign) in enumerate(K.entries):
        if i is None:
            if np.any(V[s]):
                return s, s
            continue
        if i not in first:
            first[i] = s
            continue
        t = first[i]
        if not np.array_equal(sign * V[s], K.entries[t][1] * V[t]):
            return t, s
    return None


def delta_membership(v, K: AntiColoring) -> bool:
    """Exact membership of a vector of module elements (or integer matrix) in Delta_K."""
    V = np.array([e.to_vector(K.colors) for e in v], dtype=np.int64).reshape(len(v), len(K.colors)) \
        if len(v) and isinstance(v[0], ColorModuleElement) else np.asarray(v, dtype=np.int64)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[0] != len(K):
        raise DimensionError(f"vector has {V.shape[0]} entries, coloring has {len(K)}")
    return _check_delta(V, K) is None


def _representative(row: np.ndarray) -> tuple[int, ...]:
    nz = np.flatnonzero(row)
    return tuple(int(x) for x in (row if row[nz[0]] > 0 else -row))


def normalize_partition(X: OrientedComplex, dim: int, partition) -> list[list[int]]:
    """Partition classes as index lists into X_dim; ``None`` is the trivial partition.

    Classes may be given as simplex index lists or as lists of vertex tuples.
    """
    n = X.n(dim)
    if partition is None:
        return [list(range(n))] if n else []
    classes = []
    for cls_ in partition:
        idx = []
        for item in cls_:
            if isinstance(item, (list, tuple)):
                item = tuple(item)
                if len(item) != dim + 1 or item not in X:
                    raise DimensionError(f"{list(item)} is not a {dim}-simplex of the complex")
                idx.append(X.index(item))
            else:
                idx.append(int(item))
        classes.append(idx)
    flat = sorted(i for c in classes for i in c)
    if flat != list(range(n)):
        raise PreconditionError(f"partition classes must be disjoint and cover all {n} simplices of X_{dim}")
    return classes


@dataclass(frozen=True)
class BalanceResult:
    """Outcome of a balanced check; truthy iff balanced.

    On failure ``witness`` records the class index, the module element a,
    the offending vector B[K]_{a,P_i} (as labels) and a simplex pair (s, t)
    violating membership in Delta_K (s == t means the entry should vanish).
    """

    balanced: bool
    direction: str
    witness: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.balanced


def is_balanced(X: OrientedComplex, K: AntiColoring, partition=None, direction: str = "up") -> BalanceResult:
    ind = induced_coloring(X, K, direction)
    classes = normalize_partition(X, ind.dim, partition)
    B = X.boundary(K.d + 1) if direction == "up" else X.boundary(K.d).T
    Kbar = ind.matrix
    checked = 0
    for ci, cls_ in enumerate(classes):
        reps: dict[tuple[int, ...], list[int]] = {}
        for t in cls_:
            if np.any(Kbar[t]):
                reps.setdefault(_representative(Kbar[t]), []).append(t)
        for a, members in reps.items():
            masked = np.zeros_like(Kbar)
            masked[members] = Kbar[members]
            V = B @ masked
            checked += 1
            bad = _check_delta(V, K)
            if bad is not None:
                a_el = ColorModuleElement.from_vector(a, K.colors)
                vec = [str(ColorModuleElement.from_vector(r, K.colors)) for r in V]
                return BalanceResult(False, direction, {
                    "class": ci, "a": str(a_el), "vector": vec, "pair": [int(bad[0]), int(bad[1])]},
                    checked)
    return BalanceResult(True, direction, None, checked)


def canonical_colorings(n: int, max_colors: int | None = None) -> Iterator[tuple[int, ...]]:
    """All anti-colorings of n simplices up to color renaming and per-color sign.

    Colors are numbered by first occurrence and each first occurrence is
    positive, so every anti-synchrony space appears exactly once.
    """
    cap = n if max_colors is None else max_colors
    codes = [0] * n

    def rec(i, used):
        if i == n:
            yield tuple(codes)
            return
        for c in [0] + [s * k for k in range(1, used + 1) for s in (1, -1)]:
            codes[i] = c
            yield from rec(i + 1, used)
        if used < cap:
            codes[i] = used + 1
            yield from rec(i + 1, used + 1)

    yield from rec(0, 0)


def enumerate_balanced(X: OrientedComplex, d: int, partition=None, direction: str = "up",
                       max_simplices: int = DEFAULT_MAX_SIMPLICES,
                       max_colors: int | None = None) -> list[AntiColoring]:
    """Canonical representatives of all balanced anti-colorings of X_d."""
    n = X.n(d)
    if n > max_simplices:
        raise GuardExceeded(f"X_{d} has {n} simplices; exhaustive enumeration is capped at {max_simplices}")
    _target_dim(X, d, direction)
    out = []
    for codes in canonical_colorings(n, max_colors):
        K = AntiColoring.from_codes(d, codes)
        if is_balanced(X, K, partition, direction):
            out.append(K)
    return out


def _random_odd_coefficients(rng, shape):
    # c1 y + c3 y^3 + c5 y^5 + cs sin(w y) with small rational coefficients
    num = rng.choice([-3, -2, -1, 1, 2, 3], size=(4,) + shape)
    den = rng.choice([1, 2, 3, 5], size=(4,) + shape)
    w = rng.uniform(0.5, 2.0, size=shape)
    return num / den, w


def invariance_oracle(X: OrientedComplex, K: AntiColoring, partition=None, direction: str = "up",
                      trials: int = ORACLE_TRIALS, seed: int = DEFAULT_SEED,
                      tol: float = ORACLE_TOL, return_residual: bool = False):
    """Numerical invariance test of Delta_K for random odd couplings constant on classes.

    Each trial draws one random odd function per partition class and one
    random point of Delta_K, and measures how far the coupling term leaves
    Delta_K.  Returns False iff some trial exceeds ``tol`` (relative).
    """
    D = _target_dim(X, K.d, direction)
    classes = normalize_partition(X, D, partition)
    nD = X.n(D)
    cls_of = np.empty(nD, dtype=int)
    for ci, c in enumerate(classes):
        cls_of[c] = ci
    rng = np.random.default_rng(seed)
    coef, w = _random_odd_coefficients(rng, (trials, len(classes)))
    coef, w = coef[:, :, cls_of], w[:, cls_of]  # per-simplex coefficients

    Km = K.matrix().astype(float)
    colors = rng.uniform(-1.0, 1.0, size=(trials, Km.shape[1]))
    x = colors @ Km.T  # points of Delta_K, one per trial
    if direction == "up":
        B = X.boundary(D).astype(float)  # n_d x n_{d+1}
        y = x @ B
        f = coef[0] * y + coef[1] * y ** 3 + coef[2] * y ** 5 + coef[3] * np.sin(w * y)
        G = f @ B.T
    else:
        B = X.boundary(K.d).astype(float)  # n_{d-1} x n_d
        y = x @ B.T
        f = coef[0] * y + coef[1] * y ** 3 + coef[2] * y ** 5 + coef[3] * np.sin(w * y)
        G = f @ B
    Pi = K.projector()
    off = G - G @ Pi
    res = np.max(np.abs(off), axis=-1, initial=0.0) / (1.0 + np.max(np.abs(G), axis=-1, initial=0.0))
    worst = float(res.max(initial=0.0))
    ok = bool(worst <= tol)
    return (ok, worst) if return_residual else ok


def classical_graph_check(X: OrientedComplex, K0: AntiColoring) -> bool:
    """Color-degree test for vertex synchrony colorings on a graph.

    Balanced iff any two vertices of the same color have equally many
    neighbors of each other color.
    """
    if K0.d != 0:
        raise DimensionError("classical check applies to vertex colorings")
    if any(s < 0 for _, s in K0.entries):
        raise PreconditionError("classical check needs a synchrony coloring without negative signs")
    if any(i is None for i, _ in K0.entries):
        raise PreconditionError("classical check needs every vertex colored")
    verts = X.simplices(0)
    color = {v[0]: K0.entries[i][0] for i, v in enumerate(verts)}
    counts = {v: [0] * len(K0.colors) for v in color}
    for a, b in (X.simplices(1) if X.d_max >= 1 else ()):
        counts[a][color[b]] += 1
        counts[b][color[a]] += 1
    profile: dict[int, tuple] = {}
    for v, c in color.items():
        prof = tuple(n for k, n in enumerate(counts[v]) if k != c)
        if profile.setdefault(c, prof) != prof:
            return False
    return True


def orbit_coloring(X: OrientedComplex, S: np.ndarray, d: int) -> AntiColoring:
    """Anti-coloring whose space Delta_K is the fixed space {x : S x = x} of a signed permutation."""
    S = np.asarray(S)
    n = S.shape[0]
    image = [int(np.flatnonzero(S[:, j])[0]) for j in range(n)]
    sign = [int(S[image[j], j]) for j in range(n)]
    codes = [None] * n
    k = 0
    for start in range(n):
        if codes[start] is not None:
            continue
        # follow the orbit, recording the sign relating each member to the start
        orbit, rel, s, j = [start], {start: 1}, 1, start
        while True:
            s *= sign[j]
            j = image[j]
            if j == start:
                break
            orbit.append(j)
            rel[j] = s
        if s == -1:  # x_start = -x_start on the fixed space
            for j in orbit:
                codes[j] = 0
        else:
            k += 1
            for j in orbit:
                codes[j] = rel[j] * k
    return AntiColoring.from_codes(d, codes).canonical()
