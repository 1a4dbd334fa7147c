"""Pseudoinverses, the orthogonal triple decomposition of C_d, and reduced Laplacians."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complex import OrientedComplex
from .errors import DimensionError, VerificationError

# a singular value counts as nonzero iff sigma > RANK_RTOL * max(sigma)
RANK_RTOL = 1e-10


def _svd(L: np.ndarray):
    L = np.asarray(L, dtype=float)
    if L.size == 0:
        m, n = L.shape
        return np.zeros((m, 0)), np.zeros(0), np.zeros((0, n)), 0
    U, s, Vt = np.linalg.svd(L, full_matrices=False)
    r = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
    return U, s, Vt, r


def numerical_rank(L) -> int:
    return _svd(L)[3]


def exact_rank(L) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    rows = [[Fraction(int(v)) if float(v).is_integer() else Fraction(v) for v in row]
            for row in np.asarray(L).tolist()]
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, m):
            if rows[i][col] != 0:
                factor = rows[i][col] / p
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def checked_rank(B: np.ndarray) -> int:
    """Numerical rank of an integer matrix, cross-checked against the exact rank."""
    r = numerical_rank(B)
    exact = exact_rank(B)
    if r != exact:
        raise VerificationError(f"SVD rank {r} disagrees with exact rank {exact}")
    return r


@dataclass(frozen=True)
class Pseudoinverse:
    """A matrix together with its Moore-Penrose pseudoinverse."""

    L: np.ndarray
    pinv: np.ndarray
    rank: int

    def penrose_residuals(self) -> dict[str, float]:
        """Max-entry residuals of the four Penrose conditions."""
        L, P = self.L, self.pinv
        LP, PL = L @ P, P @ L

        def mx(a):
            return float(np.max(np.abs(a))) if a.size else 0.0

        return {
            "L P L = L": mx(L @ P @ L - L),
            "P L P = P": mx(P @ L @ P - P),
            "L P symmetric": mx(LP - LP.T),
            "P L symmetric": mx(PL - PL.T),
        }


def pseudoinverse(L) -> Pseudoinverse:
    """Moore-Penrose pseudoinverse via a truncated SVD."""
    L = np.asarray(L, dtype=float)
    U, s, Vt, r = _svd(L)
    pinv = (Vt[:r].T / s[:r]) @ U[:, :r].T if r else np.zeros(L.shape[::-1])
    return Pseudoinverse(L, pinv, r)


def range_basis(A) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``A``."""
    A = np.asarray(A, dtype=float)
    U, _, _, r = _svd(A)
    return U[:, :r]


@dataclass(frozen=True)
class TripleDecomposition:
    """Orthogonal splitting C_d = im(B_d^T) + im(B_{d+1}) + W_d.

    ``P``, ``Q`` and ``R`` are the orthogonal projections onto the three
    summands; ``basis_*`` hold orthonormal column bases for them.
    """

    d: int
    n: int
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    basis_down: np.ndarray
    basis_up: np.ndarray
    basis_harmonic: np.ndarray

    @property
    def r_down(self) -> int:
        return self.basis_down.shape[1]

    @property
    def r_up(self) -> int:
        return self.basis_up.shape[1]

    @property
    def w(self) -> int:
        return self.basis_harmonic.shape[1]

    def report(self, include_matrices: bool = False) -> dict:
        out = {"d": self.d, "n": self.n, "r_down": self.r_down,
               "r_up": self.r_up, "w": self.w,
               "type": [self.r_down, self.r_up, self.n]}
        if include_matrices:
            out.update(P=self.P.tolist(), Q=self.Q.tolist(), R=self.R.tolist())
        return out


def _complement_basis(n: int, *bases: np.ndarray) -> np.ndarray:
    taken = np.hstack([b for b in bases if b.size] or [np.zeros((n, 0))])
    if taken.shape[1] >= n:
        return np.zeros((n, 0))
    if taken.shape[1] == 0:
        return np.eye(n)
    # left singular vectors beyond the rank span the orthogonal complement
    U, s, _ = np.linalg.svd(taken, full_matrices=True)
    r = int(np.sum(s > RANK_RTOL * s[0]))
    return U[:, r:]


def triple_decomposition(X: OrientedComplex, d: int, include_up: bool = True) -> TripleDecomposition:
    """Triple decomposition of C_d(X).

    B_0 and B_{d_max+1} are zero maps.  With ``include_up=False`` the
    up-boundary B_{d+1} is treated as zero as well, so C_d splits as
    im(B_d^T) + ker(B_d); this is the decomposition relevant to a pure
    down-coupled ("top-dimensional") flow.
    """
    if not 0 <= d <= X.d_max:
        raise DimensionError(f"dimension {d} outside 0..{X.d_max}")
    n = X.n(d)
    Bd = X.boundary(d)
    Bup = X.boundary(d + 1) if include_up else np.zeros((n, 0), dtype=np.int64)
    r_down, r_up = checked_rank(Bd), checked_rank(Bup)

    basis_down = range_basis(Bd.T)
    basis_up = range_basis(Bup)
    basis_harm = _complement_basis(n, basis_down, basis_up)
    if basis_down.shape[1] != r_down or basis_up.shape[1] != r_up:
        raise VerificationError("orthonormal basis size disagrees with the rank")
    if r_down + r_up + basis_harm.shape[1] != n:
        raise VerificationError("summand dimensions do not add up to n_d")

    P = basis_down @ basis_down.T
    Q = basis_up @ basis_up.T
    R = np.eye(n) - P - Q
    return TripleDecomposition(d, n, P, Q, R, basis_down, basis_up, basis_harm)


def harmonic_dimension(X: OrientedComplex, d: int) -> int:
    return triple_decomposition(X, d).w


def projection_onto_image(B) -> np.ndarray:
    """Orthogonal projection onto the column space of ``B``."""
    U = range_basis(B)
    return U @ U.T


@dataclass(frozen=True)
class ReducedLaplacian:
    """Restriction of B^T B (up) or B B^T (down) to its image summand.

    ``matrix`` is expressed in the orthonormal ``basis`` of that summand and
    is symmetric positive definite.
    """

    kind: str
    dim: int
    matrix: np.ndarray
    basis: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        if self.matrix.size == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh(self.matrix)


def reduced_laplacian(X: OrientedComplex, D: int, kind: str) -> ReducedLaplacian:
    """Reduced Laplacian of the boundary B_D.

    ``kind="up"``: (B_D^T B_D) on im(B_D^T) inside C_D.
    ``kind="down"``: (B_D B_D^T) on im(B_D) inside C_{D-1}.
    A zero-rank boundary gives a legal 0x0 matrix.
    """
    if kind not in ("up", "down"):
        raise ValueError("kind must be 'up' or 'down'")
    if not 1 <= D <= X.d_max:
        raise DimensionError(f"boundary dimension {D} outside 1..{X.d_max}")
    B = X.boundary(D).astype(float)
    if kind == "up":
        U = range_basis(B.T)
        L = U.T @ (B.T @ B) @ U
    else:
        U = range_basis(B)
        L = U.T @ (B @ B.T) @ U
    L = 0.5 * (L + L.T)
    return ReducedLaplacian(kind, D, L, U)
