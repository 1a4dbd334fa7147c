"""Simplicial vector fields: assembly, canonical representatives, realization.

The phase space is C_d(X).  A field is

    d theta/dt = G0(theta) + B_d^T f_down(B_d theta) + B_{d+1} f_up(B_{d+1}^T theta)

with G0 componentwise, f_down acting on C_{d-1} and f_up on C_{d+1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .complex import OrientedComplex
from .couplings import CouplingFunction, finite_difference_jacobian
from .errors import DimensionError, PreconditionError, VerificationError
from .fields import TargetField, Zero
from .hodge import (RANK_RTOL, TripleDecomposition, projection_onto_image,
                    pseudoinverse, triple_decomposition)

DEFAULT_SEED = 20240501


@dataclass(frozen=True)
class VectorFieldSpec:
    """Declarative description of a field on C_d."""

    d: int
    internal: CouplingFunction | None = None
    down: CouplingFunction | None = None
    up: CouplingFunction | None = None

    def check_arities(self, X: OrientedComplex):
        for name, f, dim in (("internal", self.internal, self.d),
                             ("down", self.down, self.d - 1),
                             ("up", self.up, self.d + 1)):
            if f is not None and f.arity != X.n(dim):
                raise DimensionError(
                    f"{name} coupling has arity {f.arity}, but C_{dim} has dimension {X.n(dim)}")
        if self.internal is not None and self.internal.kind != "componentwise":
            raise PreconditionError("internal term must be componentwise")


@dataclass
class AssembledField:
    """Callable right-hand side on C_d, vectorized over leading axes."""

    spec: VectorFieldSpec
    B_down: np.ndarray
    B_up: np.ndarray
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        self._Bd_T = np.ascontiguousarray(self.B_down.T)
        self._dim = self.B_down.shape[1]

    @property
    def dim(self) -> int:
        return self.B_down.shape[1]

    def down_part(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.spec.down is None or self.B_down.shape[0] == 0:
            return np.zeros_like(theta)
        return self.spec.down(theta @ self._Bd_T) @ self.B_down

    def up_part(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.spec.up is None or self.B_up.shape[1] == 0:
            return np.zeros_like(theta)
        return self.spec.up(theta @ self.B_up) @ self.B_up.T

    def coupling_part(self, theta):
        return self.down_part(theta) + self.up_part(theta)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape[-1] != self._dim:
            raise DimensionError(f"state has length {theta.shape[-1]}, field acts on C_{self.spec.d} of dimension {self.dim}")
        out = self.coupling_part(theta)
        if self.spec.internal is not None:
            out = out + self.spec.internal(theta)
        return out

    def jacobian(self, theta, step: float = 1e-6) -> np.ndarray:
        return finite_difference_jacobian(self, theta, step)


def assemble(X: OrientedComplex, spec: VectorFieldSpec) -> AssembledField:
    if not 0 <= spec.d <= X.d_max:
        raise DimensionError(f"dimension {spec.d} outside 0..{X.d_max}")
    spec.check_arities(X)
    Bd = X.boundary(spec.d).astype(float)
    Bu = X.boundary(spec.d + 1).astype(float)
    return AssembledField(spec, Bd, Bu)


def _projector(X: OrientedComplex, d: int, direction: str) -> np.ndarray:
    """P_{d+1} (up) or Q_{d-1} (down) for the phase space C_d."""
    if direction == "up":
        return projection_onto_image(X.boundary(d + 1).T.astype(float))
    if direction == "down":
        return projection_onto_image(X.boundary(d).astype(float))
    raise ValueError("direction must be 'up' or 'down'")


def canonical_representative(X: OrientedComplex, f: CouplingFunction, direction: str,
                             d: int) -> CouplingFunction:
    """P f P (up, on C_{d+1}) or Q f Q (down, on C_{d-1}) for phase space C_d."""
    Pm = _projector(X, d, direction)
    if Pm.shape[0] != f.arity:
        raise DimensionError(f"coupling arity {f.arity} does not match C_{d + 1 if direction == 'up' else d - 1}")

    def rep(y, _f=f, _P=Pm):
        y = np.asarray(y, dtype=float)
        return _f(y @ _P) @ _P

    return CouplingFunction.general(rep, f.arity, odd=f.odd, label=f"canonical[{direction}]")


def _sample_points(n: int, seed: int, n_random: int = 20, grid: tuple = (-1.0, 0.0, 1.0)):
    rng = np.random.default_rng(seed)
    pts = [np.zeros(n)]
    for i in range(n):
        for g in grid:
            if g:
                e = np.zeros(n)
                e[i] = g
                pts.append(e)
    pts.extend(rng.uniform(-2.0, 2.0, size=(n_random, n)))
    return np.array(pts).reshape(-1, n)


def _equivalent(Pm, f, g, seed, tol):
    pts = _sample_points(Pm.shape[0], seed)
    a = f(pts @ Pm) @ Pm
    b = g(pts @ Pm) @ Pm
    return bool(np.all(np.abs(a - b) <= tol * (1.0 + np.abs(a) + np.abs(b))))


def equivalent_up(X: OrientedComplex, f: CouplingFunction, g: CouplingFunction, d: int,
                  seed: int = DEFAULT_SEED, tol: float = 1e-10) -> bool:
    """Numerical test of P_d f P_d == P_d g P_d for maps on C_d.

    Functional equality is checked on a fixed grid plus seeded random points,
    so a ``True`` result is evidence, not a proof.
    """
    Pm = projection_onto_image(X.boundary(d).T.astype(float))
    return _equivalent(Pm, f, g, seed, tol)


def equivalent_down(X: OrientedComplex, f: CouplingFunction, g: CouplingFunction, d: int,
                    seed: int = DEFAULT_SEED, tol: float = 1e-10) -> bool:
    """Numerical test of Q_d f Q_d == Q_d g Q_d for maps on C_d."""
    Pm = projection_onto_image(X.boundary(d + 1).astype(float))
    return _equivalent(Pm, f, g, seed, tol)


def classify(X: OrientedComplex, d: int, include_up: bool = True) -> tuple[int, int, int]:
    """Conjugacy type (r_d, r_{d+1}, n_d) of coupled flows on C_d."""
    td = triple_decomposition(X, d, include_up=include_up)
    return td.r_down, td.r_up, td.n


def default_basis(X: OrientedComplex, d: int, include_up: bool = True) -> np.ndarray:
    """Columns: independent rows of B_d, independent columns of B_{d+1}, orthonormal W_d.

    Rows and columns are picked greedily in stored order, keeping each one
    that raises the rank.
    """
    td = triple_decomposition(X, d, include_up=include_up)
    Bd = X.boundary(d).astype(float)
    Bu = X.boundary(d + 1).astype(float) if include_up else np.zeros((td.n, 0))

    def greedy(vectors, r):
        chosen = []
        for v in vectors:
            trial = np.column_stack(chosen + [v])
            if np.linalg.matrix_rank(trial, tol=RANK_RTOL * max(1.0, np.abs(trial).max()) * 10) == len(chosen) + 1:
                chosen.append(v)
            if len(chosen) == r:
                break
        return chosen

    cols = greedy(list(Bd), td.r_down) + greedy(list(Bu.T), td.r_up)
    cols += list(td.basis_harmonic.T)
    return np.column_stack(cols) if cols else np.zeros((td.n, 0))


@dataclass
class Realization:
    """Result of realizing H_down + H_up + 0 as a simplicial flow.

    ``M`` maps C_d to R^{r_d} + R^{r_{d+1}} + R^w block-diagonally, and the
    assembled field G satisfies M G(theta) = H(M theta).
    """

    complex: OrientedComplex
    d: int
    spec: VectorFieldSpec
    field: AssembledField
    M: np.ndarray
    M_inv: np.ndarray
    H_down: TargetField
    H_up: TargetField
    decomposition: TripleDecomposition
    include_up: bool = True

    @property
    def type(self) -> tuple[int, int, int]:
        td = self.decomposition
        return td.r_down, td.r_up, td.n

    def H(self, y):
        y = np.asarray(y, dtype=float)
        r1, r2 = self.decomposition.r_down, self.decomposition.r_up
        parts = [self.H_down(y[..., :r1]), self.H_up(y[..., r1:r1 + r2]),
                 np.zeros(y.shape[:-1] + (self.decomposition.w,))]
        return np.concatenate(parts, axis=-1)

    def conjugacy_residual(self, theta) -> np.ndarray:
        """Per-point ||M G(theta) - H(M theta)||_inf / (1 + ||H(M theta)||_inf)."""
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        lhs = self.field(theta) @ self.M.T
        rhs = self.H(theta @ self.M.T)
        num = np.max(np.abs(lhs - rhs), axis=-1)
        return num / (1.0 + np.max(np.abs(rhs), axis=-1))


def _check_block_basis(td: TripleDecomposition, M_inv: np.ndarray, tol: float = 1e-9):
    n = td.n
    if M_inv.shape != (n, n):
        raise DimensionError(f"M_inv must be {n}x{n}, got {M_inv.shape}")
    if abs(np.linalg.det(M_inv)) < 1e-12 * max(1.0, np.abs(M_inv).max()) ** n:
        raise PreconditionError("M_inv is singular")
    r1, r2 = td.r_down, td.r_up
    blocks = ((td.P, slice(0, r1), "im(B_d^T)"), (td.Q, slice(r1, r1 + r2), "im(B_{d+1})"),
              (td.R, slice(r1 + r2, n), "W_d"))
    for proj, sl, name in blocks:
        cols = M_inv[:, sl]
        if cols.size and np.max(np.abs(proj @ cols - cols)) > tol * max(1.0, np.abs(cols).max()):
            raise PreconditionError(
                f"columns {sl.start}..{sl.stop - 1} of M_inv do not lie in {name}; "
                "M_inv must send the standard basis onto bases of the three summands in order")


def realize(X: OrientedComplex, d: int, H_down: TargetField | Callable | None,
            H_up: TargetField | Callable | None, M_inv=None,
            include_up: bool = True) -> Realization:
    """Choose f_down and f_up so that the coupled flow on C_d is conjugate to H.

    ``H_down`` acts on R^{r_d} and ``H_up`` on R^{r_{d+1}}; the harmonic
    summand W_d carries the zero field.  ``M_inv`` may be supplied to fix the
    conjugacy; its columns must be bases of im(B_d^T), im(B_{d+1}) and W_d in
    that order.
    """
    td = triple_decomposition(X, d, include_up=include_up)
    r1, r2, n = td.r_down, td.r_up, td.n
    H_down = _as_field(H_down, r1, "H_down")
    H_up = _as_field(H_up, r2, "H_up")

    M_inv = default_basis(X, d, include_up) if M_inv is None else np.asarray(M_inv, dtype=float)
    _check_block_basis(td, M_inv)
    M = np.linalg.inv(M_inv)
    M1, M2 = M[:r1], M[r1:r1 + r2]
    Mi1, Mi2 = M_inv[:, :r1], M_inv[:, r1:r1 + r2]

    Bd = X.boundary(d).astype(float)
    Bu = X.boundary(d + 1).astype(float) if include_up else np.zeros((n, 0))

    # a zero target needs no coupling at all
    down = up = None
    if r1 and not isinstance(H_down, Zero):
        # f_down(y) = (B_d^T)^+ G1((B_d^T)^{+T} y) with G1(x) = Mi1 H_down(M1 x)
        A = pseudoinverse(Bd).pinv  # n_d x n_{d-1}; (B_d^T)^+ = A^T
        inner, outer = A.T @ M1.T, Mi1.T @ A

        def f_down(y, _H=H_down, _in=inner, _out=outer):
            return _H(np.asarray(y) @ _in) @ _out

        down = CouplingFunction.general(f_down, X.n(d - 1), label=f"realized[{H_down.name}]")
    if r2 and not isinstance(H_up, Zero):
        # f_up(y) = B_{d+1}^+ G2(B_{d+1}^{+T} y) with G2(x) = Mi2 H_up(M2 x)
        Bp = pseudoinverse(Bu).pinv  # n_{d+1} x n_d
        inner, outer = Bp @ M2.T, Mi2.T @ Bp.T

        def f_up(y, _H=H_up, _in=inner, _out=outer):
            return _H(np.asarray(y) @ _in) @ _out

        up = CouplingFunction.general(f_up, X.n(d + 1), label=f"realized[{H_up.name}]")

    spec = VectorFieldSpec(d, down=down, up=up if include_up else None)
    fld = AssembledField(spec, Bd, Bu)
    fld.source = {"kind": "realized", "down": H_down.to_dict(), "up": H_up.to_dict(),
                  "include_up": include_up}
    return Realization(X, d, spec, fld, M, M_inv, H_down, H_up, td, include_up)


class _CallableField(TargetField):
    def __init__(self, fn, dim, name="callable"):
        super().__init__(name, dim, {})
        object.__setattr__(self, "fn", fn)

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def jacobian(self, x):
        return finite_difference_jacobian(self, x)

    def to_dict(self):
        return {"name": self.name, "dim": self.dim, "serializable": False}


def _as_field(H, dim: int, name: str) -> TargetField:
    if H is None:
        return Zero(dim)
    if isinstance(H, TargetField):
        if H.dim != dim:
            raise DimensionError(
                f"{name} has dimension {H.dim}, but the decomposition requires {dim}")
        return H
    if callable(H):
        return _CallableField(H, dim)
    raise TypeError(f"{name} must be a TargetField, a callable or None")


def is_exact(X: OrientedComplex, spec: VectorFieldSpec, n_points: int = 10,
             seed: int = DEFAULT_SEED, step: float = 1e-6, tol: float = 1e-6) -> bool:
    """Finite-difference test of whether the coupling part is a gradient field.

    Checks symmetry of the Jacobians of P f_up P and Q f_down Q at seeded
    sample points.  Internal terms are scalar potentials and are ignored.
    """
    rng = np.random.default_rng(seed)
    for direction, f in (("up", spec.up), ("down", spec.down)):
        if f is None:
            continue
        rep = canonical_representative(X, f, direction, spec.d)
        for y in rng.uniform(-1.5, 1.5, size=(n_points, f.arity)):
            J = finite_difference_jacobian(rep, y, step)
            if np.max(np.abs(J - J.T), initial=0.0) > tol * max(1.0, np.abs(J).max(initial=0.0)):
                return False
    return True


def verify_laplacian_conjugacy(X: OrientedComplex, f_up: CouplingFunction, d: int,
                               points) -> float:
    """Max residual of B^T (B f B^T)(theta) = (B^T B f)(B^T theta) and of
    (B f B^T)(B y) = B (P f (B^T B y)) over the given points, with B = B_{d+1}."""
    B = X.boundary(d + 1).astype(float)
    P = projection_onto_image(B.T)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    res = 0.0
    for theta in pts:
        lhs = B.T @ (B @ f_up(B.T @ theta))
        rhs = (B.T @ B) @ f_up(B.T @ theta)
        res = max(res, float(np.max(np.abs(lhs - rhs), initial=0.0)))
        y = B.T @ theta  # a point of im(B^T)
        lhs2 = B @ f_up(B.T @ (B @ y))
        rhs2 = B @ (P @ f_up(B.T @ B @ y))
        res = max(res, float(np.max(np.abs(lhs2 - rhs2), initial=0.0)))
    if not np.isfinite(res):
        raise VerificationError("non-finite residual")
    return res
