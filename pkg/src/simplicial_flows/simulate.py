"""Fixed-step integration, fixed points and inertia of linearizations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .couplings import finite_difference_jacobian
from .dynamics import DEFAULT_SEED
from .errors import DimensionError, PreconditionError, VerificationError
from .hodge import ReducedLaplacian

DEFAULT_H = 1e-3
ZERO_EIG_TOL = 1e-9


@dataclass
class Trajectory:
    """States on the uniform grid t_k = k h, one row per time point.

    If integration hit a non-finite state, ``error`` describes it and the
    arrays stop at the last finite state.
    """

    t: np.ndarray
    states: np.ndarray
    h: float
    T: float
    metadata: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def transformed(self, M: np.ndarray) -> "Trajectory":
        """Same time grid with every state mapped through M."""
        meta = dict(self.metadata, transformed=True)
        return Trajectory(self.t, self.states @ np.asarray(M).T, self.h, self.T, meta, self.error)


def n_steps(h: float, T: float) -> int:
    # tolerate T/h landing a hair below an integer
    return int(np.floor(T / h + 1e-9))


def integrate(fn: Callable, x0, h: float = DEFAULT_H, T: float = 1.0,
              metadata: dict | None = None) -> Trajectory:
    """Classical fixed-step RK4 for dx/dt = fn(x)."""
    if not h > 0 or not T > 0:
        raise PreconditionError("h and T must be positive")
    x = np.array(x0, dtype=float)
    dim = getattr(fn, "dim", None)
    if x.ndim != 1 or (dim is not None and x.size != dim):
        raise DimensionError(f"initial state has shape {x.shape}, expected ({dim},)")
    N = n_steps(h, T)
    out = np.empty((N + 1, x.size))
    out[0] = x
    err = None
    last = N
    h2, h6 = h / 2.0, h / 6.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(N):
            k1 = fn(x)
            k2 = fn(x + h2 * k1)
            k3 = fn(x + h2 * k2)
            k4 = fn(x + h * k3)
            x = x + h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                err = f"non-finite state at t={(k + 1) * h:.12g}; last valid time {k * h:.12g}"
                last = k
                break
            out[k + 1] = x
    meta = dict(metadata or {}, integrator="rk4", h=h, T=T, steps=N)
    return Trajectory(np.arange(last + 1) * h, out[:last + 1], h, T, meta, err)


def inertia(A, zero_tol: float = ZERO_EIG_TOL) -> tuple[int, int, int]:
    """(n_plus, n_zero, n_minus) of the eigenvalues of A.

    Eigenvalues with |lambda| <= zero_tol count as zero.  A need not be
    symmetric but its spectrum must be real (as for L A with L SPD, A symmetric).
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0, 0, 0
    lam = np.linalg.eigvalsh(A) if np.allclose(A, A.T, rtol=0, atol=1e-14) else np.linalg.eigvals(A)
    if np.iscomplexobj(lam):
        if np.max(np.abs(lam.imag)) > 1e-8 * max(1.0, np.max(np.abs(lam))):
            raise VerificationError("spectrum is not real")
        lam = lam.real
    return int(np.sum(lam > zero_tol)), int(np.sum(np.abs(lam) <= zero_tol)), int(np.sum(lam < -zero_tol))


@dataclass(frozen=True)
class InertiaReport:
    x_star: np.ndarray
    inertia_Dh: tuple[int, int, int]
    inertia_LDh: tuple[int, int, int]

    @property
    def match(self) -> bool:
        return self.inertia_Dh == self.inertia_LDh


def fixed_point_inertia(h_field: Callable, L, x_star, jacobian: Callable | None = None,
                        fp_tol: float = 1e-8, sym_tol: float = 1e-6) -> InertiaReport:
    """Inertia of Dh(x*) and of L Dh(x*) at a fixed point x* of a gradient-type field h.

    ``L`` is an SPD matrix or a ReducedLaplacian.  A mismatch in the two
    sign counts contradicts Sylvester's law and raises VerificationError.
    """
    Lm = L.matrix if isinstance(L, ReducedLaplacian) else np.atleast_2d(np.asarray(L, dtype=float))
    x = np.atleast_1d(np.asarray(x_star, dtype=float))
    r = np.asarray(h_field(x), dtype=float)
    if np.max(np.abs(r), initial=0.0) > fp_tol:
        raise PreconditionError(f"x* is not a fixed point: |h(x*)| = {np.max(np.abs(r)):.3g}")
    J = np.atleast_2d(jacobian(x) if jacobian is not None else finite_difference_jacobian(h_field, x))
    if np.max(np.abs(J - J.T), initial=0.0) > sym_tol * max(1.0, np.abs(J).max(initial=0.0)):
        raise PreconditionError("Dh(x*) is not symmetric")
    if Lm.shape != J.shape:
        raise DimensionError(f"L has shape {Lm.shape}, Dh has shape {J.shape}")
    rep = InertiaReport(x, inertia(0.5 * (J + J.T)), inertia(Lm @ J))
    if not rep.match:
        raise VerificationError(f"inertia of Dh {rep.inertia_Dh} differs from that of L Dh {rep.inertia_LDh}")
    return rep


def newton(fn: Callable, x0, jacobian: Callable | None = None, tol: float = 1e-12,
           max_iter: int = 100) -> np.ndarray | None:
    """Damped Newton iteration for fn(x) = 0; None if it does not converge."""
    x = np.array(x0, dtype=float)
    jac = jacobian or (lambda z: finite_difference_jacobian(fn, z))
    r = np.asarray(fn(x), dtype=float)
    for _ in range(max_iter):
        nr = np.max(np.abs(r), initial=0.0)
        if nr <= tol:
            return x
        step = np.linalg.lstsq(np.atleast_2d(jac(x)), -r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            xn = x + lam * step
            rn = np.asarray(fn(xn), dtype=float)
            if np.all(np.isfinite(rn)) and np.max(np.abs(rn), initial=0.0) < nr:
                break
            lam /= 2.0
        else:
            return None
        x, r = xn, rn
    return x if np.max(np.abs(r), initial=0.0) <= tol * 1e3 else None


def find_fixed_points(fn: Callable, dim: int, jacobian: Callable | None = None,
                      radius: float = 2.0, n_seeds: int = 200, seed: int = DEFAULT_SEED,
                      dedupe: float = 1e-6, tol: float = 1e-12) -> np.ndarray:
    """Zeros of fn found by damped Newton from seeded random starts, deduplicated."""
    rng = np.random.default_rng(seed)
    starts = np.vstack([np.zeros(dim), rng.uniform(-radius, radius, size=(n_seeds, dim))])
    found: list[np.ndarray] = []
    for s in starts:
        x = newton(fn, s, jacobian, tol=tol)
        if x is None:
            continue
        if all(np.max(np.abs(x - y)) > dedupe for y in found):
            found.append(x)
    found.sort(key=tuple)
    return np.array(found).reshape(-1, dim)


def dominance_segments(Y, ratio: float = 5.0, t=None):
    """Maximal runs where one coordinate's |value| exceeds ``ratio`` times all others.

    Returns a list of (coordinate index, start time, dwell time).  The last
    run is dropped, since it is cut off by the end of the data.
    """
    Y = np.abs(np.asarray(Y, dtype=float))
    t = np.arange(len(Y)) if t is None else np.asarray(t)
    top = np.argmax(Y, axis=1)
    srt = np.sort(Y, axis=1)
    dom = np.where(srt[:, -1] > ratio * srt[:, -2], top, -1)
    segs = []
    start = None
    for k in range(len(dom)):
        if start is None:
            if dom[k] >= 0:
                start = k
        elif dom[k] != dom[start]:
            segs.append((int(dom[start]), float(t[start]), float(t[k] - t[start])))
            start = k if dom[k] >= 0 else None
    return segs


def late_window_amplitudes(x, n_windows: int = 4) -> np.ndarray:
    """Peak-to-peak amplitude of x in consecutive equal windows of the second half."""
    x = np.asarray(x, dtype=float)
    tail = x[len(x) // 2:]
    return np.array([np.ptp(w) for w in np.array_split(tail, n_windows)])
