"""Showcase realizations: a heteroclinic cycle on the tetrahedron and Lorenz + Sel'kov on two triangles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .dynamics import DEFAULT_SEED, Realization, realize
from .fields import GuckenheimerHolmes, Lorenz, Selkov
from .simulate import Trajectory, dominance_segments, integrate, late_window_amplitudes

# a Sel'kov "cycle" must have at least this peak-to-peak amplitude in every late window
MIN_CYCLE_AMPLITUDE = 1e-3
AMPLITUDE_RTOL = 0.02


@dataclass
class ScenarioResult:
    realization: Realization
    raw: Trajectory
    transformed: Trajectory
    summary: dict = field(default_factory=dict)

    def residuals(self, stride: int = 1) -> np.ndarray:
        """Conjugacy residual at every ``stride``-th point of the raw trajectory."""
        return self.realization.conjugacy_residual(self.raw.states[::stride])


def gh_dwell_analysis(Y: np.ndarray, t: np.ndarray, ratio: float = 5.0, transient: int = 3) -> dict:
    """Dwell times near the three axes, and whether they strictly increase after ``transient`` runs."""
    segs = dominance_segments(Y[:, :3], ratio, t)
    dwell = [s[2] for s in segs]
    late = dwell[transient:]
    axes = [s[0] for s in segs]
    return {
        "segments": len(segs),
        "dwell_times": dwell,
        "axes": axes,
        "dwell_increasing": len(late) >= 3 and all(b > a for a, b in zip(late, late[1:])),
        "axes_rotate": len(axes) >= 3 and all(b != a for a, b in zip(axes, axes[1:])),
    }


def scenario_guckenheimer_holmes(mu: float = 1.0, a: float = 1.0, b: float = 0.55, c: float = 1.5,
                                 h: float = 0.01, T: float = 1000.0, seed: int = DEFAULT_SEED,
                                 perturbation: float = 0.05, y0=None) -> ScenarioResult:
    """GH + (zero field) realized on the triangle space of the tetrahedron.

    Integrates from (1/2, 1/2, 1/2, 1/3) plus a seeded perturbation of the
    first three coordinates, mapped back through M^{-1}.  The default run
    length stops before round-off in the raw coordinates limits how closely
    the orbit approaches the equilibria, so the dwell times keep growing.
    """
    if min(mu, a, b, c) <= 0:
        raise ValueError("GH parameters must be positive")
    X = catalog.tetrahedron()
    R = realize(X, 2, GuckenheimerHolmes(mu, a, b, c), None, M_inv=catalog.GH_M_INV)
    if y0 is None:
        rng = np.random.default_rng(seed)
        y0 = np.array([0.5, 0.5, 0.5, 1.0 / 3.0])
        y0[:3] += rng.uniform(-perturbation, perturbation, 3)
    y0 = np.asarray(y0, dtype=float)
    meta = {"scenario": "guckenheimer_holmes", "params": {"mu": mu, "a": a, "b": b, "c": c},
            "seed": seed, "y0": y0.tolist()}
    raw = integrate(R.field, R.M_inv @ y0, h, T, meta)
    tr = raw.transformed(R.M)
    summary = {"type": list(R.type), "w_drift": float(np.max(np.abs(tr.states[:, 3] - y0[3])))}
    summary.update(gh_dwell_analysis(tr.states, tr.t))
    return ScenarioResult(R, raw, tr, summary)


def _zmax(z: np.ndarray) -> np.ndarray:
    i = np.flatnonzero((z[1:-1] > z[:-2]) & (z[1:-1] >= z[2:])) + 1
    return z[i]


def lorenz_selkov_analysis(raw: np.ndarray, Y: np.ndarray, n_windows: int = 4) -> dict:
    """Separation diagnostics for a run of the 5-dimensional Lorenz + Sel'kov realization."""
    half = len(Y) // 2
    zmax = _zmax(Y[half:, 2])
    amp = np.array([late_window_amplitudes(Y[:, k], n_windows) for k in (3, 4)])
    spread = float(np.max(amp.max(axis=1) / np.maximum(amp.min(axis=1), 1e-300) - 1.0))
    cycling = bool(np.all(amp >= MIN_CYCLE_AMPLITUDE) and spread <= AMPLITUDE_RTOL)
    # correlation of every raw coordinate with the Lorenz block
    C = np.corrcoef(np.hstack([raw[half:], Y[half:, :3]]).T)
    mix = np.abs(C[:5, 5:]).max(axis=1)
    return {
        "lorenz_zmax_count": int(zmax.size),
        "lorenz_zmax_range": [float(zmax.min()), float(zmax.max())] if zmax.size else None,
        "lorenz_final_norm": float(np.linalg.norm(Y[-1, :3])),
        "selkov_window_amplitudes": amp.tolist(),
        "selkov_amplitude_spread": spread,
        "selkov_cycling": cycling,
        "selkov_final": Y[-1, 3:].tolist(),
        "raw_lorenz_correlation": mix.tolist(),
    }


def scenario_lorenz_selkov(sigma: float = 10.0, beta: float = 8.0 / 3.0, rho: float = 28.0,
                           a: float = 0.1, b: float = 1.5, scale: float = 400.0,
                           h: float = 1e-3, T: float = 100.0, seed: int = DEFAULT_SEED,
                           y0=None) -> ScenarioResult:
    """Lorenz (down part) + Sel'kov (up part) realized on the edge space of two glued triangles.

    The start is (1, 1, 1) for Lorenz and (1, 10) for Sel'kov, each with a
    seeded perturbation, mapped back through M^{-1}.
    """
    X = catalog.diamond()
    H1, H2 = Lorenz(sigma, beta, rho), Selkov(a, b, scale)
    R = realize(X, 1, H1, H2, M_inv=catalog.LORENZ_SELKOV_M_INV)
    if y0 is None:
        rng = np.random.default_rng(seed)
        y0 = np.array([1.0, 1.0, 1.0, 1.0, 10.0]) + rng.uniform(-0.5, 0.5, 5)
    y0 = np.asarray(y0, dtype=float)
    meta = {"scenario": "lorenz_selkov",
            "params": {"sigma": sigma, "beta": beta, "rho": rho, "a": a, "b": b, "scale": scale},
            "seed": seed, "y0": y0.tolist()}
    raw = integrate(R.field, R.M_inv @ y0, h, T, meta)
    tr = raw.transformed(R.M)
    summary = {"type": list(R.type), "selkov_equilibrium": H2.equilibrium().tolist()}
    summary.update(lorenz_selkov_analysis(raw.states, tr.states))
    return ScenarioResult(R, raw, tr, summary)
