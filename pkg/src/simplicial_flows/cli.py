"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 a numerical check failed, 4 size guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .coloring import (AntiColoring, canonical_colorings, enumerate_balanced, invariance_oracle,
                       is_balanced)
from .complex import OrientedComplex
from .dynamics import DEFAULT_SEED, realize
from .errors import (ComplexError, DimensionError, GuardExceeded, PreconditionError,
                     SimplicialError, VerificationError)
from .fields import make_field
from .hodge import pseudoinverse, triple_decomposition
from .io import (InputError, dumps, load_complex, load_json, load_partition, load_spec,
                 read_matrix_csv, sha256_file, spec_from_dict, spec_to_dict, write_csv,
                 write_json, write_matrix_csv)
from .simulate import integrate
from .symmetry import find_symmetries, verify_symmetry

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_GUARD = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    out: Path | None = None
    seed: int = DEFAULT_SEED
    tol: float = 1e-8
    h: float = 1e-3
    T: float = 10.0

    def __post_init__(self):
        if self.out is not None:
            self.out = Path(self.out)
            self.out.mkdir(parents=True, exist_ok=True)

    def header(self) -> dict:
        return {"tool": "simplicial-flows", "version": __version__, "command": self.command,
                "inputs": self.inputs, "seed": self.seed}


def _emit(cfg: RunConfig, report: dict, name: str = "report.json"):
    report = {**cfg.header(), **report}
    sys.stdout.write(dumps(report))
    if cfg.out is not None:
        write_json(cfg.out / name, report)


def _complex(cfg: RunConfig, source) -> OrientedComplex:
    X, digest = load_complex(source)
    cfg.inputs["complex"] = {"source": str(source), "sha256": digest}
    return X


def cmd_decompose(args, cfg: RunConfig) -> int:
    X = _complex(cfg, args.complex)
    d = args.dim
    td = triple_decomposition(X, d, include_up=not args.top)
    rep = td.report(include_matrices=args.matrices)
    rep["ranks"] = {"r_down": td.r_down, "r_up": td.r_up, "w": td.w}
    rep["conjugacy_type"] = "(%d, %d, %d)" % (td.r_down, td.r_up, td.n)
    if args.matrices:
        rep["B_d"] = X.boundary(d).tolist()
        rep["B_d_plus_1"] = X.boundary(d + 1).tolist()
    _emit(cfg, rep)
    return EXIT_OK


def _field_arg(name, params, dim):
    if name is None:
        return None
    return make_field(name, json.loads(params) if params else None, dim if name == "zero" else None)


def cmd_realize(args, cfg: RunConfig) -> int:
    X = _complex(cfg, args.complex)
    include_up = not args.top
    td = triple_decomposition(X, args.dim, include_up=include_up)
    try:
        H1 = _field_arg(args.down, args.down_params, td.r_down)
        H2 = _field_arg(args.up, args.up_params, td.r_up)
    except json.JSONDecodeError as e:
        raise InputError(f"field parameters are not valid JSON: {e}") from None
    M_inv = None
    if args.m_inv:
        M_inv = read_matrix_csv(args.m_inv)
        cfg.inputs["m_inv"] = {"source": args.m_inv, "sha256": sha256_file(args.m_inv)}
    try:
        R = realize(X, args.dim, H1, H2, M_inv=M_inv, include_up=include_up)
    except DimensionError as e:
        raise DimensionError(f"{e}; this complex has type (r_d, r_d+1, n_d) = "
                             f"({td.r_down}, {td.r_up}, {td.n}) at d={args.dim}") from None
    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(-2.0, 2.0, size=(25, td.n))
    res = float(R.conjugacy_residual(pts).max())
    ok = res <= cfg.tol
    rep = {"type": list(R.type), "conjugacy_residual": res, "tolerance": cfg.tol, "passed": ok}
    if cfg.out is not None:
        write_json(cfg.out / "spec.json", spec_to_dict(X, realization=R))
        write_matrix_csv(cfg.out / "M.csv", R.M)
        write_matrix_csv(cfg.out / "M_inv.csv", R.M_inv)
        rep["files"] = ["spec.json", "M.csv", "M_inv.csv"]
    _emit(cfg, rep)
    return EXIT_OK if ok else EXIT_VERIFY


def _vector(text: str | None, n: int, what: str) -> np.ndarray | None:
    if text is None:
        return None
    try:
        v = np.array([float(s) for s in text.split(",")])
    except ValueError:
        raise InputError(f"{what} must be comma-separated numbers") from None
    if v.size != n:
        raise DimensionError(f"{what} has {v.size} entries, the phase space has dimension {n}")
    return v


def cmd_simulate(args, cfg: RunConfig) -> int:
    X, G, R = load_spec(args.spec)
    cfg.inputs["spec"] = {"source": args.spec, "sha256": sha256_file(args.spec)}
    n = G.dim
    x0 = _vector(args.x0, n, "--x0")
    y0 = _vector(args.y0, n, "--y0")
    if y0 is not None:
        if R is None:
            raise InputError("--y0 needs a realized spec (it is given in transformed coordinates)")
        x0 = R.M_inv @ y0
    if x0 is None:
        x0 = np.random.default_rng(cfg.seed).uniform(-1.0, 1.0, n)
    traj = integrate(G, x0, cfg.h, cfg.T, {"spec_sha256": cfg.inputs["spec"]["sha256"]})
    rep = {"rows": len(traj.t), "h": cfg.h, "T": cfg.T, "x0": x0.tolist(),
           "final": traj.final.tolist(), "error": traj.error}
    if cfg.out is not None:
        header = ["t"] + [f"x_{i + 1}" for i in range(n)]
        write_csv(cfg.out / "trajectory.csv", header, np.column_stack([traj.t, traj.states]))
        rep["files"] = ["trajectory.csv"]
        if args.transform:
            if R is None:
                raise InputError("--transform needs a realized spec")
            Y = traj.transformed(R.M).states
            header = ["t"] + [f"y_{i + 1}" for i in range(n)]
            write_csv(cfg.out / "transformed.csv", header, np.column_stack([traj.t, Y]))
            rep["files"].append("transformed.csv")
    if R is not None:
        rep["max_conjugacy_residual"] = float(R.conjugacy_residual(traj.states).max())
    _emit(cfg, rep, "metadata.json")
    if traj.error:
        sys.stderr.write(f"integration aborted: {traj.error}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_symmetries(args, cfg: RunConfig) -> int:
    X = _complex(cfg, args.complex)
    group = find_symmetries(X)
    rep = {"order": len(group), "group": [g.to_json() for g in group]}
    code = EXIT_OK
    if args.spec:
        data = load_json(args.spec)
        cfg.inputs["spec"] = {"source": args.spec, "sha256": sha256_file(args.spec)}
        data = {**data, "complex": X.to_dict()} if "complex" not in data else data
        Xs, G, _ = spec_from_dict(data)
        if Xs.simplices_by_dim != X.simplices_by_dim:
            raise InputError("the spec's complex differs from --complex")
        checks = []
        for g in group:
            r = verify_symmetry(X, g, G.spec, seed=cfg.seed)
            checks.append({"sigma": g.to_json(), "commutes": r.ok, "residual": r.residual})
            if not r.ok:
                code = EXIT_VERIFY
        rep["commutation"] = checks
    _emit(cfg, rep)
    return code


def cmd_colorings(args, cfg: RunConfig) -> int:
    X = _complex(cfg, args.complex)
    partition = None
    if args.partition:
        partition = load_partition(args.partition)
        cfg.inputs["partition"] = {"source": args.partition, "sha256": sha256_file(args.partition)}
    d, direction = args.dim, args.direction
    found = enumerate_balanced(X, d, partition, direction, max_simplices=args.max_simplices,
                               max_colors=args.max_colors)
    balanced = {K.codes() for K in found}
    rep = {"d": d, "direction": direction, "count": len(found),
           "balanced": [{"coloring": K.to_dict(X), "space": K.space_description()} for K in found]}
    misses = []
    for codes in canonical_colorings(X.n(d), args.max_colors):
        if codes in balanced:
            continue
        K = AntiColoring.from_codes(d, codes)
        res = is_balanced(X, K, partition, direction)
        misses.append({"coloring": K.to_dict(X), "space": K.space_description(), "witness": res.witness})
    rep["not_balanced"] = misses[:args.max_witnesses]
    rep["not_balanced_total"] = len(misses)
    code = EXIT_OK
    if args.oracle:
        disagree = []
        for codes in canonical_colorings(X.n(d), args.max_colors):
            K = AntiColoring.from_codes(d, codes)
            if (codes in balanced) != invariance_oracle(X, K, partition, direction, seed=cfg.seed):
                disagree.append(K.to_dict(X))
        rep["oracle_disagreements"] = disagree
        if disagree:
            code = EXIT_VERIFY
    _emit(cfg, rep)
    return code


def _verify_all(cfg: RunConfig) -> list[dict]:
    """Numerical checks of the structural theorems on the built-in examples."""
    from .couplings import CouplingFunction
    from .dynamics import VectorFieldSpec
    from .simulate import inertia
    from .symmetry import (VertexPermutation, relabel_map_T, relabeled_boundary,
                           symmetry_map_S, verify_relabel_conjugacy)

    out = []

    def record(name, ok, **info):
        out.append({"check": name, "passed": bool(ok), **info})

    L, Rt = catalog.diamond(), catalog.diamond("right")
    sigma = VertexPermutation(catalog.DIAMOND_RELABEL)
    record("relabeled boundary matches the right labelling",
           np.array_equal(relabeled_boundary(L, sigma, 2), Rt.boundary(2)))
    for d in (1, 2):
        record(f"B_d T^d = T^(d-1) B~_d at d={d}", np.array_equal(
            L.boundary(d) @ relabel_map_T(L, sigma, d).matrix,
            relabel_map_T(L, sigma, d - 1).matrix @ relabeled_boundary(L, sigma, d)))
    spec = VectorFieldSpec(1, up=CouplingFunction.uniform("x - x**3 + sin(x)", 2),
                           down=CouplingFunction.uniform("tanh(2*x) + x**3", 4))
    r = verify_relabel_conjugacy(L, sigma, spec, seed=cfg.seed)
    record("relabeling conjugacy", r.ok, residual=r.residual)

    swap = VertexPermutation.from_cycles([(1, 3)], L.vertex_labels)
    group = find_symmetries(L)
    record("symmetry group order of two glued triangles", len(group) == 4, order=len(group))
    for g in group:
        for d in (0, 1, 2):
            S = symmetry_map_S(L, g, d).matrix
            if d:
                record(f"S^(d-1) B_d = B_d S^d for {g.cycles()} at d={d}",
                       np.array_equal(symmetry_map_S(L, g, d - 1).matrix @ L.boundary(d), L.boundary(d) @ S))
    r = verify_symmetry(L, swap, spec, seed=cfg.seed)
    record("signed symmetry commutes", r.ok, residual=r.residual)
    r = verify_symmetry(L, swap, spec, signed=False, seed=cfg.seed)
    record("unsigned symmetry fails with a witness", not r.ok and r.witness is not None,
           witness=None if r.witness is None else r.witness.tolist())

    Q = [[(1, 2)], [(2, 3), (1, 3), (1, 4), (3, 4)]]
    for part, expected in ((None, 4), (Q, 2)):
        found = enumerate_balanced(L, 2, part, "down")
        agree = all(invariance_oracle(L, AntiColoring.from_codes(2, c), part, "down", seed=cfg.seed)
                    == (c in {K.codes() for K in found}) for c in canonical_colorings(2))
        record(f"balanced colorings ({'trivial' if part is None else 'two-class'} partition)",
               len(found) == expected and agree, count=len(found))

    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(-2, 2, size=(25, 5))
    R = realize(L, 1, make_field("lorenz"), make_field("selkov"), M_inv=catalog.LORENZ_SELKOV_M_INV)
    record("Lorenz + Sel'kov conjugacy residual", R.conjugacy_residual(pts).max() <= cfg.tol,
           residual=float(R.conjugacy_residual(pts).max()))
    Rg = realize(catalog.tetrahedron(), 2, make_field("guckenheimer_holmes"), None, M_inv=catalog.GH_M_INV)
    record("GH realization reproduces M", np.allclose(Rg.M, catalog.GH_M, atol=1e-12))
    tr = integrate(Rg.field, catalog.GH_M_INV @ np.array([0.52, 0.49, 0.5, 1 / 3]), 0.01, 50.0)
    y4 = tr.states @ Rg.M[3]
    record("GH adjoined coordinate conserved", np.max(np.abs(y4 - 1 / 3)) <= 1e-7,
           drift=float(np.max(np.abs(y4 - 1 / 3))))

    fails = 0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        A = rng.normal(size=(n, n))
        A = A + A.T
        C = rng.normal(size=(n, n))
        Lm = C @ C.T + n * np.eye(n)
        fails += inertia(Lm @ A) != inertia(A)
    record("inertia preserved under SPD multiplication", fails == 0, failures=fails)

    worst = 0.0
    for X in (L, catalog.tetrahedron(), catalog.hollow_triangle()):
        for d in range(X.d_max + 1):
            td = triple_decomposition(X, d)
            I = np.eye(td.n)
            worst = max(worst, np.abs(td.P + td.Q + td.R - I).max(initial=0),
                        np.abs(td.P @ td.Q).max(initial=0), np.abs(td.R @ td.R - td.R).max(initial=0))
            if d >= 1:
                worst = max(worst, max(pseudoinverse(X.boundary(d)).penrose_residuals().values()))
    record("decomposition identities", worst <= 1e-9, residual=worst)
    return out


def cmd_verify_all(args, cfg: RunConfig) -> int:
    checks = _verify_all(cfg)
    failed = [c["check"] for c in checks if not c["passed"]]
    _emit(cfg, {"checks": checks, "failed": failed})
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (created if absent)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=1e-8)

    p = argparse.ArgumentParser(prog="simplicial-flows", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def cx(sp, dim=True):
        sp.add_argument("--complex", required=True,
                        help="complex JSON file, or one of: " + ", ".join(catalog.NAMED))
        if dim:
            sp.add_argument("--dim", type=int, required=True)

    s = sub.add_parser("decompose", parents=[common], help="ranks and conjugacy type of C_d")
    cx(s)
    s.add_argument("--matrices", action="store_true", help="include projections and boundaries")
    s.add_argument("--top", action="store_true", help="treat B_{d+1} as zero (pure down-coupled flow)")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("realize", parents=[common], help="realize H_down + H_up + 0 as a simplicial flow")
    cx(s)
    s.add_argument("--down", help="target field on im(B_d^T): lorenz, selkov, guckenheimer_holmes, zero")
    s.add_argument("--up", help="target field on im(B_{d+1})")
    s.add_argument("--down-params", help="JSON object of parameters")
    s.add_argument("--up-params", help="JSON object of parameters")
    s.add_argument("--m-inv", help="CSV with M^{-1}; columns span the three summands in order")
    s.add_argument("--top", action="store_true", help="treat B_{d+1} as zero")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("simulate", parents=[common], help="integrate a spec file with RK4")
    s.add_argument("--spec", required=True)
    s.add_argument("--x0", help="initial state, comma-separated")
    s.add_argument("--y0", help="initial state in transformed coordinates (realized specs)")
    s.add_argument("--h", type=float, default=1e-3)
    s.add_argument("--T", type=float, default=10.0)
    s.add_argument("--transform", action="store_true", help="also write the M-transformed series")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("symmetries", parents=[common], help="automorphism group, optional commutation check")
    cx(s, dim=False)
    s.add_argument("--spec", help="coupled spec to check S_sigma commutation against")
    s.set_defaults(func=cmd_symmetries)

    s = sub.add_parser("colorings", parents=[common], help="enumerate balanced anti-colorings")
    cx(s)
    s.add_argument("--partition", help="JSON list of classes of (d+1)- or (d-1)-simplices")
    s.add_argument("--direction", choices=("up", "down"), required=True)
    s.add_argument("--oracle", action="store_true", help="cross-check with random odd couplings")
    s.add_argument("--max-simplices", type=int, default=12)
    s.add_argument("--max-colors", type=int)
    s.add_argument("--max-witnesses", type=int, default=20)
    s.set_defaults(func=cmd_colorings)

    s = sub.add_parser("verify-all", parents=[common], help="numerical checks on the built-in examples")
    s.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, out=args.out, seed=args.seed, tol=args.tol,
                        h=getattr(args, "h", 1e-3), T=getattr(args, "T", 10.0))
        return args.func(args, cfg)
    except GuardExceeded as e:
        sys.stderr.write(f"guard exceeded: {e}\n")
        return EXIT_GUARD
    except VerificationError as e:
        sys.stderr.write(f"verification failed: {e}\n")
        return EXIT_VERIFY
    except (InputError, ComplexError, DimensionError, PreconditionError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT
    except SimplicialError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
