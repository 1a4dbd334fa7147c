"""File formats: complexes, specs, partitions, colorings, CSV and JSON reports."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import catalog
from .complex import OrientedComplex, complex_from_dict
from .couplings import CouplingFunction
from .dynamics import Realization, VectorFieldSpec, assemble, realize
from .errors import SimplicialError
from .fields import field_from_dict

SIG_DIGITS = 12


class InputError(SimplicialError, ValueError):
    """Unreadable or malformed input file."""


def fmt(x: float) -> str:
    return f"{float(x):.{SIG_DIGITS}g}"


def _round(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if np.isfinite(obj) else str(obj)
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(obj).encode())
    return path


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.write_bytes(("\n".join(lines) + "\n").encode())
    return path


def read_matrix_csv(path) -> np.ndarray:
    try:
        rows = [line for line in Path(path).read_text().splitlines() if line.strip()]
        return np.array([[float(v) for v in line.split(",")] for line in rows])
    except (OSError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def write_matrix_csv(path, M) -> Path:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(("\n".join(",".join(fmt(v) for v in row) for row in M) + "\n").encode())
    return path


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def load_complex(source) -> tuple[OrientedComplex, str]:
    """A complex from a JSON file or a catalog name; returns it with an input hash."""
    name = str(source)
    if name in catalog.NAMED and not Path(name).exists():
        X = catalog.NAMED[name]()
        return X, sha256_bytes(dumps(X.to_dict()).encode())
    data = load_json(source)
    try:
        X = complex_from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{source}: {e}") from None
    return X, sha256_file(source)


def load_partition(path) -> list[list[tuple[int, ...]]]:
    data = load_json(path)
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise InputError(f"{path}: a partition is a list of classes, each a list of simplices")
    return [[tuple(s) for s in c] for c in data]


def spec_to_dict(X: OrientedComplex, spec: VectorFieldSpec | None = None,
                 realization: Realization | None = None) -> dict:
    """Self-contained description of a field, including its complex."""
    if realization is not None:
        R = realization
        return {"kind": "realized", "complex": X.to_dict(), "d": R.d,
                "down": R.H_down.to_dict(), "up": R.H_up.to_dict(),
                "include_up": R.include_up, "M_inv": R.M_inv.tolist()}
    out = {"kind": "coupled", "complex": X.to_dict(), "d": spec.d}
    for name in ("internal", "down", "up"):
        f = getattr(spec, name)
        if f is not None:
            out[name] = f.to_dict()
    return out


def spec_from_dict(data: dict):
    """Returns (complex, assembled field, realization or None)."""
    try:
        X = complex_from_dict(data["complex"])
        d = int(data["d"])
        if data.get("kind") == "realized":
            H1 = field_from_dict(data["down"])
            H2 = field_from_dict(data["up"])
            R = realize(X, d, H1, H2, M_inv=np.array(data["M_inv"], dtype=float),
                        include_up=bool(data.get("include_up", True)))
            return X, R.field, R
        parts = {}
        for name, dim in (("internal", d), ("down", d - 1), ("up", d + 1)):
            if name in data:
                parts[name] = CouplingFunction.from_dict(data[name], X.n(dim))
        spec = VectorFieldSpec(d, **parts)
        return X, assemble(X, spec), None
    except KeyError as e:
        raise InputError(f"spec is missing key {e}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, SimplicialError):
            raise
        raise InputError(f"bad spec: {e}") from None


def load_spec(path):
    return spec_from_dict(load_json(path))
