"""Scalar expression language and coupling functions f: R^n -> R^n.

Scalar components are written as small expressions in a single variable
``x``, e.g. ``"x - x**3/3"`` or ``"2*sin(x) + x**5"``.  Parsing is done on
the Python AST with a whitelist, and the parity of each expression (odd,
even, constant, or neither) is derived statically, so oddness of a coupling
can be checked without sampling.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError

_FUNCS = {
    "sin": (np.sin, "odd"),
    "tanh": (np.tanh, "odd"),
    "sinh": (np.sinh, "odd"),
    "arctan": (np.arctan, "odd"),
    "cos": (np.cos, "even"),
    "cosh": (np.cosh, "even"),
    "exp": (np.exp, None),
}

# parity lattice: "zero" is both odd and even; "const" is even
ZERO, CONST, ODD, EVEN = "zero", "const", "odd", "even"


def _add_parity(a, b):
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    if a == b:
        return a
    if {a, b} <= {CONST, EVEN}:
        return EVEN
    return None


def _mul_parity(a, b):
    if ZERO in (a, b):
        return ZERO
    if a is None or b is None:
        return None
    if a == CONST:
        return b
    if b == CONST:
        return a
    if a == b:
        return EVEN
    return ODD  # odd * even


def _parity(node) -> str | None:
    if isinstance(node, ast.Expression):
        return _parity(node.body)
    if isinstance(node, ast.Constant):
        return ZERO if node.value == 0 else CONST
    if isinstance(node, ast.Name):
        return ODD
    if isinstance(node, ast.UnaryOp):
        return _parity(node.operand)
    if isinstance(node, ast.BinOp):
        a, b = _parity(node.left), _parity(node.right)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            return _add_parity(a, b)
        if isinstance(node.op, ast.Mult):
            return _mul_parity(a, b)
        if isinstance(node.op, ast.Div):
            if b in (CONST,):
                return a
            return None
        if isinstance(node.op, ast.Pow):
            if b not in (CONST, ZERO) or not isinstance(node.right, ast.Constant):
                return None
            p = node.right.value
            if a in (CONST, ZERO) or p == 0:
                return CONST if a != ZERO or p == 0 else ZERO
            if float(p).is_integer() and a in (ODD, EVEN):
                return a if (int(p) % 2 == 1 and a == ODD) else EVEN
            return None
    if isinstance(node, ast.Call):
        fname = node.func.id
        inner = _parity(node.args[0])
        kind = _FUNCS[fname][1]
        if inner == ZERO:
            return ZERO if kind == "odd" else CONST
        if inner in (CONST,):
            return CONST
        if kind == "odd" and inner in (ODD, EVEN):
            return inner
        if kind == "even" and inner in (ODD, EVEN):
            return EVEN
        return None
    return None


_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name,
            ast.Call, ast.Load, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow,
            ast.USub, ast.UAdd)


def _validate(tree):
    called = {id(n.func) for n in ast.walk(tree) if isinstance(n, ast.Call)}
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ValueError(f"unsupported syntax {type(node).__name__} in expression")
        if isinstance(node, ast.Name) and node.id != "x" and id(node) not in called:
            raise ValueError(f"unknown name {node.id!r}; the only variable is 'x'")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                raise ValueError("only sin, cos, tanh, sinh, cosh, arctan and exp may be called")
            if len(node.args) != 1 or node.keywords:
                raise ValueError(f"{node.func.id} takes exactly one argument")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError("only numeric constants are allowed")


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function of one variable given by an expression string."""

    expr: str
    _fn: Callable = field(repr=False, compare=False, default=None)
    parity: str | None = field(compare=False, default=None)

    def __post_init__(self):
        tree = ast.parse(self.expr.strip(), mode="eval")
        _validate(tree)
        code = compile(tree, f"<expr {self.expr!r}>", "eval")
        env = {"__builtins__": {}, **{k: v[0] for k, v in _FUNCS.items()}}

        def fn(x, _code=code, _env=env):
            return eval(_code, _env, {"x": x}) + 0.0 * x

        object.__setattr__(self, "_fn", fn)
        object.__setattr__(self, "parity", _parity(tree))

    @property
    def odd(self) -> bool:
        return self.parity in (ODD, ZERO)

    def __call__(self, x):
        return self._fn(np.asarray(x, dtype=float))


class CouplingFunction:
    """A map C -> C on a chain space of dimension ``arity``.

    Two kinds exist.  *Componentwise* couplings apply one scalar function
    per basis simplex; when built from a partition, simplices in the same
    class share a function.  *General* couplings wrap an arbitrary callable
    and are what the realization pipeline produces.
    """

    def __init__(self, arity: int, kind: str, components: Sequence[ScalarFunction] | None = None,
                 fn: Callable | None = None, odd: bool | None = None,
                 partition: Sequence[Sequence[int]] | None = None, label: str | None = None):
        if kind not in ("componentwise", "general"):
            raise ValueError("kind must be 'componentwise' or 'general'")
        self.arity = int(arity)
        self.kind = kind
        self.components = tuple(components) if components is not None else None
        self.partition = tuple(tuple(c) for c in partition) if partition is not None else None
        self.label = label
        self._fn = fn
        if kind == "componentwise":
            if self.components is None or len(self.components) != self.arity:
                raise DimensionError("componentwise coupling needs one component per simplex")
            self.odd = all(c.odd for c in self.components)
            self._groups = self._group_components()
        else:
            if fn is None:
                raise ValueError("general coupling needs a callable")
            self.odd = bool(odd)

    def _group_components(self):
        # evaluate identical expressions once on a slice of indices
        groups: dict[str, list[int]] = {}
        for i, c in enumerate(self.components):
            groups.setdefault(c.expr, []).append(i)
        return [(self.components[idx[0]], np.array(idx)) for idx in groups.values()]

    @classmethod
    def uniform(cls, expr: str, arity: int) -> "CouplingFunction":
        """Componentwise coupling with the same scalar function everywhere."""
        f = ScalarFunction(expr)
        return cls(arity, "componentwise", [f] * arity, partition=[list(range(arity))] if arity else [])

    @classmethod
    def from_partition(cls, exprs: Sequence[str], partition: Sequence[Sequence[int]],
                       arity: int) -> "CouplingFunction":
        """Componentwise coupling constant on the classes of ``partition``."""
        if len(exprs) != len(partition):
            raise DimensionError("need exactly one expression per partition class")
        seen = sorted(i for cls_ in partition for i in cls_)
        if seen != list(range(arity)):
            raise DimensionError("partition must cover every simplex exactly once")
        comps: list[ScalarFunction | None] = [None] * arity
        for e, cls_ in zip(exprs, partition):
            f = ScalarFunction(e)
            for i in cls_:
                comps[i] = f
        return cls(arity, "componentwise", comps, partition=partition)

    @classmethod
    def componentwise(cls, exprs: Sequence[str]) -> "CouplingFunction":
        return cls(len(exprs), "componentwise", [ScalarFunction(e) for e in exprs])

    @classmethod
    def general(cls, fn: Callable, arity: int, odd: bool = False, label: str | None = None):
        return cls(arity, "general", fn=fn, odd=odd, label=label)

    @classmethod
    def zero(cls, arity: int) -> "CouplingFunction":
        return cls.uniform("0", arity)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.arity:
            raise DimensionError(f"coupling of arity {self.arity} applied to vector of length {y.shape[-1]}")
        if self.kind == "general":
            return np.asarray(self._fn(y), dtype=float)
        out = np.empty_like(y)
        for f, idx in self._groups:
            out[..., idx] = f(y[..., idx])
        return out

    def require_odd_componentwise(self, what: str = "coupling"):
        if self.kind != "componentwise":
            raise PreconditionError(f"{what} must be componentwise")
        if not self.odd:
            bad = [c.expr for c in self.components if not c.odd]
            raise PreconditionError(f"{what} must have odd components; not odd: {sorted(set(bad))}")

    def to_dict(self) -> dict:
        if self.kind == "general":
            raise TypeError("general couplings are not serializable; serialize their source instead")
        exprs = [c.expr for c in self.components]
        if len(set(exprs)) <= 1 and exprs:
            return {"expr": exprs[0]}
        if self.partition is not None:
            return {"exprs": [self.components[c[0]].expr for c in self.partition],
                    "partition": [list(c) for c in self.partition]}
        return {"components": exprs}

    @classmethod
    def from_dict(cls, data: dict, arity: int) -> "CouplingFunction":
        if "expr" in data:
            return cls.uniform(data["expr"], arity)
        if "partition" in data:
            return cls.from_partition(data["exprs"], data["partition"], arity)
        if "components" in data:
            c = cls.componentwise(data["components"])
            if c.arity != arity:
                raise DimensionError(f"expected {arity} components, got {c.arity}")
            return c
        raise ValueError("coupling description needs 'expr', 'exprs'+'partition' or 'components'")

    def __repr__(self):
        if self.kind == "general":
            return f"CouplingFunction(general, arity={self.arity}, label={self.label!r})"
        return f"CouplingFunction(componentwise, arity={self.arity}, {self.to_dict()})"


def finite_difference_jacobian(fn: Callable, x, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian J[i, j] = d fn_i / d x_j."""
    x = np.asarray(x, dtype=float)
    n = x.size
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = step
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * step))
    m = np.asarray(fn(x)).size
    return np.column_stack(cols) if cols else np.zeros((m, 0))
