"""Built-in target vector fields with analytic Jacobians."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TargetField:
    """Autonomous vector field on R^dim, vectorized over leading axes."""

    name: str
    dim: int
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        raise NotImplementedError

    def jacobian(self, x) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"name": self.name, "params": dict(self.params), "dim": self.dim}


class Zero(TargetField):
    def __init__(self, dim: int):
        super().__init__("zero", dim, {})

    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def jacobian(self, x):
        return np.zeros((self.dim, self.dim))


class Lorenz(TargetField):
    def __init__(self, sigma: float = 10.0, beta: float = 8.0 / 3.0, rho: float = 28.0):
        super().__init__("lorenz", 3, {"sigma": sigma, "beta": beta, "rho": rho})

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        s, b, r = self.params["sigma"], self.params["beta"], self.params["rho"]
        if u.ndim == 1:  # plain floats are much cheaper than 0-d array slices
            x, y, z = u.tolist()
            return np.array([s * (y - x), x * (r - z) - y, x * y - b * z])
        x, y, z = u[..., 0], u[..., 1], u[..., 2]
        out = np.empty_like(u)
        out[..., 0] = s * (y - x)
        out[..., 1] = x * (r - z) - y
        out[..., 2] = x * y - b * z
        return out

    def jacobian(self, u):
        s, b, r = self.params["sigma"], self.params["beta"], self.params["rho"]
        x, y, z = np.asarray(u, dtype=float)
        return np.array([[-s, s, 0.0], [r - z, -1.0, -x], [y, x, -b]])


class Selkov(TargetField):
    """Sel'kov glycolysis model with the nonlinearity divided by ``scale``."""

    def __init__(self, a: float = 0.1, b: float = 1.5, scale: float = 400.0):
        super().__init__("selkov", 2, {"a": a, "b": b, "scale": scale})

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        a, b, k = self.params["a"], self.params["b"], self.params["scale"]
        if u.ndim == 1:
            xi, eta = u.tolist()
            nl = xi * xi * eta / k
            return np.array([-xi + a * eta + nl, b - a * eta - nl])
        xi, eta = u[..., 0], u[..., 1]
        nl = xi * xi * eta / k
        out = np.empty_like(u)
        out[..., 0] = -xi + a * eta + nl
        out[..., 1] = b - a * eta - nl
        return out

    def jacobian(self, u):
        a, k = self.params["a"], self.params["scale"]
        xi, eta = np.asarray(u, dtype=float)
        dxi, deta = 2 * xi * eta / k, xi * xi / k
        return np.array([[-1 + dxi, a + deta], [-dxi, -a - deta]])

    def equilibrium(self) -> np.ndarray:
        a, b, k = self.params["a"], self.params["b"], self.params["scale"]
        return np.array([b, b / (a + b * b / k)])


class GuckenheimerHolmes(TargetField):
    """Cyclic three-species system with a robust heteroclinic cycle."""

    def __init__(self, mu: float = 1.0, a: float = 1.0, b: float = 0.55, c: float = 1.5):
        super().__init__("guckenheimer_holmes", 3, {"mu": mu, "a": a, "b": b, "c": c})

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        p = self.params
        mu, a, b, c = p["mu"], p["a"], p["b"], p["c"]
        if u.ndim == 1:
            x, y, z = u.tolist()
            x2, y2, z2 = x * x, y * y, z * z
            return np.array([x * (mu - (a * x2 + b * y2 + c * z2)),
                             y * (mu - (a * y2 + b * z2 + c * x2)),
                             z * (mu - (a * z2 + b * x2 + c * y2))])
        sq = u * u
        x2, y2, z2 = sq[..., 0], sq[..., 1], sq[..., 2]
        out = np.empty_like(u)
        out[..., 0] = u[..., 0] * (mu - (a * x2 + b * y2 + c * z2))
        out[..., 1] = u[..., 1] * (mu - (a * y2 + b * z2 + c * x2))
        out[..., 2] = u[..., 2] * (mu - (a * z2 + b * x2 + c * y2))
        return out

    def jacobian(self, u):
        mu, a, b, c = (self.params[k] for k in ("mu", "a", "b", "c"))
        x, y, z = np.asarray(u, dtype=float)
        x2, y2, z2 = x * x, y * y, z * z
        return np.array([
            [mu - 3 * a * x2 - b * y2 - c * z2, -2 * b * x * y, -2 * c * x * z],
            [-2 * c * x * y, mu - 3 * a * y2 - b * z2 - c * x2, -2 * b * y * z],
            [-2 * b * x * z, -2 * c * y * z, mu - 3 * a * z2 - b * x2 - c * y2],
        ])


class DirectSum(TargetField):
    """H_1 + H_2 + ... acting on consecutive coordinate blocks."""

    def __init__(self, *parts: TargetField):
        dim = sum(p.dim for p in parts)
        super().__init__("+".join(p.name for p in parts), dim, {})
        object.__setattr__(self, "parts", parts)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out, k = [], 0
        for p in self.parts:
            out.append(p(u[..., k:k + p.dim]))
            k += p.dim
        return np.concatenate(out, axis=-1)

    def jacobian(self, u):
        J = np.zeros((self.dim, self.dim))
        k = 0
        for p in self.parts:
            J[k:k + p.dim, k:k + p.dim] = p.jacobian(np.asarray(u)[k:k + p.dim])
            k += p.dim
        return J

    def to_dict(self):
        return {"name": "direct_sum", "parts": [p.to_dict() for p in self.parts], "dim": self.dim}


BUILTINS = {
    "lorenz": Lorenz,
    "selkov": Selkov,
    "guckenheimer_holmes": GuckenheimerHolmes,
}


def make_field(name: str, params: dict | None = None, dim: int | None = None) -> TargetField:
    params = dict(params or {})
    if name == "zero":
        if dim is None:
            dim = int(params.pop("dim"))
        return Zero(dim)
    if name not in BUILTINS:
        raise ValueError(f"unknown field {name!r}; built-ins are {sorted(BUILTINS) + ['zero']}")
    f = BUILTINS[name](**params)
    if dim is not None and dim != f.dim:
        raise ValueError(f"field {name!r} has dimension {f.dim}, but {dim} is required")
    return f


def field_from_dict(data: dict, dim: int | None = None) -> TargetField:
    if data.get("name") == "direct_sum":
        return DirectSum(*(field_from_dict(p) for p in data["parts"]))
    return make_field(data["name"], data.get("params"), dim if dim is not None else data.get("dim"))
