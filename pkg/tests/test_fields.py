import numpy as np
import pytest

from simplicial_flows.couplings import finite_difference_jacobian
from simplicial_flows.fields import (DirectSum, GuckenheimerHolmes, Lorenz, Selkov, Zero,
                                     field_from_dict, make_field)


@pytest.mark.parametrize("H", [Lorenz(), Selkov(), GuckenheimerHolmes()])
def test_analytic_jacobians(H):
    rng = np.random.default_rng(3)
    for x in rng.uniform(-2, 2, size=(5, H.dim)):
        assert np.allclose(H.jacobian(x), finite_difference_jacobian(H, x, 1e-6), atol=1e-5)


@pytest.mark.parametrize("H", [Lorenz(), Selkov(), GuckenheimerHolmes(), Zero(2)])
def test_vectorized_matches_pointwise(H):
    X = np.random.default_rng(4).normal(size=(6, H.dim))
    assert np.allclose(H(X), np.array([H(x) for x in X]))


def test_selkov_equilibrium():
    H = Selkov()
    assert np.allclose(H(H.equilibrium()), 0.0, atol=1e-12)
    assert np.allclose(H.equilibrium(), [1.5, 1.5 / (0.1 + 2.25 / 400)])


def test_gh_axes_invariant():
    H = GuckenheimerHolmes()
    v = H(np.array([0.3, 0.0, 0.0]))
    assert v[1] == 0 and v[2] == 0


def test_direct_sum():
    H = DirectSum(Lorenz(), Selkov())
    x = np.arange(5.0)
    assert np.allclose(H(x), np.concatenate([Lorenz()(x[:3]), Selkov()(x[3:])]))
    assert field_from_dict(H.to_dict()).dim == 5


def test_make_field():
    assert make_field("lorenz", {"rho": 0.5}).params["rho"] == 0.5
    assert make_field("zero", dim=3).dim == 3
    with pytest.raises(ValueError):
        make_field("lorenz", dim=2)
    with pytest.raises(ValueError):
        make_field("vanderpol")
