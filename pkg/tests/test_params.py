import pytest

from thinspec import ModelParams, ParameterError


def test_valid_params():
    p = ModelParams(n=400, t=0.1, j=1.0, b=0.01, gamma=0.5, delta=0.0)
    assert p.sublattice_spin == 100
    assert p.sector_dim == 201


@pytest.mark.parametrize("n", [0, -4, 6, 10, 402, 3])
def test_n_must_be_multiple_of_four(n):
    with pytest.raises(ParameterError, match="multiple of 4"):
        ModelParams(n=n, t=0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"j": 0.0},
        {"j": -1.0},
        {"t": 0.0},
        {"t": -0.5},
        {"b": -0.1},
        {"gamma": -0.1},
        {"delta": -0.2},
        {"weight_cutoff": 0.0},
        {"weight_cutoff": 1.0},
    ],
)
def test_invalid_scalars(kwargs):
    base = dict(n=8, t=0.1)
    base.update(kwargs)
    with pytest.raises(ParameterError):
        ModelParams(**base)


def test_with_value_replaces_one_field():
    p = ModelParams(n=8, t=0.1, gamma=0.3)
    q = p.with_value("gamma", 0.7)
    assert q.gamma == 0.7 and q.n == 8 and p.gamma == 0.3
