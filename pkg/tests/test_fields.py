import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpineq.exceptions import DomainError
from sharpineq.fields import (
    FieldKind,
    RadialVectorField,
    ckn_field,
    divergence_fd,
    field_eval,
    hardy_field,
    target_divergence,
)


def random_points(n, count, seed):
    rng = np.random.default_rng(seed)
    d = rng.standard_normal((count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * 10 ** rng.uniform(-1, 1, count)[:, None]


@pytest.mark.parametrize("field", [
    hardy_field(3, 2.0), hardy_field(4, 3.0), hardy_field(2, 3.0), hardy_field(6, 1.5),
    ckn_field(3, 1.0), ckn_field(5, 1.5), ckn_field(4, -0.5), ckn_field(7, 0.25),
], ids=lambda f: f"{f.kind.value}-{f.n}-{f.exponent}")
def test_divergence_equals_minus_weight(field):
    for x in random_points(field.n, 200, 0):
        t = float(target_divergence(field, x))
        assert abs(divergence_fd(field, x) - t) <= 1e-5 * abs(t)


def test_field_formula():
    x = np.array([[3.0, 4.0, 0.0]])
    v = field_eval(hardy_field(3, 2.0), x)
    # x / ((p - n) |x|^p) = x / (-25)
    assert np.allclose(v, x / -25.0)
    w = field_eval(ckn_field(3, 1.0), x)
    assert np.allclose(w, x / -25.0)


@given(st.integers(1, 8), st.floats(0.2, 6.0), st.floats(0.1, 10.0))
@settings(max_examples=100)
def test_homogeneity(n, p, t):
    if abs(p - n) < 1e-3:
        return
    f = hardy_field(n, p)
    x = random_points(n, 3, 1)
    assert np.allclose(field_eval(f, t * x), t ** (1 - p) * field_eval(f, x), rtol=1e-12)


def test_validation():
    with pytest.raises(DomainError):
        hardy_field(3, 3.0)
    with pytest.raises(DomainError):
        ckn_field(4, 2.0)
    with pytest.raises(DomainError):
        field_eval(hardy_field(3, 2.0), np.zeros(3))
    with pytest.raises(DomainError):
        field_eval(hardy_field(3, 2.0), np.ones(4))
    with pytest.raises(DomainError):
        divergence_fd(hardy_field(3, 2.0), np.array([1e-6, 0, 0]), h=1e-6)


def test_power_and_serialisation():
    f = RadialVectorField("CknW", 5, 1.5)
    assert f.kind is FieldKind.CKN_W and f.power == 3.0
    assert f.to_dict() == {"kind": "CknW", "n": 5, "exponent": 1.5}


@pytest.mark.parametrize("field, x, expected", [
    (hardy_field(3, 2.0), [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]),
    (ckn_field(3, 1.0), [0.0, 2.0, 0.0], [0.0, -0.5, 0.0]),
])
def test_field_examples(field, x, expected):
    assert np.allclose(field_eval(field, np.array(x)), expected, rtol=0, atol=1e-15)
