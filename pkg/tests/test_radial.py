import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as si

from sharpineq.constants import unit_sphere_area
from sharpineq.core import Variant, make_case
from sharpineq.exceptions import DomainError, IntegrabilityError
from sharpineq.quadrature import QuadratureSpec
from sharpineq.radial import (
    Family,
    RadialProfile,
    critical_exponent,
    functional_sides,
    mollifier,
    near_extremal,
    profile_eval,
    radial_laplacian,
)
from sharpineq.radial import _check_weight

TIGHT = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300)

PROFILES = [
    mollifier(1.0),
    mollifier(2.5),
    near_extremal(0.5, eps=0.1, r_in=0.1, r_out=10.0),
    near_extremal(1.5, eps=0.05, r_in=0.01, r_out=5.0),
]


def fd(fun, r, h):
    return (fun(r + h) - fun(r - h)) / (2 * h)


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.family.value + str(p.R if p.family is Family.MOLLIFIER else p.gamma))
def test_derivatives_match_finite_differences(prof):
    lo, hi = prof.support
    r = np.linspace(lo + 1e-3 * (hi - lo), hi * 0.999, 2001)
    g, g1, g2 = prof.eval(r)
    h = 1e-5 * (prof.R if prof.family is Family.MOLLIFIER else r)
    assert np.allclose(fd(lambda s: prof.eval(s)[0], r, h), g1, rtol=1e-5, atol=1e-8 * np.max(np.abs(g1)))
    assert np.allclose(fd(lambda s: prof.eval(s)[1], r, h), g2, rtol=1e-4, atol=1e-6 * np.max(np.abs(g2)))


def test_mollifier_values():
    g, g1, g2 = profile_eval(mollifier(1.0), np.array([0.0, 0.5, 1.0, 2.0]))
    assert g[0] == pytest.approx(math.exp(-1))
    assert g[1] == pytest.approx(math.exp(-1 / 0.75))
    assert g[2] == 0.0 and g[3] == 0.0
    assert g1[0] == 0.0
    assert g2[0] == pytest.approx(-2 * math.exp(-1))


def test_near_extremal_shape():
    prof = near_extremal(1.0, eps=0.1, r_in=1e-2, r_out=1e2)
    r = np.array([4e-3, 5e-3, 1.0, 10.0, 2e2, 3e2])
    g = prof.eval(r)[0]
    assert g[0] == 0.0 and g[-1] == 0.0
    assert g[2] == pytest.approx(1.0) and g[3] == pytest.approx(10**-0.9)
    assert prof.support == (5e-3, 2e2)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_laplacian_of_r_squared(n):
    class Quadratic:
        def eval(self, r):
            r = np.asarray(r, dtype=float)
            return r * r, 2 * r, 2 + 0 * r

    assert radial_laplacian(Quadratic(), 0.7, n) == pytest.approx(2 * n)
    assert radial_laplacian(Quadratic(), 0.0, n) == pytest.approx(2 * n)


def test_laplacian_matches_cartesian_fd():
    prof = mollifier(1.0)
    n, h = 4, 1e-4
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.uniform(-0.5, 0.5, n)
        u = lambda y: prof.eval(np.linalg.norm(y))[0]
        lap = sum((u(x + h * e) - 2 * u(x) + u(x - h * e)) / h**2 for e in np.eye(n))
        assert radial_laplacian(prof, np.linalg.norm(x), n) == pytest.approx(lap, rel=1e-5)


@pytest.mark.parametrize("variant, n, kw, gamma", [
    (Variant.HARDY_SUBCRITICAL, 5, {"p": 2.0}, 1.5),
    (Variant.HARDY_1D, 1, {"p": 4.0}, 0.25),
    (Variant.RELLICH, 7, {}, 1.5),
    (Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, 5, {"a": 0.5}, 1.0),
    (Variant.CKN_INTERPOLATED, 4, {"a": -1.0, "theta": 0.5}, 2.0),
])
def test_critical_exponent(variant, n, kw, gamma):
    assert critical_exponent(make_case(variant, n, **kw)) == gamma


def test_profile_validation():
    with pytest.raises(DomainError):
        mollifier(0.0)
    with pytest.raises(DomainError):
        near_extremal(1.0, eps=0.0)
    with pytest.raises(DomainError):
        near_extremal(1.0, r_in=2.0, r_out=1.0)
    with pytest.raises(DomainError):
        mollifier(1.0).with_dilation(0.0)


def test_hardy_sides_against_scipy():
    n, p = 3, 2.0
    c = make_case(Variant.HARDY_SUBCRITICAL, n, p)
    lhs, rhs = functional_sides(c, mollifier(1.0))
    g = lambda r: math.exp(-1 / (1 - r * r))
    g1 = lambda r: g(r) * (-2 * r / (1 - r * r) ** 2)
    w = 4 * math.pi
    L = w * si.quad(lambda r: g(r) ** 2, 0, 1, epsrel=1e-13, epsabs=0)[0]
    R = w * si.quad(lambda r: g1(r) ** 2 * r * r, 0, 1, epsrel=1e-13, epsabs=0)[0]
    assert lhs == pytest.approx(L, rel=1e-9)
    assert rhs == pytest.approx(R, rel=1e-9)


def test_hardy1d_sides_against_scipy():
    p = 2.0
    c = make_case(Variant.HARDY_1D, 1, p)
    prof = mollifier(1.0)
    res = functional_sides(c, prof)
    g = lambda r: math.exp(-1 / (1 - r * r)) if r < 1 else 0.0
    eta = lambda x: si.quad(g, 0, min(x, 1.0), epsrel=1e-13, epsabs=0)[0]
    total = eta(1.0)
    L = si.quad(lambda x: (eta(x) / x) ** p, 0, 1, epsrel=1e-11, epsabs=0)[0] + total**p
    R = si.quad(lambda x: g(x) ** p, 0, 1, epsrel=1e-13, epsabs=0)[0]
    assert res.lhs == pytest.approx(L, rel=1e-8)
    assert res.rhs == pytest.approx(R, rel=1e-9)


def test_rellich_sides_against_scipy():
    n = 5
    c = make_case(Variant.RELLICH, n)
    lhs, rhs = functional_sides(c, mollifier(1.0))
    prof = mollifier(1.0)
    w = unit_sphere_area(n)
    L = w * si.quad(lambda r: prof.eval(r)[0] ** 2 * r ** (n - 5), 0, 1, epsrel=1e-12, epsabs=0)[0]
    R = w * si.quad(lambda r: radial_laplacian(prof, r, n) ** 2 * r ** (n - 1), 0, 1, epsrel=1e-12, epsabs=0)[0]
    assert lhs == pytest.approx(L, rel=1e-9)
    assert rhs == pytest.approx(R, rel=1e-9)


def test_ckn_lhs_is_raised_to_two_over_p():
    c = make_case(Variant.CKN_INTERPOLATED, 3, a=0.0, b=0.5)
    res = functional_sides(c, mollifier(1.0))
    assert res.lhs == pytest.approx(res.extra["lhs_inner"] ** (2 / c.p), rel=1e-15)


CASES = [
    make_case(Variant.HARDY_SUBCRITICAL, 3, 2.0),
    make_case(Variant.HARDY_SUBCRITICAL, 5, 3.5),
    make_case(Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, 5, a=0.5),
    make_case(Variant.CKN_EDGE_B_EQUALS_A, 4, a=-0.5),
    make_case(Variant.CKN_INTERPOLATED, 3, a=0.0, b=0.5),
    make_case(Variant.RELLICH, 6),
]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c.variant.value}-{c.n}")
@given(t=st.floats(0.2, 5.0))
@settings(max_examples=5, deadline=None)
def test_ratio_dilation_invariant(case, t):
    base = mollifier(1.0)
    l0, r0 = functional_sides(case, base)
    l1, r1 = functional_sides(case, base.with_dilation(t))
    assert l1 / r1 == pytest.approx(l0 / r0, rel=1e-7)


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c.variant.value}-{c.n}")
@given(c=st.floats(0.1, 10.0))
@settings(max_examples=5, deadline=None)
def test_sides_homogeneous_under_scaling(case, c):
    base = mollifier(1.0)
    l0, r0 = functional_sides(case, base, TIGHT)
    l1, r1 = functional_sides(case, base.with_scale(c), TIGHT)
    k = 2.0 if (case.variant.is_ckn or case.variant is Variant.RELLICH) else case.p
    assert l1 == pytest.approx(c**k * l0, rel=1e-9)
    assert r1 == pytest.approx(c**k * r0, rel=1e-9)


def test_zero_profile():
    c = make_case(Variant.HARDY_SUBCRITICAL, 3, 2.0)
    assert tuple(functional_sides(c, mollifier(1.0).with_scale(0.0))) == (0.0, 0.0)


def test_supercritical_needs_profile_off_origin():
    c = make_case(Variant.HARDY_SUPERCRITICAL, 2, 3.0)
    with pytest.raises(IntegrabilityError):
        functional_sides(c, mollifier(1.0))
    lhs, rhs = functional_sides(c, near_extremal(0.1, eps=0.1, r_in=0.1, r_out=10.0))
    assert 0 < lhs <= 27.0 * rhs


def test_nonintegrable_weight_rejected():
    # inside the valid domains every weight is integrable; the guard itself
    _check_weight(mollifier(1.0), -0.99, "lhs")
    _check_weight(near_extremal(1.0), -5.0, "lhs")
    with pytest.raises(IntegrabilityError):
        _check_weight(mollifier(1.0), -1.0, "lhs")


def test_serialization():
    d = near_extremal(1.0, eps=0.1).with_scale(2.0).to_dict()
    assert d == {"family": "NearExtremal", "gamma": 1.0, "eps": 0.1, "r_in": 1e-3, "r_out": 1e3, "scale": 2.0}
    assert RadialProfile(**{k: v for k, v in d.items() if k != "family"}, family=d["family"]) == \
        near_extremal(1.0, eps=0.1).with_scale(2.0)
