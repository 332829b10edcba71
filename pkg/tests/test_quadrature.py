import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as si

from sharpineq.exceptions import DomainError, NonFinite, ToleranceNotMet
from sharpineq.quadrature import McSpec, QuadratureSpec, gauss_legendre, integrate, monte_carlo_weighted
from sharpineq.radial import mollifier

SING = QuadratureSpec(singular_origin=True)


def test_polynomial():
    v, err = integrate(lambda r: r * r, 0.0, 1.0)
    assert abs(v - 1 / 3) <= 1e-12
    assert err <= 1e-9


def test_inverse_sqrt_singularity():
    v, _ = integrate(lambda r: r**-0.5, 0.0, 1.0, SING)
    assert abs(v - 2.0) <= 1e-9


@pytest.mark.parametrize("s", [-0.9, -0.5, -0.1, 0.3, 2.5])
def test_power_singularities(s):
    v, _ = integrate(lambda r: r**s, 0.0, 2.0, SING)
    assert v == pytest.approx(2.0 ** (s + 1) / (s + 1), rel=1e-8)


def test_log_singularity():
    v, _ = integrate(lambda r: np.log(r), 0.0, 1.0, SING)
    assert v == pytest.approx(-1.0, rel=1e-8)


def test_reversed_and_empty():
    assert integrate(lambda r: r, 1.0, 0.0).value == pytest.approx(-0.5, rel=1e-14)
    assert integrate(lambda r: r, 1.0, 1.0).value == 0.0


def test_breakpoints_for_kinks():
    v, _ = integrate(lambda r: np.abs(r - 0.3), 0.0, 1.0, points=[0.3])
    assert v == pytest.approx(0.045 + 0.245, rel=1e-13)


def test_mollifier_integral_stable_under_budget():
    f = lambda r: mollifier(1.0).eval(r)[0] * r**2
    a = integrate(f, 0.0, 1.0, QuadratureSpec(max_subdivisions=2**12)).value
    b = integrate(f, 0.0, 1.0, QuadratureSpec(max_subdivisions=2**16)).value
    ref, _ = si.quad(lambda r: math.exp(-1 / (1 - r * r)) * r * r, 0, 1, epsabs=0, epsrel=1e-13)
    assert abs(a - b) <= 1e-10 * abs(b)
    assert b == pytest.approx(ref, rel=1e-10)


@given(st.floats(-3, 3), st.floats(0.1, 10), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_matches_scipy_on_smooth_functions(c, width, k):
    f = lambda r: np.cos(c * r) * r**k
    v, _ = integrate(f, 0.0, width)
    ref, _ = si.quad(lambda r: math.cos(c * r) * r**k, 0.0, width, epsabs=1e-13, epsrel=1e-12, limit=500)
    assert v == pytest.approx(ref, rel=1e-8, abs=1e-11)


def test_tolerance_not_met():
    with pytest.raises(ToleranceNotMet):
        integrate(lambda r: np.sin(1.0 / (r + 1e-9)), 0.0, 1.0, QuadratureSpec(max_subdivisions=4))


def test_nonfinite_integrand():
    with pytest.raises(NonFinite):
        integrate(lambda r: np.full_like(r, np.nan), 0.0, 1.0)


def test_infinite_limits_rejected():
    with pytest.raises(DomainError):
        integrate(lambda r: r, 0.0, math.inf)


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(DomainError):
        McSpec(samples=0)
    with pytest.raises(DomainError):
        McSpec(seed=-1)


@pytest.mark.parametrize("m", [1, 4, 10])
def test_gauss_legendre_exactness(m):
    x, w = gauss_legendre(m)
    for k in range(2 * m):
        assert np.dot(w, x**k) == pytest.approx(1 / (k + 1), rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_mc_ball_volume_and_second_moment(n):
    spec = McSpec(samples=200_000, seed=7)
    vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    est, se = monte_carlo_weighted(lambda x: np.ones(len(x)), n, spec)
    assert est == pytest.approx(vol, rel=1e-12) and se == pytest.approx(0.0, abs=1e-9)
    # E|x|^2 over the unit ball is n/(n+2)
    est, se = monte_carlo_weighted(lambda x: np.sum(x * x, axis=1), n, spec)
    assert abs(est - vol * n / (n + 2)) <= 4 * se


def test_mc_deterministic_across_workers():
    f = lambda x: np.exp(-np.sum(x * x, axis=1))
    a = monte_carlo_weighted(f, 3, McSpec(samples=100_000, seed=11, workers=1))
    b = monte_carlo_weighted(f, 3, McSpec(samples=100_000, seed=11, workers=4))
    c = monte_carlo_weighted(f, 3, McSpec(samples=100_000, seed=12))
    assert a == b
    assert a != c


def test_mc_zero_integrand():
    assert monte_carlo_weighted(lambda x: np.zeros(len(x)), 4, McSpec(samples=1000)) == (0.0, 0.0)
