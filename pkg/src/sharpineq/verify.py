"""Numerical verification of the inequalities on radial test functions."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .constants import SharpConstant, sharp_constant, unit_sphere_area
from .core import InequalityCase, Variant, b_from_theta, ckn_exponent, make_case, sobolev_conjugate
from .exceptions import DomainError, RatioExceedsOne
from .quadrature import McSpec, QuadratureSpec, integrate, monte_carlo_weighted
from .radial import RadialProfile, critical_exponent, functional_sides, mollifier, near_extremal

__all__ = [
    "RATIO_SLACK",
    "SHARPNESS_THRESHOLD",
    "VerificationReport",
    "SweepSeries",
    "verify_case",
    "canonical_profile",
    "canonical_schedule",
    "sweep",
    "holder_split_check",
    "young_pointwise_check",
    "monte_carlo_sides",
    "battery",
]

# ratio above 1 + RATIO_SLACK is a theorem violation, i.e. a bug
RATIO_SLACK = 1e-9
SHARPNESS_THRESHOLD = 0.98


@dataclass
class VerificationReport:
    case: InequalityCase
    profile: dict
    lhs: float
    rhs: float
    constant: SharpConstant
    ratio: float
    margin: float
    quadrature: dict
    mc: dict | None = None
    seed: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.ratio <= 1.0 + RATIO_SLACK

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "case": self.case.to_dict(),
            "profile": self.profile,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant.to_dict(),
            "ratio": self.ratio,
            "margin": self.margin,
            "quadrature": self.quadrature,
            "mc": self.mc,
            "seed": self.seed,
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class SweepSeries:
    case: InequalityCase
    schedule: list
    ratios: list
    lhs: list
    rhs: list
    sup_ratio: float

    @property
    def increasing(self) -> bool:
        return all(b > a for a, b in zip(self.ratios, self.ratios[1:]))

    def to_dict(self) -> dict:
        return {
            "case": self.case.to_dict(),
            "schedule": [list(s) for s in self.schedule],
            "ratios": self.ratios,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "sup_ratio": self.sup_ratio,
            "increasing": self.increasing,
        }

    def rows(self):
        """CSV rows (param, lhs, rhs, ratio, margin)."""
        for s, l, r, q in zip(self.schedule, self.lhs, self.rhs, self.ratios):
            yield {"param": ";".join(repr(float(x)) for x in s), "lhs": l, "rhs": r,
                   "ratio": q, "margin": 1.0 - q}


def canonical_profile(case: InequalityCase) -> RadialProfile:
    """Mollifier where it is admissible, otherwise a near-extremal profile."""
    if case.variant is Variant.HARDY_SUPERCRITICAL:
        return near_extremal(case, eps=0.1, r_in=0.1, r_out=10.0)
    return mollifier(1.0)


def _mc_integrands(case, profile, h=1e-4):
    """n-dimensional integrands of both sides, with derivatives by finite differences.

    Derivatives are taken in Cartesian coordinates on u(x) = g(|x|), so the
    radial derivative formulas are not reused.
    """
    n, p = case.n, case.p

    def u(x):
        return profile.eval(np.linalg.norm(x, axis=-1))[0]

    def grad_norm(x):
        sq = np.zeros(x.shape[0])
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            sq += ((u(x + e) - u(x - e)) / (2 * h)) ** 2
        return np.sqrt(sq)

    def laplacian(x):
        u0 = u(x)
        out = np.zeros(x.shape[0])
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out += (u(x + e) - 2 * u0 + u(x - e)) / (h * h)
        return out

    def rad(x):
        return np.linalg.norm(x, axis=-1)

    v = case.variant
    if v in (Variant.HARDY_SUBCRITICAL, Variant.HARDY_SUPERCRITICAL):
        return (lambda x: np.abs(u(x)) ** p / rad(x) ** p,
                lambda x: grad_norm(x) ** p)
    if v is Variant.RELLICH:
        return (lambda x: u(x) ** 2 / rad(x) ** 4,
                lambda x: laplacian(x) ** 2)
    if v.is_ckn:
        a, b = case.a, case.b
        return (lambda x: np.abs(u(x)) ** p / rad(x) ** (b * p),
                lambda x: grad_norm(x) ** 2 / rad(x) ** (2 * a))
    raise DomainError(f"no n-dimensional form for {v.value}")


def _lhs_weight_power(case):
    v = case.variant
    if v is Variant.RELLICH:
        return 2.0, 4.0
    if v.is_ckn:
        return case.p, case.b * case.p
    return case.p, case.p


def monte_carlo_sides(case: InequalityCase, profile: RadialProfile, mc_spec: McSpec) -> dict:
    """Monte Carlo estimates of both sides (CKN lhs before the 2/p power).

    Points are uniform in the ball.  The lhs integrand |u|^k |x|^-w has
    infinite variance when 2w >= n, so the singular part g(0)^k |x|^-w is
    used as a control variate: it is subtracted from every sample and its
    ball integral, omega g(0)^k R^(n-w) / (n-w), added back exactly.
    """
    if profile.scale == 0:
        return {"lhs": 0.0, "lhs_se": 0.0, "rhs": 0.0, "rhs_se": 0.0, "control": 0.0}
    n = case.n
    lf, rf = _mc_integrands(case, profile)
    k, w = _lhs_weight_power(case)
    g0 = float(profile.eval(0.0)[0])
    control = 0.0
    lhs_f = lf
    if g0 != 0.0 and n - w > 0:
        amp = abs(g0) ** k
        R = mc_spec.radius_cap
        control = unit_sphere_area(n) * amp * R ** (n - w) / (n - w)
        lhs_f = lambda x: lf(x) - amp * np.linalg.norm(x, axis=-1) ** -w
    lhs, lse = monte_carlo_weighted(lhs_f, n, mc_spec)
    rhs, rse = monte_carlo_weighted(rf, n, mc_spec)
    return {"lhs": lhs + control, "lhs_se": lse, "rhs": rhs, "rhs_se": rse, "control": control}


def verify_case(case: InequalityCase, profile: RadialProfile | None = None,
                quad_spec: QuadratureSpec | None = None, mc_spec: McSpec | None = None,
                sobolev: str = "talenti", strict: bool = False) -> VerificationReport:
    """Evaluate both sides, the sharp constant and the normalised ratio.

    With ``strict`` a ratio above one raises :class:`RatioExceedsOne`;
    otherwise check ``report.ok``.
    """
    t0 = time.perf_counter()
    profile = profile or canonical_profile(case)
    quad_spec = quad_spec or QuadratureSpec()
    sides = functional_sides(case, profile, quad_spec)
    const = sharp_constant(case, sobolev=sobolev)
    denom = const.value * sides.rhs
    ratio = sides.lhs / denom if denom > 0 else 0.0
    mc = None
    if mc_spec is not None:
        if case.variant is Variant.HARDY_1D:
            raise DomainError("Monte Carlo cross-check needs an n-dimensional case")
        mc = monte_carlo_sides(case, profile, mc_spec)
        lhs_q = sides.extra.get("lhs_inner", sides.lhs)
        mc["lhs_quadrature"] = lhs_q
        mc["rhs_quadrature"] = sides.rhs
        mc["lhs_sigmas"] = abs(mc["lhs"] - lhs_q) / mc["lhs_se"] if mc["lhs_se"] > 0 else 0.0
        mc["rhs_sigmas"] = abs(mc["rhs"] - sides.rhs) / mc["rhs_se"] if mc["rhs_se"] > 0 else 0.0
    report = VerificationReport(
        case=case,
        profile=profile.to_dict(),
        lhs=sides.lhs,
        rhs=sides.rhs,
        constant=const,
        ratio=ratio,
        margin=1.0 - ratio,
        quadrature={"lhs_error": sides.lhs_error, "rhs_error": sides.rhs_error,
                    "evaluations": sides.evaluations, **quad_spec.to_dict()},
        mc=mc,
        seed=None if mc_spec is None else mc_spec.seed,
        wall_time=time.perf_counter() - t0,
    )
    if strict and not report.ok:
        raise RatioExceedsOne(f"ratio {ratio!r} > 1 for {case.variant.value}")
    return report


# (eps, window exponent m) ladder; the window is [10^-m, 10^m]
_LADDER = [(0.1, 3), (0.03, 10), (0.01, 30), (0.003, 60), (0.001, 100), (5e-4, 150), (2e-4, 200)]


def canonical_schedule(case: InequalityCase) -> list[tuple[float, float, float]]:
    """Near-extremal schedule with eps decreasing and the window widening.

    The widest window is capped so the profile's highest derivative needed
    by the case, about r_in^-(gamma + order), stays inside double range.
    """
    gamma = critical_exponent(case)
    order = 2 if case.variant is Variant.RELLICH else 1
    out = []
    for eps, m in _LADDER:
        if (gamma + order) * m > 300:
            break
        out.append((eps, 10.0**-m, 10.0**m))
    return out


def sweep(case: InequalityCase, schedule=None, quad_spec: QuadratureSpec | None = None,
          sobolev: str = "talenti") -> SweepSeries:
    """Ratios of near-extremal profiles along ``schedule`` of (eps, r_in, r_out)."""
    if case.variant is Variant.CKN_EDGE_B_EQUALS_A:
        raise DomainError("b = a has no power-law extremal; sweep a Hardy, CKN b=a+1 or Rellich case")
    schedule = [tuple(float(v) for v in s) for s in (schedule or canonical_schedule(case))]
    const = sharp_constant(case, sobolev=sobolev).value
    ratios, lhs, rhs = [], [], []
    for eps, r_in, r_out in schedule:
        s = functional_sides(case, near_extremal(case, eps, r_in, r_out), quad_spec)
        lhs.append(s.lhs)
        rhs.append(s.rhs)
        ratios.append(s.lhs / (const * s.rhs))
    return SweepSeries(case, schedule, ratios, lhs, rhs, max(ratios))


def holder_split_check(n: int, a: float, theta: float, profile: RadialProfile,
                       quad_spec: QuadratureSpec | None = None) -> dict:
    """Check the interpolation step of the CKN proof on a radial profile.

    Verifies int |u|^p / |x|^(bp) <= (int u^2 / |x|^(2(a+1)))^(1-theta)
    (int |u|^(2*) / |x|^(2* a))^theta, with b and p fixed by theta.
    """
    if not 0.0 < theta < 1.0:
        raise DomainError("theta must lie in (0, 1); the edges are the b=a and b=a+1 cases")
    case = make_case(Variant.CKN_INTERPOLATED, n, a=a, theta=theta)
    b, p = case.b, case.p
    s2 = sobolev_conjugate(n, 2.0)
    spec = quad_spec or QuadratureSpec()
    omega = unit_sphere_area(n)
    lo, hi = profile.support
    qs = QuadratureSpec(spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
                        singular_origin=not profile.vanishes_near_origin)

    def weighted(power, weight):
        f = lambda r: np.abs(profile.eval(r)[0]) ** power * r ** (n - 1.0 - weight)
        return omega * integrate(f, lo, hi, qs, points=profile.breakpoints()).value

    lhs = weighted(p, b * p)
    i2 = weighted(2.0, 2.0 * (a + 1.0))
    i2s = weighted(s2, s2 * a)
    rhs = i2 ** (1.0 - theta) * i2s**theta
    ratio = lhs / rhs if rhs > 0 else 0.0
    return {"n": n, "a": a, "b": b, "p": p, "theta": theta, "holder_p": 1.0 / (1.0 - theta),
            "holder_q": 1.0 / theta, "lhs": lhs, "rhs": rhs, "ratio": ratio,
            "ok": ratio <= 1.0 + RATIO_SLACK, "profile": profile.to_dict()}


def young_pointwise_check(p: float, sample_vectors=None, lambdas=(0.5, 0.7, 1.0, 1.5, 2.0),
                          n: int = 5, count: int = 1000, seed: int = 0) -> dict:
    """Check V.W <= lam^-p |V|^p / p + lam^q |W|^q / q pointwise.

    ``sample_vectors`` is a pair of ``(m, n)`` arrays; when omitted, ``count``
    seeded Gaussian pairs in R^n are drawn.
    """
    if not p > 1:
        raise DomainError("p must satisfy p > 1")
    q = p / (p - 1.0)
    if sample_vectors is None:
        rng = np.random.default_rng(seed)
        V = rng.standard_normal((count, n))
        W = rng.standard_normal((count, n))
    else:
        V, W = (np.atleast_2d(np.asarray(s, dtype=float)) for s in sample_vectors)
    nv = np.linalg.norm(V, axis=1)
    nw = np.linalg.norm(W, axis=1)
    dot = np.sum(V * W, axis=1)
    slack_min = math.inf
    for lam in np.atleast_1d(lambdas):
        if not lam > 0:
            raise DomainError("lambda must be positive")
        bound = lam**-p * nv**p / p + lam**q * nw**q / q
        slack_min = min(slack_min, float(np.min(bound - dot)))
    return {"p": p, "q": q, "pairs": int(V.shape[0]), "lambdas": [float(x) for x in np.atleast_1d(lambdas)],
            "min_slack": slack_min, "ok": slack_min >= -1e-12 * max(1.0, float(np.max(np.abs(dot))))}


def battery() -> list[tuple[InequalityCase, RadialProfile]]:
    """The standard case/profile pairs covering every variant."""
    V = Variant
    pairs = []
    for n, p in [(3, 2.0), (4, 2.0), (5, 3.0), (3, 1.5), (6, 2.0)]:
        pairs.append((make_case(V.HARDY_SUBCRITICAL, n, p), mollifier(1.0)))
    c = make_case(V.HARDY_SUBCRITICAL, 3, 2.0)
    pairs.append((c, near_extremal(c, 0.05, 1e-3, 1e3)))
    for n, p in [(2, 3.0), (3, 4.0), (2, 5.0)]:
        c = make_case(V.HARDY_SUPERCRITICAL, n, p)
        pairs.append((c, near_extremal(c, 0.1, 0.1, 10.0)))
    for p in (1.5, 2.0, 3.0):
        pairs.append((make_case(V.HARDY_1D, 1, p), mollifier(1.0)))
    c = make_case(V.HARDY_1D, 1, 2.0)
    pairs.append((c, near_extremal(c, 0.05, 1e-3, 1e3)))
    for n, a in [(3, 0.0), (3, 0.25), (5, 0.5), (4, -0.5)]:
        pairs.append((make_case(V.CKN_EDGE_B_EQUALS_A_PLUS_1, n, a=a), mollifier(1.0)))
    c = make_case(V.CKN_EDGE_B_EQUALS_A_PLUS_1, 5, a=0.5)
    pairs.append((c, near_extremal(c, 0.05, 1e-3, 1e3)))
    for n, a in [(3, 0.0), (3, -0.5), (5, 0.5), (4, 0.25)]:
        pairs.append((make_case(V.CKN_EDGE_B_EQUALS_A, n, a=a), mollifier(1.0)))
    pairs.append((make_case(V.CKN_INTERPOLATED, 3, a=0.0, b=0.5), mollifier(1.0)))
    pairs.append((make_case(V.CKN_INTERPOLATED, 4, a=0.3, theta=0.25), mollifier(1.0)))
    pairs.append((make_case(V.CKN_INTERPOLATED, 5, a=-0.5, theta=0.5), mollifier(1.0)))
    c = make_case(V.CKN_INTERPOLATED, 3, a=0.0, b=0.5)
    pairs.append((c, near_extremal(c, 0.05, 1e-3, 1e3)))
    for n in (5, 6, 8):
        pairs.append((make_case(V.RELLICH, n), mollifier(1.0)))
    c = make_case(V.RELLICH, 5)
    pairs.append((c, near_extremal(c, 0.05, 1e-3, 1e3)))
    return pairs
