"""Radial test-function families and the 1D reduction of each inequality."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import unit_sphere_area
from .core import InequalityCase, Variant
from .exceptions import DomainError, IntegrabilityError, ToleranceNotMet
from .quadrature import QuadratureSpec, gauss_legendre, integrate

__all__ = [
    "Family",
    "RadialProfile",
    "mollifier",
    "near_extremal",
    "critical_exponent",
    "profile_eval",
    "radial_laplacian",
    "SidesResult",
    "functional_sides",
]


class Family(str, enum.Enum):
    MOLLIFIER = "Mollifier"
    NEAR_EXTREMAL = "NearExtremal"


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    s0 = t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    s1 = 30.0 * t * t * (1.0 + t * (-2.0 + t))
    s2 = 60.0 * t * (1.0 + t * (-3.0 + 2.0 * t))
    return s0, s1, s2


@dataclass(frozen=True)
class RadialProfile:
    """A compactly supported radial profile g with closed-form g' and g''.

    ``scale`` and ``dilation`` turn the base profile g0 into
    ``scale * g0(r / dilation)``.
    """

    family: Family
    R: float = 1.0
    gamma: float = 0.0
    eps: float = 0.0
    r_in: float = 0.0
    r_out: float = 0.0
    scale: float = 1.0
    dilation: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not self.dilation > 0:
            raise DomainError("dilation must be positive")
        if self.family is Family.MOLLIFIER:
            if not self.R > 0:
                raise DomainError("Mollifier needs R > 0")
        else:
            if not self.eps > 0:
                raise DomainError("NearExtremal needs eps > 0")
            if not 0 < self.r_in < self.r_out:
                raise DomainError("NearExtremal needs 0 < r_in < r_out")

    @property
    def support(self) -> tuple[float, float]:
        t = self.dilation
        if self.family is Family.MOLLIFIER:
            return 0.0, self.R * t
        return 0.5 * self.r_in * t, 2.0 * self.r_out * t

    @property
    def vanishes_near_origin(self) -> bool:
        return self.family is Family.NEAR_EXTREMAL

    def breakpoints(self) -> list[float]:
        """Points where the profile changes formula, plus a log-spaced grid."""
        t = self.dilation
        if self.family is Family.MOLLIFIER:
            return [0.5 * self.R * t]
        k = max(1, int(math.ceil((math.log2(self.r_out) - math.log2(self.r_in)))))
        grid = list(np.geomspace(self.r_in, self.r_out, k + 1) * t)
        return grid

    def with_scale(self, c: float) -> "RadialProfile":
        return _replace(self, scale=self.scale * c)

    def with_dilation(self, t: float) -> "RadialProfile":
        return _replace(self, dilation=self.dilation * t)

    def _base(self, s):
        if self.family is Family.MOLLIFIER:
            return _mollifier_base(s, self.R)
        return _near_extremal_base(s, -self.gamma + self.eps, self.r_in, self.r_out)

    def eval(self, r):
        """Return ``(g, g', g'')`` at ``r`` (scalar or array)."""
        r = np.asarray(r, dtype=float)
        t = self.dilation
        with np.errstate(over="ignore", invalid="ignore"):
            g, g1, g2 = self._base(r / t)
        c = self.scale
        return c * g, c * g1 / t, c * g2 / (t * t)

    def to_dict(self) -> dict:
        d = {"family": self.family.value}
        if self.family is Family.MOLLIFIER:
            d["R"] = self.R
        else:
            d.update(gamma=self.gamma, eps=self.eps, r_in=self.r_in, r_out=self.r_out)
        if self.scale != 1.0:
            d["scale"] = self.scale
        if self.dilation != 1.0:
            d["dilation"] = self.dilation
        return d


def _replace(profile, **kw):
    from dataclasses import replace

    return replace(profile, **kw)


def _mollifier_base(r, R):
    s = r / R
    inside = np.abs(s) < 1.0
    u = np.where(inside, 1.0 - s * s, 1.0)
    g = np.where(inside, np.exp(-1.0 / u), 0.0)
    # h = (log g)' ; g' = g h ; g'' = g (h^2 + h')
    h = -2.0 * r / (R * R * u * u)
    dh = -2.0 / (R * R * u * u) - 8.0 * r * r / (R**4 * u**3)
    g1 = np.where(inside, g * h, 0.0)
    g2 = np.where(inside, g * (h * h + dh), 0.0)
    return g, g1, g2


def _near_extremal_base(r, m, r_in, r_out):
    lo, hi = 0.5 * r_in, 2.0 * r_out
    inside = (r > lo) & (r < hi)
    rs = np.where(inside, r, 1.0)
    pw = rs**m
    pw1 = m * rs ** (m - 1.0)
    pw2 = m * (m - 1.0) * rs ** (m - 2.0)
    # cutoff phi: rises on [r_in/2, r_in], falls on [r_out, 2 r_out]
    w_in = r_in - lo
    a0, a1, a2 = _smoothstep((rs - lo) / w_in)
    b0, b1, b2 = _smoothstep((rs - r_out) / r_out)
    rising = rs < r_in
    falling = rs > r_out
    phi = np.where(rising, a0, np.where(falling, 1.0 - b0, 1.0))
    phi1 = np.where(rising, a1 / w_in, np.where(falling, -b1 / r_out, 0.0))
    phi2 = np.where(rising, a2 / w_in / w_in, np.where(falling, -b2 / r_out / r_out, 0.0))
    g = phi * pw
    g1 = phi1 * pw + phi * pw1
    g2 = phi2 * pw + 2.0 * phi1 * pw1 + phi * pw2
    z = np.zeros_like(g)
    return np.where(inside, g, z), np.where(inside, g1, z), np.where(inside, g2, z)


def mollifier(R: float = 1.0) -> RadialProfile:
    """The bump exp(-1/(1-(r/R)^2)) on [0, R)."""
    return RadialProfile(Family.MOLLIFIER, R=R)


def critical_exponent(case: InequalityCase) -> float:
    """Decay rate gamma of the scale-invariant power r^-gamma for ``case``.

    Both sides of the inequality are invariant under dilation only for this
    rate; it is the rate the near-extremal family imitates.
    """
    v = case.variant
    if v is Variant.HARDY_1D:
        return 1.0 / case.p
    if v.is_hardy:
        return (case.n - case.p) / case.p
    if v is Variant.RELLICH:
        return (case.n - 4.0) / 2.0
    return (case.n - 2.0 - 2.0 * case.a) / 2.0


def near_extremal(case_or_gamma, eps: float = 0.05, r_in: float = 1e-3, r_out: float = 1e3) -> RadialProfile:
    """phi(r) r^(-gamma + eps) with a quintic-smoothstep cutoff phi.

    ``case_or_gamma`` is either an :class:`InequalityCase` (gamma taken from
    :func:`critical_exponent`) or the exponent itself.
    """
    if isinstance(case_or_gamma, InequalityCase):
        gamma = critical_exponent(case_or_gamma)
    else:
        gamma = float(case_or_gamma)
    return RadialProfile(Family.NEAR_EXTREMAL, gamma=gamma, eps=eps, r_in=r_in, r_out=r_out)


def profile_eval(profile, r):
    """``(g, g', g'')`` at ``r``; zero outside the support."""
    return profile.eval(r)


def radial_laplacian(profile, r, n: int):
    """Laplacian g'' + (n-1) g'/r of the radial function u(x) = g(|x|).

    At r = 0 the limit n g''(0) is returned.
    """
    r = np.asarray(r, dtype=float)
    g, g1, g2 = profile.eval(r)
    safe = np.where(r > 0, r, 1.0)
    out = np.where(r > 0, g2 + (n - 1.0) * g1 / safe, n * g2)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SidesResult:
    lhs: float
    rhs: float
    lhs_error: float = 0.0
    rhs_error: float = 0.0
    evaluations: int = 0
    extra: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.lhs, self.rhs))


def _check_weight(profile, exponent, what):
    # profiles that do not vanish at 0 need exponent > -1 for r^exponent
    if not profile.vanishes_near_origin and exponent <= -1.0:
        raise IntegrabilityError(
            f"{what}: weight r^{exponent:g} is not integrable at 0 for a {profile.family.value} profile"
        )


def _radial_integral(func, profile, spec):
    lo, hi = profile.support
    singular = not profile.vanishes_near_origin
    s = QuadratureSpec(spec.rel_tol, spec.abs_tol, spec.max_subdivisions, singular_origin=singular)
    return integrate(func, lo, hi, s, points=profile.breakpoints())


def _weighted(x, p, r, w):
    """|x|^p r^w evaluated in log space so wide windows do not overflow."""
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        out = np.exp(p * np.log(np.where(ax > 0, ax, 1.0)) + w * np.log(r))
    return np.where(ax > 0, out, 0.0)


def functional_sides(case: InequalityCase, profile: RadialProfile, quad_spec: QuadratureSpec | None = None) -> SidesResult:
    """Both sides of ``case``'s inequality for u(x) = g(|x|), without the constant.

    Returns
    -------
    SidesResult
        Unpacks as ``(lhs, rhs)``.  For CKN variants the lhs is already
        raised to the power 2/p.
    """
    spec = quad_spec or QuadratureSpec()
    v, n, p = case.variant, case.n, case.p
    if profile.scale == 0.0:
        return SidesResult(0.0, 0.0)
    if v is Variant.HARDY_1D:
        return _hardy_1d_sides(p, profile, spec)
    if v is Variant.HARDY_SUPERCRITICAL and not profile.vanishes_near_origin:
        raise IntegrabilityError("p > n needs a profile supported away from the origin")

    omega = unit_sphere_area(n)
    if v.is_hardy:
        _check_weight(profile, n - 1.0 - p, "lhs")
        lhs_f = lambda r: _weighted(profile.eval(r)[0], p, r, n - 1.0 - p)
        rhs_f = lambda r: _weighted(profile.eval(r)[1], p, r, n - 1.0)
    elif v is Variant.RELLICH:
        _check_weight(profile, n - 5.0, "lhs")
        lhs_f = lambda r: _weighted(profile.eval(r)[0], 2.0, r, n - 5.0)
        rhs_f = lambda r: _weighted(radial_laplacian(profile, r, n), 2.0, r, n - 1.0)
    else:
        a, b = case.a, case.b
        _check_weight(profile, n - 1.0 - b * p, "lhs")
        lhs_f = lambda r: _weighted(profile.eval(r)[0], p, r, n - 1.0 - b * p)
        rhs_f = lambda r: _weighted(profile.eval(r)[1], 2.0, r, n - 1.0 - 2.0 * a)
    L = _radial_integral(lhs_f, profile, spec)
    Rr = _radial_integral(rhs_f, profile, spec)
    lhs, lerr = omega * L.value, omega * L.error
    if v.is_ckn:
        inner = lhs
        lhs = inner ** (2.0 / p)
        lerr = (2.0 / p) * lhs / inner * lerr if inner > 0 else lerr
        extra = {"lhs_inner": inner}
    else:
        extra = {}
    return SidesResult(lhs, omega * Rr.value, lerr, omega * Rr.error, L.evaluations + Rr.evaluations, extra)


def _hardy_1d_mesh(profile, panels):
    lo, hi = profile.support
    if profile.family is Family.MOLLIFIER:
        return np.linspace(lo, hi, panels + 1)
    # log-spaced interior, uniform cutoff bands
    t = profile.dilation
    r_in, r_out = profile.r_in * t, profile.r_out * t
    k = max(panels // 4, 1)
    return np.unique(np.concatenate([
        np.linspace(lo, r_in, k + 1),
        np.geomspace(r_in, r_out, 2 * k + 1),
        np.linspace(r_out, hi, k + 1),
    ]))


def _hardy_1d_pass(p, profile, mesh, nodes, weights):
    g = lambda x: profile.eval(x)[0]
    a, b = mesh[:-1], mesh[1:]
    h = b - a
    # eta at panel ends by cumulative composite Gauss-Legendre
    xs = a[:, None] + h[:, None] * nodes[None, :]
    panel_int = h * (g(xs) @ weights)
    eta_left = np.concatenate([[0.0], np.cumsum(panel_int)])[:-1]
    # eta at each interior node: integrate from the panel start to the node
    sub = a[:, None, None] + (xs - a[:, None])[:, :, None] * nodes[None, None, :]
    eta_nodes = eta_left[:, None] + (xs - a[:, None]) * (g(sub) @ weights)
    lhs = float(np.sum(h * (((eta_nodes / xs) ** p) @ weights)))
    rhs = float(np.sum(h * ((np.abs(g(xs)) ** p) @ weights)))
    eta_end = float(eta_left[-1] + panel_int[-1])
    # eta is constant past the support, so the tail of (eta/x)^p is exact
    lhs += eta_end**p * mesh[-1] ** (1.0 - p) / (p - 1.0)
    return lhs, rhs, xs.size * (1 + nodes.size)


def _hardy_1d_sides(p, profile, spec):
    if profile.scale < 0:
        raise DomainError("Hardy1D needs a nonnegative profile")
    nodes, weights = gauss_legendre(10)
    panels = 16
    prev = None
    evals = 0
    while True:
        mesh = _hardy_1d_mesh(profile, panels)
        lhs, rhs, ne = _hardy_1d_pass(p, profile, mesh, nodes, weights)
        evals += ne
        if prev is not None:
            dl = abs(lhs - prev[0])
            dr = abs(rhs - prev[1])
            if dl <= max(spec.rel_tol * abs(lhs), spec.abs_tol) and dr <= max(spec.rel_tol * abs(rhs), spec.abs_tol):
                return SidesResult(lhs, rhs, dl, dr, evals, {"panels": len(mesh) - 1})
        if len(mesh) - 1 > spec.max_subdivisions:
            raise ToleranceNotMet("Hardy1D mesh refinement exhausted the subdivision budget")
        prev = (lhs, rhs)
        panels *= 2
