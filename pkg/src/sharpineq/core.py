"""Inequality cases, their parameter domains and the CKN exponent relations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import DomainError

__all__ = [
    "Variant",
    "InequalityCase",
    "InterpolationExponents",
    "make_case",
    "ckn_exponent",
    "b_from_theta",
    "theta_from_b",
    "interpolation_exponents",
    "sobolev_conjugate",
    "young_conjugate",
]


class Variant(str, enum.Enum):
    HARDY_SUBCRITICAL = "HardySubcritical"
    HARDY_SUPERCRITICAL = "HardySupercritical"
    HARDY_1D = "Hardy1D"
    CKN_EDGE_B_EQUALS_A_PLUS_1 = "CknEdgeBequalsAplus1"
    CKN_EDGE_B_EQUALS_A = "CknEdgeBequalsA"
    CKN_INTERPOLATED = "CknInterpolated"
    RELLICH = "Rellich"

    @property
    def is_hardy(self) -> bool:
        return self in (Variant.HARDY_SUBCRITICAL, Variant.HARDY_SUPERCRITICAL, Variant.HARDY_1D)

    @property
    def is_ckn(self) -> bool:
        return self in (
            Variant.CKN_EDGE_B_EQUALS_A_PLUS_1,
            Variant.CKN_EDGE_B_EQUALS_A,
            Variant.CKN_INTERPOLATED,
        )


@dataclass(frozen=True)
class InequalityCase:
    """A validated parameter point for one inequality variant.

    Build instances with :func:`make_case`; the constructor re-checks the
    domain so a case violating its hypotheses cannot exist.
    """

    variant: Variant
    n: int
    p: float
    a: float | None = None
    b: float | None = None
    theta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        _check_domain(self)

    @property
    def q(self) -> float:
        return young_conjugate(self.p)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "n": self.n,
            "p": self.p,
            "a": self.a,
            "b": self.b,
            "theta": self.theta,
        }


@dataclass(frozen=True)
class InterpolationExponents:
    alpha: float
    beta: float
    theta: float


def young_conjugate(p: float) -> float:
    """Return q with 1/p + 1/q = 1."""
    if not p > 1:
        raise DomainError("p must satisfy p > 1")
    return p / (p - 1.0)


def sobolev_conjugate(n: int, p: float = 2.0) -> float:
    """Return p* = n p / (n - p)."""
    if not 1 <= p < n:
        raise DomainError("p must satisfy 1 <= p < n")
    return n * p / (n - p)


def ckn_exponent(n: int, a: float, b: float) -> float:
    """The CKN integrability exponent p = 2n / (n - 2 + 2(b - a))."""
    return 2.0 * n / (n - 2.0 + 2.0 * (b - a))


def b_from_theta(n: int, a: float, theta: float) -> float:
    """Forward map b = a + 1 - n*theta / (n - 2 + 2*theta)."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError("theta must lie in [0, 1]")
    # offset first so theta = 1 gives b = a exactly
    d = min(max(1.0 - n * theta / (n - 2.0 + 2.0 * theta), 0.0), 1.0)
    return a + d


def theta_from_b(n: int, a: float, b: float) -> float:
    """Invert :func:`b_from_theta` for theta in [0, 1].

    With d = a + 1 - b the forward map reads d (n - 2 + 2 theta) = n theta,
    which is linear in theta.
    """
    _check_ckn_base(n, a)
    d = a + 1.0 - b
    if not -1e-15 <= d <= 1.0 + 1e-15:
        raise DomainError("b must satisfy a <= b <= a+1")
    d = min(max(d, 0.0), 1.0)
    theta = d * (n - 2.0) / (n - 2.0 * d)
    return min(max(theta, 0.0), 1.0)


def interpolation_exponents(case: InequalityCase) -> InterpolationExponents:
    """Exponents (alpha, beta) on the b=a and b=a+1 constants."""
    if case.variant is not Variant.CKN_INTERPOLATED:
        raise DomainError(f"interpolation exponents need a CknInterpolated case, got {case.variant.value}")
    n, p, theta = case.n, case.p, case.theta
    alpha = 2.0 * n * theta / ((n - 2.0) * p)
    beta = 2.0 * (1.0 - theta) / p
    return InterpolationExponents(alpha=alpha, beta=beta, theta=theta)


def _finite(name, x):
    if x is None:
        raise DomainError(f"{name} is required for this variant")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be a finite real")
    return x


def _check_ckn_base(n, a):
    if n < 3:
        raise DomainError("n must satisfy n >= 3")
    if not a < (n - 2) / 2.0:
        raise DomainError("a must satisfy a < (n-2)/2")


def _check_domain(case: InequalityCase) -> None:
    v, n, p = case.variant, case.n, case.p
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError("n must be a positive integer")
    _finite("p", p)
    if v is Variant.HARDY_SUBCRITICAL:
        if not 1 < p < n:
            raise DomainError("p must satisfy 1 < p < n")
    elif v is Variant.HARDY_SUPERCRITICAL:
        if not p > n > 1:
            raise DomainError("p must satisfy p > n > 1")
    elif v is Variant.HARDY_1D:
        if n != 1:
            raise DomainError("Hardy1D fixes n = 1")
        if not p > 1:
            raise DomainError("p must satisfy p > 1")
    elif v is Variant.RELLICH:
        if not n > 4:
            raise DomainError("n>4 required")
        if p != 2:
            raise DomainError("Rellich fixes p = 2")
    else:
        a = _finite("a", case.a)
        b = _finite("b", case.b)
        theta = _finite("theta", case.theta)
        _check_ckn_base(n, a)
        if v is Variant.CKN_EDGE_B_EQUALS_A_PLUS_1 and b != a + 1:
            raise DomainError("CknEdgeBequalsAplus1 fixes b = a+1")
        if v is Variant.CKN_EDGE_B_EQUALS_A and b != a:
            raise DomainError("CknEdgeBequalsA fixes b = a")
        if not a <= b <= a + 1:
            raise DomainError("b must satisfy a <= b <= a+1")
        if not 0.0 <= theta <= 1.0:
            raise DomainError("theta must lie in [0, 1]")
        if not math.isclose(p, ckn_exponent(n, a, b), rel_tol=1e-12):
            raise DomainError("p must equal 2n/(n-2+2(b-a))")
        if not math.isclose(b, b_from_theta(n, a, theta), rel_tol=1e-12, abs_tol=1e-12):
            raise DomainError("theta inconsistent with b")


def make_case(variant, n, p=None, a=None, b=None, theta=None) -> InequalityCase:
    """Validate raw parameters and build an :class:`InequalityCase`.

    For CKN variants ``p`` is derived from ``(n, a, b)`` and ``theta`` from
    ``b``; for CknInterpolated either ``b`` or ``theta`` may be given.
    Rellich fixes ``p = 2`` and Hardy1D fixes ``n = 1``.
    """
    v = Variant(variant)
    if not isinstance(n, int) or isinstance(n, bool):
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        else:
            raise DomainError("n must be a positive integer")
    if v is Variant.RELLICH:
        if p is not None and p != 2:
            raise DomainError("Rellich fixes p = 2")
        return InequalityCase(v, n, 2.0)
    if v.is_hardy:
        return InequalityCase(v, n, _finite("p", p))

    a = _finite("a", a)
    _check_ckn_base(n, a)
    if v is Variant.CKN_EDGE_B_EQUALS_A_PLUS_1:
        if b is not None and float(b) != a + 1:
            raise DomainError("CknEdgeBequalsAplus1 fixes b = a+1")
        b, theta = a + 1.0, 0.0
    elif v is Variant.CKN_EDGE_B_EQUALS_A:
        if b is not None and float(b) != a:
            raise DomainError("CknEdgeBequalsA fixes b = a")
        b, theta = a, 1.0
    else:
        if b is None and theta is None:
            raise DomainError("CknInterpolated needs b or theta")
        if b is None:
            theta = _finite("theta", theta)
            b = b_from_theta(n, a, theta)
        else:
            b = _finite("b", b)
            t = theta_from_b(n, a, b)
            if theta is not None and not math.isclose(float(theta), t, abs_tol=1e-12):
                raise DomainError("theta inconsistent with b")
            theta = t
    cp = ckn_exponent(n, a, b)
    if p is not None and not math.isclose(float(p), cp, rel_tol=1e-12):
        raise DomainError("p must equal 2n/(n-2+2(b-a))")
    return InequalityCase(v, n, cp, a, b, theta)
