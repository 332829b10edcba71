"""Sharp constants of the Hardy, CKN, Rellich and Sobolev inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    InequalityCase,
    Variant,
    interpolation_exponents,
    make_case,
)
from .exceptions import DomainError

__all__ = [
    "SharpConstant",
    "gamma",
    "unit_sphere_area",
    "sobolev_sharp_constant",
    "talenti_constant",
    "sobolev_constant",
    "hardy_sharp_constant",
    "ckn_edge_plus1_constant",
    "ckn_edge_equal_constant",
    "ckn_interpolated_constant",
    "rellich_sharp_constant",
    "sharp_constant",
]


@dataclass(frozen=True)
class SharpConstant:
    value: float
    case: InequalityCase
    provenance: str

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise DomainError(f"constant must be positive and finite, got {self.value!r}")

    def to_dict(self) -> dict:
        return {"value": self.value, "provenance": self.provenance, "case": self.case.to_dict()}


def gamma(s: float) -> float:
    """Gamma function for s > 0.

    Backed by the C library's ``tgamma`` via :func:`math.gamma`, which is
    accurate to a few ulp on the range used here.
    """
    s = float(s)
    if not s > 0:
        raise DomainError("gamma needs s > 0")
    return math.gamma(s)


def unit_sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2)."""
    if n < 1:
        raise DomainError("n must satisfy n >= 1")
    return 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)


def sobolev_sharp_constant(n: int, p: float) -> float:
    r"""Evaluate K(n, p) for 1 <= p < n.

    .. math::

        K = \frac{1}{2^{1/n}\sqrt{\pi}\,n}
            \left(\frac{p-1}{n-p}\right)^{1-1/p}
            \left(\frac{p}{p-1}\right)^{1/n}
            \left(\frac{\Gamma(n/2)\Gamma(n)}{\Gamma(n/p)\Gamma(n(1-1/p))}\right)^{1/n}

    At p = 1 the first bracket has exponent 0 (value 1), while
    (p/(p-1))^{1/n} and Gamma(n(1-1/p)) both blow up; their quotient tends
    to n^{1/n}, since (p/(p-1)) / Gamma(x) = n / Gamma(x+1) for x = n(p-1)/p.
    """
    if not 1 <= p < n:
        raise DomainError("p must satisfy 1 <= p < n")
    pre = 1.0 / (2.0 ** (1.0 / n) * math.sqrt(math.pi) * n)
    if p == 1:
        return pre * (n * gamma(n / 2.0)) ** (1.0 / n)
    ratio = ((p - 1.0) / (n - p)) ** (1.0 - 1.0 / p)
    conj = (p / (p - 1.0)) ** (1.0 / n)
    gam = gamma(n / 2.0) * gamma(float(n)) / (gamma(n / p) * gamma(n * (1.0 - 1.0 / p)))
    return pre * ratio * conj * gam ** (1.0 / n)


def talenti_constant(n: int, p: float) -> float:
    """Classical sharp Sobolev constant (Aubin-Talenti) for 1 < p < n.

    Differs from :func:`sobolev_sharp_constant` by the factor n^(1 - 1/p):
    the literal K expression carries 1/n where the classical one has n^(-1/p).
    """
    if not 1 < p < n:
        raise DomainError("p must satisfy 1 < p < n")
    return sobolev_sharp_constant(n, p) * n ** (1.0 - 1.0 / p)


SOBOLEV_CONVENTIONS = ("talenti", "literal")


def sobolev_constant(n: int, p: float, convention: str = "talenti") -> float:
    """K(n, p) under the chosen convention, ``"talenti"`` or ``"literal"``
    (:func:`sobolev_sharp_constant` as written)."""
    if convention == "talenti":
        return talenti_constant(n, p)
    if convention == "literal":
        return sobolev_sharp_constant(n, p)
    raise DomainError(f"unknown Sobolev convention {convention!r}")


def hardy_sharp_constant(case: InequalityCase) -> SharpConstant:
    """(p/(n-p))^p, (p/(p-n))^p or (p/(p-1))^p depending on the variant."""
    p, n = case.p, case.n
    if case.variant is Variant.HARDY_SUBCRITICAL:
        return SharpConstant((p / (n - p)) ** p, case, "Hardy 1<p<n: (p/(n-p))^p")
    if case.variant is Variant.HARDY_SUPERCRITICAL:
        return SharpConstant((p / (p - n)) ** p, case, "Hardy p>n>1: (p/(p-n))^p")
    if case.variant is Variant.HARDY_1D:
        return SharpConstant((p / (p - 1.0)) ** p, case, "Hardy 1D: (p/(p-1))^p")
    raise DomainError(f"not a Hardy variant: {case.variant.value}")


def ckn_edge_plus1_constant(n: int, a: float) -> SharpConstant:
    """C_{a+1} = 4 / (n-2-2a)^2, the sharp constant for b = a+1."""
    case = make_case(Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, n, a=a)
    return SharpConstant(4.0 / (n - 2.0 - 2.0 * a) ** 2, case, "CKN b=a+1: 4/(n-2-2a)^2")


def ckn_edge_equal_constant(n: int, a: float, sobolev: str = "talenti") -> SharpConstant:
    """C_{a+} or C_{a-} for b = a.

    Both branches carry K(n, 2)^2; a >= 0 uses ((n-2)/(n-2-2a))^2 and a <= 0
    uses ((n-2-4a)/(n-2-2a))^2. The two agree at a = 0.

    With ``sobolev="literal"`` the constant is too small by a factor n and
    the inequality fails for ordinary test functions; see
    :func:`talenti_constant`.
    """
    case = make_case(Variant.CKN_EDGE_B_EQUALS_A, n, a=a)
    k2 = sobolev_constant(n, 2.0, sobolev) ** 2
    den = n - 2.0 - 2.0 * a
    if a >= 0:
        return SharpConstant(k2 * ((n - 2.0) / den) ** 2, case, f"CKN b=a, a>=0: K(n,2)^2 ((n-2)/(n-2-2a))^2 [{sobolev} K]")
    return SharpConstant(k2 * ((n - 2.0 - 4.0 * a) / den) ** 2, case, f"CKN b=a, a<=0: K(n,2)^2 ((n-2-4a)/(n-2-2a))^2 [{sobolev} K]")


def ckn_interpolated_constant(case: InequalityCase, sobolev: str = "talenti") -> SharpConstant:
    """C_{a+-}^alpha * C_{a+1}^beta for a CknInterpolated case."""
    ex = interpolation_exponents(case)
    c_eq = ckn_edge_equal_constant(case.n, case.a, sobolev).value
    c_p1 = ckn_edge_plus1_constant(case.n, case.a).value
    return SharpConstant(c_eq**ex.alpha * c_p1**ex.beta, case, f"CKN interpolated: C_{{a+-}}^alpha C_{{a+1}}^beta [{sobolev} K]")


def rellich_sharp_constant(n: int) -> SharpConstant:
    """(4/(n(n-4)))^2 for n > 4."""
    case = make_case(Variant.RELLICH, n)
    return SharpConstant(16.0 / (n * n * (n - 4.0) ** 2), case, "Rellich: (4/(n(n-4)))^2")


def sharp_constant(case: InequalityCase, sobolev: str = "talenti") -> SharpConstant:
    """Dispatch to the constant belonging to ``case.variant``."""
    v = case.variant
    if v.is_hardy:
        return hardy_sharp_constant(case)
    if v is Variant.CKN_EDGE_B_EQUALS_A_PLUS_1:
        c = ckn_edge_plus1_constant(case.n, case.a)
    elif v is Variant.CKN_EDGE_B_EQUALS_A:
        c = ckn_edge_equal_constant(case.n, case.a, sobolev)
    elif v is Variant.CKN_INTERPOLATED:
        return ckn_interpolated_constant(case, sobolev)
    else:
        c = rellich_sharp_constant(case.n)
    return SharpConstant(c.value, case, c.provenance)
