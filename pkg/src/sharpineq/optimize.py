"""Young-parameter objectives and their numerical minimisation.

Every bound in the Hardy/CKN/Rellich proofs comes with a free Young
parameter; the best constant is the minimum of an explicit objective over
that parameter.  This module builds those objectives, minimises them
numerically and compares against the closed forms.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize as _sopt

from .constants import (
    ckn_edge_plus1_constant,
    hardy_sharp_constant,
    rellich_sharp_constant,
    sobolev_constant,
)
from .core import InequalityCase, Variant
from .exceptions import DomainError, NoFeasiblePoint, NonConvergence

__all__ = [
    "RellichVariant",
    "Objective",
    "OptimizationResult",
    "make_objective",
    "minimize_scalar",
    "minimize_bivariate",
    "crosscheck_closed_forms",
    "grid_minimum",
]

INF = math.inf


class RellichVariant(str, enum.Enum):
    """Prefactor of the Rellich objective P: ``M lam^2/2`` or the literal ``M lam/2``."""

    SQUARED = "squared"
    LITERAL = "literal"


@dataclass(frozen=True)
class Objective:
    """A closed-form objective returning ``inf`` where its denominator is <= 0."""

    evaluate: Callable[..., float]
    dim: int
    feasible_region: str
    params: InequalityCase
    name: str
    seed: float | tuple = 1.0
    extra: dict = field(default_factory=dict)

    def __call__(self, *x):
        return self.evaluate(*x)


@dataclass
class OptimizationResult:
    argmin: tuple
    min_value: float
    evaluations: int
    converged: bool
    closed_form_argmin: tuple | None = None
    closed_form_value: float | None = None
    discrepancy: str | None = None
    hessian_eigenvalues: tuple | None = None
    hessian_det: float | None = None
    objective: str = ""

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "argmin": list(self.argmin),
            "min_value": self.min_value,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "closed_form_argmin": None if self.closed_form_argmin is None else list(self.closed_form_argmin),
            "closed_form_value": self.closed_form_value,
            "discrepancy": self.discrepancy,
            "hessian_eigenvalues": None if self.hessian_eigenvalues is None else list(self.hessian_eigenvalues),
            "hessian_det": self.hessian_det,
        }


def _overflow_is_infeasible(f):
    # powers overflow only far outside the feasible region
    @functools.wraps(f)
    def g(*x):
        try:
            return f(*x)
        except OverflowError:
            return INF
    return g


def _guard(den, num):
    if not den > 0:
        return INF
    return num / den


def make_objective(case: InequalityCase, rellich: RellichVariant | str = RellichVariant.SQUARED,
                   sobolev: str = "talenti") -> Objective:
    """Build the Young-parameter objective belonging to ``case``.

    ``rellich`` picks the prefactor of P(lam, mu; M) for Rellich cases;
    ``sobolev`` picks the K(n, 2) convention used by the b = a objectives.
    CknInterpolated has no objective of its own (its constant is a product
    of the two edge constants).
    """
    v, n, p = case.variant, case.n, case.p
    if v in (Variant.HARDY_SUBCRITICAL, Variant.HARDY_SUPERCRITICAL):
        q = case.q
        kappa = q * abs(n - p) ** q

        @_overflow_is_infeasible
        def f(lam):
            if not lam > 0:
                return INF
            return _guard(lam**p * (kappa - lam**q * p), kappa)

        return Objective(f, 1, f"0 < lam < (kappa/p)^(1/q), kappa = {kappa!r}", case,
                         "hardy f(lam;n,p,q)", seed=(kappa / p) ** (1.0 / q) / 2.0,
                         extra={"kappa": kappa, "q": q})
    if v is Variant.HARDY_1D:
        q = case.q

        @_overflow_is_infeasible
        def f(lam):
            if not lam > 0:
                return INF
            return _guard((p - 1.0) * lam**p * (1.0 - lam**q), 1.0)

        return Objective(f, 1, "0 < lam < 1", case, "hardy1d f(lam)", seed=0.5, extra={"q": q})
    if v is Variant.CKN_EDGE_B_EQUALS_A_PLUS_1:
        kappa = (n - 2.0 - 2.0 * case.a) ** 2

        @_overflow_is_infeasible
        def f(alpha):
            if not alpha > 0:
                return INF
            return _guard(alpha * alpha * kappa - alpha**4, kappa)

        return Objective(f, 1, f"0 < alpha < sqrt(kappa), kappa = {kappa!r}", case,
                         "ckn f(alpha;n,a)", seed=math.sqrt(kappa) / 2.0, extra={"kappa": kappa})
    if v is Variant.CKN_EDGE_B_EQUALS_A:
        a = case.a
        c1 = ckn_edge_plus1_constant(n, a).value
        k2 = sobolev_constant(n, 2.0, sobolev) ** 2
        sign = 1.0 if a >= 0 else -1.0

        @_overflow_is_infeasible
        def f(lam):
            if not lam > 0:
                return INF
            return k2 * (1.0 + a * a * c1 + sign * a * (lam * lam * c1 + lam**-2))

        name = "ckn f_+(lam;n,a)" if a >= 0 else "ckn f_-(lam;n,a)"
        return Objective(f, 1, "lam > 0", case, name, seed=1.0,
                         extra={"C_a+1": c1, "K2": k2, "sobolev": sobolev})
    if v is Variant.RELLICH:
        rv = RellichVariant(rellich)
        M = 4.0 / (n - 4.0) ** 2
        power = 2.0 if rv is RellichVariant.SQUARED else 1.0

        @_overflow_is_infeasible
        def P(lam, mu):
            if not (lam > 0 and mu > 0):
                return INF
            den = 1.0 - M / (2.0 * lam * lam) - M / (mu * mu) - mu * mu
            return _guard(den, M * lam**power / 2.0)

        return Objective(P, 2, "1 - M/(2 lam^2) - M/mu^2 - mu^2 > 0", case,
                         f"rellich P(lam,mu;M) [{rv.value}]", seed=(1.0, M**0.25),
                         extra={"M": M, "variant": rv.value})
    raise DomainError(f"no objective for variant {v.value}")


def _auto_bracket(f, seed):
    """Geometric scan lam = 2^k seed, k in [-40, 40]; best finite triple."""
    xs = [seed * 2.0**k for k in range(-40, 41)]
    ys = [f(x) for x in xs]
    finite = [i for i, y in enumerate(ys) if math.isfinite(y)]
    if not finite:
        raise NoFeasiblePoint("objective is +inf on the whole geometric scan")
    i = min(finite, key=lambda j: (ys[j], xs[j]))
    lo = xs[i - 1] if i > 0 else xs[i] / 2.0
    hi = xs[i + 1] if i < len(xs) - 1 else xs[i] * 2.0
    return lo, xs[i], hi, len(xs)


def _second_difference(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def minimize_scalar(objective, bracket=None, tol: float = 1e-10, max_evaluations: int = 10_000) -> OptimizationResult:
    """Minimise a univariate objective.

    Brent's method on the bracket (found by a geometric scan when not
    given), followed by bisection on the sign of a central-difference
    derivative, which locates a flat minimum far more sharply than function
    comparisons can.
    """
    f = objective.evaluate if isinstance(objective, Objective) else objective
    seed = objective.seed if isinstance(objective, Objective) else 1.0
    count = [0]

    def fc(x):
        count[0] += 1
        if count[0] > max_evaluations:
            raise NonConvergence(f"evaluation budget {max_evaluations} exhausted")
        return f(x)

    if bracket is None:
        lo, mid, hi, _ = _auto_bracket(fc, seed)
    else:
        lo, hi = float(bracket[0]), float(bracket[-1])
        mid = float(bracket[1]) if len(bracket) == 3 else None
    if mid is not None and fc(mid) < min(fc(lo), fc(hi)):
        res = _sopt.minimize_scalar(fc, bracket=(lo, mid, hi), method="brent",
                                    options={"xtol": 1e-12, "maxiter": max_evaluations})
    else:
        res = _sopt.minimize_scalar(fc, bounds=(lo, hi), method="bounded",
                                    options={"xatol": 1e-12, "maxiter": max_evaluations})
    x = float(res.x)
    x = _polish(fc, x, tol)
    fx = fc(x)
    if not math.isfinite(fx):
        raise NoFeasiblePoint("minimiser landed outside the feasible region")
    h = 1e-4 * max(abs(x), 1e-8)
    curv = _second_difference(fc, x, h)
    converged = bool(res.success) and (curv >= 0 or not math.isfinite(curv))
    name = objective.name if isinstance(objective, Objective) else ""
    return OptimizationResult((x,), fx, count[0], converged, objective=name,
                              hessian_eigenvalues=(curv,), hessian_det=curv)


def _polish(f, x, tol):
    """Refine a local minimiser by bisecting the sign of a central difference."""
    h = 1e-6 * max(abs(x), 1e-8)

    def d(t):
        return f(t + h) - f(t - h)

    width = max(1e-4 * abs(x), 10 * tol)
    a, b = x - width, x + width
    if a <= 0:
        a = x / 2.0
    da, db = d(a), d(b)
    if not (math.isfinite(da) and math.isfinite(db)) or not (da < 0 < db):
        return x
    while b - a > max(tol * 1e-2, 4 * np.spacing(x)):
        m = 0.5 * (a + b)
        dm = d(m)
        if not math.isfinite(dm):
            return x
        if dm < 0:
            a = m
        elif dm > 0:
            b = m
        else:
            return m
    return 0.5 * (a + b)


def _feasible_seeds(f, count=8):
    """Deterministic scattered feasible starting points for a 2D objective."""
    grid = np.geomspace(1e-3, 1e3, 61)
    pts = [(x, y) for x in grid for y in grid if math.isfinite(f(x, y))]
    if not pts:
        raise NoFeasiblePoint("feasible region of the bivariate objective is empty")
    pts.sort(key=lambda xy: (f(*xy), xy[0]))
    # spread: take the best and then points far (in log space) from those taken
    chosen = [pts[0]]
    logs = np.log(np.array(pts))
    while len(chosen) < min(count, len(pts)):
        cl = np.log(np.array(chosen))
        dist = np.min(np.linalg.norm(logs[:, None, :] - cl[None, :, :], axis=2), axis=1)
        chosen.append(pts[int(np.argmax(dist))])
    return chosen


def _hessian(f, x, y):
    hx = 1e-4 * x
    hy = 1e-4 * y
    f0 = f(x, y)
    fxx = (f(x + hx, y) - 2 * f0 + f(x - hx, y)) / hx**2
    fyy = (f(x, y + hy) - 2 * f0 + f(x, y - hy)) / hy**2
    fxy = (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4 * hx * hy)
    return np.array([[fxx, fxy], [fxy, fyy]])


def minimize_bivariate(objective, init=None, tol: float = 1e-10, max_evaluations: int = 10_000,
                       restarts: int = 8) -> OptimizationResult:
    """Nelder-Mead with restarts from ``restarts`` scattered feasible seeds.

    The best result wins, ties broken by the smaller first coordinate.  The
    finite-difference Hessian at the winner is reported (determinant and
    eigenvalues).
    """
    f = objective.evaluate if isinstance(objective, Objective) else objective
    count = [0]

    def fc(xy):
        count[0] += 1
        if count[0] > max_evaluations * (restarts + 1):
            raise NonConvergence("evaluation budget exhausted")
        return f(float(xy[0]), float(xy[1]))

    seeds = [tuple(init)] if init is not None else []
    if not seeds or not math.isfinite(f(*seeds[0])):
        seeds = _feasible_seeds(f, restarts)
    best = None
    any_ok = False
    for s in seeds:
        res = _sopt.minimize(fc, np.array(s, dtype=float), method="Nelder-Mead",
                             options={"xatol": tol, "fatol": 1e-15, "maxfev": max_evaluations})
        any_ok |= bool(res.success)
        key = (float(res.fun), float(res.x[0]))
        if best is None or key < best[0]:
            best = (key, res)
    res = best[1]
    x, y = (float(v) for v in res.x)
    H = _hessian(f, x, y)
    eig = tuple(float(e) for e in np.linalg.eigvalsh(H)) if np.all(np.isfinite(H)) else None
    name = objective.name if isinstance(objective, Objective) else ""
    return OptimizationResult((x, y), float(res.fun), count[0], bool(res.success), objective=name,
                              hessian_eigenvalues=eig, hessian_det=float(np.linalg.det(H)))


def grid_minimum(objective, lam_range=(1e-3, 1e3), mu_range=(1e-3, 1e3), size=801, levels=4):
    """Independent oracle: nested dense log-grid search of a 2D objective."""
    f = np.vectorize(objective.evaluate if isinstance(objective, Objective) else objective)
    lo1, hi1 = lam_range
    lo2, hi2 = mu_range
    best = (math.inf, None)
    for _ in range(levels):
        L = np.geomspace(lo1, hi1, size)
        U = np.geomspace(lo2, hi2, size)
        Z = f(L[:, None], U[None, :])
        i, j = np.unravel_index(np.argmin(Z), Z.shape)
        if not math.isfinite(Z[i, j]):
            raise NoFeasiblePoint("grid search found no feasible point")
        best = (float(Z[i, j]), (float(L[i]), float(U[j])))
        lo1, hi1 = L[max(i - 2, 0)], L[min(i + 2, size - 1)]
        lo2, hi2 = U[max(j - 2, 0)], U[min(j + 2, size - 1)]
    return best


def _closed_form(case, objective):
    """Closed-form minimiser(s) and minimum for ``case``."""
    v, n, p = case.variant, case.n, case.p
    if v in (Variant.HARDY_SUBCRITICAL, Variant.HARDY_SUPERCRITICAL):
        kappa, q = objective.extra["kappa"], objective.extra["q"]
        return ((kappa / (p + q)) ** (1.0 / q),), hardy_sharp_constant(case).value
    if v is Variant.HARDY_1D:
        q = objective.extra["q"]
        return (q**-q,), hardy_sharp_constant(case).value
    if v is Variant.CKN_EDGE_B_EQUALS_A_PLUS_1:
        return (math.sqrt(objective.extra["kappa"] / 2.0),), ckn_edge_plus1_constant(n, case.a).value
    if v is Variant.CKN_EDGE_B_EQUALS_A:
        c1, k2, a = objective.extra["C_a+1"], objective.extra["K2"], case.a
        sign = 1.0 if a >= 0 else -1.0
        arg = None if a == 0 else ((1.0 / c1) ** 0.25,)
        return arg, k2 * (1.0 + sign * a * math.sqrt(c1)) ** 2
    if v is Variant.RELLICH:
        return None, rellich_sharp_constant(n).value
    raise DomainError(f"no closed form for variant {v.value}")


def crosscheck_closed_forms(case: InequalityCase, tol: float = 1e-8,
                            rellich: RellichVariant | str = RellichVariant.SQUARED,
                            sobolev: str = "talenti") -> OptimizationResult:
    """Minimise the case's objective and compare with the closed forms.

    ``tol`` is relative for values and absolute for argmins.  Mismatches are
    described in ``discrepancy``; they are expected for Hardy1D (stated
    minimiser q^-q, true q^-1/q) and for Rellich (stated value
    16/(n^2 (n-4)^2)).
    """
    obj = make_objective(case, rellich=rellich, sobolev=sobolev)
    if obj.dim == 1:
        res = minimize_scalar(obj)
    else:
        res = minimize_bivariate(obj)
    arg, val = _closed_form(case, obj)
    res.closed_form_argmin = arg
    res.closed_form_value = val
    notes = []
    if arg is not None:
        for i, (x_num, x_cf) in enumerate(zip(res.argmin, arg)):
            if abs(x_num - x_cf) > tol * max(1.0, abs(x_cf)):
                notes.append(f"argmin[{i}] numeric {x_num!r} != closed form {x_cf!r}"
                             f" (objective at closed-form point {obj.evaluate(*arg)!r})")
    if abs(res.min_value - val) > tol * abs(val):
        notes.append(f"min value numeric {res.min_value!r} != closed form {val!r}")
    res.discrepancy = "; ".join(notes) if notes else None
    return res
