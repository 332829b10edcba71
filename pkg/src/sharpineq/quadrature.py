"""Adaptive 1D quadrature with singular-origin grading, and a Monte Carlo oracle.

The 1D integrator is a globally adaptive Gauss-Kronrod (7, 15) scheme: the
panel with the largest error estimate is bisected until the summed estimate
meets ``max(rel_tol * |I|, abs_tol)``.  Integrable power singularities at the
lower limit are handled by a geometric mesh ``lo + h 2^-k`` whose tail is
closed off by a geometric-series extrapolation.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError, NonFinite, ToleranceNotMet

__all__ = [
    "QuadratureSpec",
    "McSpec",
    "QuadResult",
    "integrate",
    "gauss_legendre",
    "monte_carlo_weighted",
]

# Kronrod 15-point nodes on [-1, 1] (non-negative half), Kronrod and Gauss weights
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, center)
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[13, 11, 9]] = _WG[:3]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**16
    singular_origin: bool = False

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "singular_origin": self.singular_origin,
        }


@dataclass(frozen=True)
class McSpec:
    samples: int = 10**6
    seed: int = 0
    radius_cap: float = 1.0
    substreams: int = 16
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("samples must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if not self.radius_cap > 0:
            raise DomainError("radius_cap must be positive")
        if self.substreams < 1 or self.workers < 1:
            raise DomainError("substreams and workers must be positive")

    def to_dict(self) -> dict:
        return {"samples": self.samples, "seed": self.seed, "radius_cap": self.radius_cap,
                "substreams": self.substreams}


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int
    evaluations: int

    def __iter__(self):
        # allows ``value, err = integrate(...)``
        return iter((self.value, self.error))


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c + h * _NODES
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"integrand returned non-finite values on [{a!r}, {b!r}]")
    k = h * float(_KW @ y)
    g = h * float(_GW @ y)
    return k, abs(k - g)


def _adaptive(f, breakpoints, spec, budget):
    """Globally adaptive GK15 over consecutive ``breakpoints``."""
    heap = []
    total = 0.0
    err = 0.0
    nev = 0
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b <= a:
            continue
        k, e = _gk15(f, a, b)
        nev += 15
        total += k
        err += e
        heapq.heappush(heap, (-e, a, b, k))
    panels = len(heap)
    while heap and err > max(spec.rel_tol * abs(total), spec.abs_tol):
        if panels >= budget:
            raise ToleranceNotMet(
                f"error estimate {err:.3e} above tolerance after {panels} subdivisions"
            )
        ne, a, b, k = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise ToleranceNotMet("panel width reached machine resolution")
        k1, e1 = _gk15(f, a, m)
        k2, e2 = _gk15(f, m, b)
        nev += 30
        total += k1 + k2 - k
        err += e1 + e2 + ne
        heapq.heappush(heap, (-e1, a, m, k1))
        heapq.heappush(heap, (-e2, m, b, k2))
        panels += 1
    # re-sum to shed the drift of the running updates
    if heap:
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)
    return total, err, panels, nev


def _graded(f, lo, hi, spec, points):
    """Integrate with geometric grading towards ``lo``.

    Panels [lo + h 2^-(k+1), lo + h 2^-k] are added until the geometric
    remainder estimate is negligible.
    """
    h = hi - lo
    first = lo + 0.5 * h
    inner = sorted(x for x in points if lo < x < first)
    outer = [first] + sorted(x for x in points if first < x < hi) + [hi]
    total, err, panels, nev = _adaptive(f, outer, spec, spec.max_subdivisions)
    parts = []
    k = 1
    upper = first
    while True:
        lower = lo + h * 2.0 ** -(k + 1)
        if lower <= lo or k > 1100:
            rem = 0.0
            break
        bps = [lower] + [x for x in inner if lower < x < upper] + [upper]
        v, e, p_, ne = _adaptive(f, bps, spec, spec.max_subdivisions - panels)
        parts.append(v)
        total += v
        err += e
        panels += p_
        nev += ne
        upper = lower
        k += 1
        if len(parts) >= 4 and not any(lower < x for x in inner):
            r1 = parts[-1] / parts[-2] if parts[-2] != 0 else 0.0
            r2 = parts[-2] / parts[-3] if parts[-3] != 0 else 0.0
            if parts[-1] == 0.0 and parts[-2] == 0.0:
                rem = 0.0
                break
            if 0.0 <= r1 < 1.0 and abs(r1 - r2) <= 1e-3 * max(r1, 1e-300) + 1e-12:
                rem = parts[-1] * r1 / (1.0 - r1)
                if abs(rem) <= 0.1 * max(spec.rel_tol * abs(total), spec.abs_tol):
                    break
                # tail is geometric; the extrapolation is as good as more panels
                if abs(rem) <= max(spec.rel_tol * abs(total), spec.abs_tol) * 1e3 and k > 60:
                    break
        if panels >= spec.max_subdivisions:
            raise ToleranceNotMet("subdivision budget exhausted while grading towards the origin")
    total += rem
    err += abs(rem) * 1e-3
    return total, err, panels, nev


def integrate(f: Callable, lo: float, hi: float, spec: QuadratureSpec | None = None,
              points=()) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Maps a float array to a float array of the same shape.
    lo, hi : float
        Finite limits, ``lo <= hi``.
    spec : QuadratureSpec, optional
        Tolerances and budget.  With ``singular_origin`` the lower limit may
        carry an integrable singularity ``(r - lo)^s``, ``s > -1``.
    points : iterable of float
        Interior breakpoints (kinks, support edges) used as initial panel
        boundaries.

    Returns
    -------
    QuadResult
        Unpacks as ``(value, error_estimate)``.
    """
    spec = spec or QuadratureSpec()
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("integration limits must be finite")
    if hi < lo:
        r = integrate(f, hi, lo, spec, points)
        return QuadResult(-r.value, r.error, r.panels, r.evaluations)
    if hi == lo:
        return QuadResult(0.0, 0.0, 0, 0)
    pts = sorted(set(float(x) for x in points if lo < x < hi))
    if spec.singular_origin:
        v, e, p, ne = _graded(f, lo, hi, spec, pts)
    else:
        v, e, p, ne = _adaptive(f, [lo] + pts + [hi], spec, spec.max_subdivisions)
    return QuadResult(v, e, p, ne)


def gauss_legendre(m: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def _sample_ball(rng, count, n, radius):
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = radius * rng.random(count) ** (1.0 / n)
    return g * r[:, None]


def _ball_volume(n, radius):
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * radius**n


def monte_carlo_weighted(integrand: Callable, n: int, mc_spec: McSpec, chunk: int = 2**16):
    """Estimate the integral of ``integrand`` over the ball of radius ``radius_cap``.

    ``integrand`` maps an ``(m, n)`` array of points to ``m`` values.  The
    sample count is split across ``mc_spec.substreams`` independent streams
    spawned from ``mc_spec.seed``; partial sums are reduced in stream order so
    the estimate is bitwise reproducible whatever ``workers`` is.

    Returns
    -------
    (estimate, std_error)
    """
    streams = np.random.SeedSequence(mc_spec.seed).spawn(mc_spec.substreams)
    base, extra = divmod(mc_spec.samples, mc_spec.substreams)
    counts = [base + (1 if i < extra else 0) for i in range(mc_spec.substreams)]

    def run(i):
        rng = np.random.default_rng(streams[i])
        s = 0.0
        s2 = 0.0
        left = counts[i]
        while left > 0:
            m = min(chunk, left)
            x = _sample_ball(rng, m, n, mc_spec.radius_cap)
            y = np.asarray(integrand(x), dtype=float)
            s += math.fsum(y)
            s2 += math.fsum(y * y)
            left -= m
        return s, s2

    if mc_spec.workers > 1:
        with ThreadPoolExecutor(max_workers=mc_spec.workers) as pool:
            parts = list(pool.map(run, range(mc_spec.substreams)))
    else:
        parts = [run(i) for i in range(mc_spec.substreams)]
    total = math.fsum(p[0] for p in parts)
    total2 = math.fsum(p[1] for p in parts)
    N = mc_spec.samples
    mean = total / N
    var = max(total2 / N - mean * mean, 0.0) * N / max(N - 1, 1)
    vol = _ball_volume(n, mc_spec.radius_cap)
    return vol * mean, vol * math.sqrt(var / N)
