"""Command-line front end.

    sharpineq constants --case hardy --n 3 --p 2 --format json
    sharpineq optimize  --case hardy1d --p 2
    sharpineq verify    --case rellich --n 5 --profile near-extremal --mc-samples 100000
    sharpineq sweep     --case hardy --n 3 --p 2 --format csv --out sweep.csv
    sharpineq fields    --case ckn-plus1 --n 4 --a 0.5
    sharpineq all       --seed 7 --out battery.json

Exit codes: 0 success, 1 domain error, 2 numerical failure, 3 inequality
violation, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from .constants import sharp_constant, sobolev_sharp_constant, talenti_constant
from .core import (
    Variant,
    b_from_theta,
    make_case,
    sobolev_conjugate,
    theta_from_b,
)
from .exceptions import DomainError, NumericalError
from .fields import ckn_field, divergence_fd, hardy_field, target_divergence
from .optimize import crosscheck_closed_forms
from .quadrature import McSpec, QuadratureSpec
from .radial import mollifier, near_extremal
from .serialize import dumps_csv, dumps_json, dumps_text, to_plain
from .verify import (
    SHARPNESS_THRESHOLD,
    battery,
    canonical_profile,
    sweep,
    verify_case,
    young_pointwise_check,
)

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2, 3, 64

CASE_ALIASES = {
    "hardy": Variant.HARDY_SUBCRITICAL,
    "hardy-super": Variant.HARDY_SUPERCRITICAL,
    "hardy1d": Variant.HARDY_1D,
    "ckn-plus1": Variant.CKN_EDGE_B_EQUALS_A_PLUS_1,
    "ckn-equal": Variant.CKN_EDGE_B_EQUALS_A,
    "ckn": Variant.CKN_INTERPOLATED,
    "rellich": Variant.RELLICH,
}
COMMANDS = ("constants", "optimize", "verify", "sweep", "fields", "all")


class InequalityViolation(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "constants"
    case: str = "hardy"
    n: int | None = None
    p: float | None = None
    a: float | None = None
    b: float | None = None
    theta: float | None = None
    profile: str = "canonical"
    R: float = 1.0
    eps: float = 0.05
    r_in: float = 1e-3
    r_out: float = 1e3
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**16
    mc_samples: int = 0
    seed: int = 0
    radius_cap: float | None = None
    tol: float = 1e-8
    rellich_variant: str = "squared"
    sobolev: str = "talenti"
    points: int = 200
    out: str | None = None
    format: str = "json"
    timing: bool = False

    def case_obj(self):
        if self.case not in CASE_ALIASES:
            raise DomainError(f"unknown case {self.case!r}")
        v = CASE_ALIASES[self.case]
        n = 1 if v is Variant.HARDY_1D and self.n is None else self.n
        if n is None:
            raise DomainError("--n is required for this case")
        return make_case(v, int(n), p=self.p, a=self.a, b=self.b, theta=self.theta)

    def quad_spec(self):
        return QuadratureSpec(self.rel_tol, self.abs_tol, self.max_subdivisions)

    def mc_spec(self, profile):
        if self.mc_samples <= 0:
            return None
        cap = self.radius_cap or profile.support[1]
        return McSpec(self.mc_samples, self.seed, cap)

    def profile_obj(self, case):
        if self.profile == "canonical":
            return canonical_profile(case)
        if self.profile == "mollifier":
            return mollifier(self.R)
        if self.profile == "near-extremal":
            return near_extremal(case, self.eps, self.r_in, self.r_out)
        raise DomainError(f"unknown profile {self.profile!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags win")
    common.add_argument("--case", choices=sorted(CASE_ALIASES))
    common.add_argument("--n", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--profile", choices=["canonical", "mollifier", "near-extremal"])
    common.add_argument("--R", type=float, help="mollifier radius")
    common.add_argument("--eps", type=float, help="near-extremal exponent offset")
    common.add_argument("--r-in", dest="r_in", type=float)
    common.add_argument("--r-out", dest="r_out", type=float)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--max-subdivisions", dest="max_subdivisions", type=int)
    common.add_argument("--mc-samples", dest="mc_samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--radius-cap", dest="radius_cap", type=float)
    common.add_argument("--tol", type=float, help="crosscheck tolerance")
    common.add_argument("--rellich-variant", dest="rellich_variant", choices=["squared", "literal"])
    common.add_argument("--sobolev", choices=["talenti", "literal"])
    common.add_argument("--points", type=int, help="sample points for the fields check")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--timing", action="store_true", help="include wall times in reports")

    parser = _Parser(prog="sharpineq", description="Sharp constants of Hardy, CKN and Rellich inequalities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    path = getattr(ns, "config", None)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for k, v in vars(ns).items():
        if k != "config":
            values[k] = v
    return RunConfig(**values)


def cmd_constants(cfg: RunConfig) -> dict:
    case = cfg.case_obj()
    c = sharp_constant(case, sobolev=cfg.sobolev)
    out = {"value": c.value, "provenance": c.provenance, "case": case.to_dict()}
    if case.variant is Variant.CKN_EDGE_B_EQUALS_A and case.a > 0:
        # the a > 0 form with exponent 2 - 2/n, reported for comparison only
        from .constants import ckn_edge_plus1_constant, sobolev_constant
        k2 = sobolev_constant(case.n, 2.0, cfg.sobolev) ** 2
        c1 = ckn_edge_plus1_constant(case.n, case.a).value
        out["alternative_exponent_2_minus_2_over_n"] = k2 * (1 + case.a * c1**0.5) ** (2 - 2 / case.n)
    return out


def cmd_optimize(cfg: RunConfig) -> dict:
    case = cfg.case_obj()
    res = crosscheck_closed_forms(case, tol=cfg.tol, rellich=cfg.rellich_variant, sobolev=cfg.sobolev)
    return {"case": case.to_dict(), **res.to_dict()}


def cmd_verify(cfg: RunConfig) -> dict:
    case = cfg.case_obj()
    profile = cfg.profile_obj(case)
    rep = verify_case(case, profile, cfg.quad_spec(), cfg.mc_spec(profile), sobolev=cfg.sobolev)
    out = rep.to_dict(timing=cfg.timing)
    out["ok"] = rep.ok
    return out


def cmd_sweep(cfg: RunConfig) -> dict:
    case = cfg.case_obj()
    s = sweep(case, quad_spec=cfg.quad_spec(), sobolev=cfg.sobolev)
    out = s.to_dict()
    out["threshold"] = SHARPNESS_THRESHOLD
    out["rows"] = list(s.rows())
    return out


def _fields_check(n, field, points, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        d = rng.standard_normal(n)
        x = d / np.linalg.norm(d) * 10 ** rng.uniform(-1.0, 1.0)
        target = float(target_divergence(field, x))
        err = abs(divergence_fd(field, x) - target) / (1.0 + abs(target))
        worst = max(worst, err)
    return {"field": field.to_dict(), "points": points, "seed": seed, "max_rel_error": worst}


def cmd_fields(cfg: RunConfig) -> dict:
    case = cfg.case_obj()
    if case.variant in (Variant.HARDY_SUBCRITICAL, Variant.HARDY_SUPERCRITICAL):
        field = hardy_field(case.n, case.p)
    elif case.variant.is_ckn:
        field = ckn_field(case.n, case.b)
    else:
        raise DomainError("fields are defined for n-dimensional Hardy and CKN cases")
    return _fields_check(case.n, field, cfg.points, cfg.seed)


def cmd_all(cfg: RunConfig) -> dict:
    qs = cfg.quad_spec()
    rows = []
    consts = []
    for v, n, kw in [
        (Variant.HARDY_SUBCRITICAL, 3, {"p": 2.0}),
        (Variant.HARDY_SUPERCRITICAL, 2, {"p": 3.0}),
        (Variant.HARDY_1D, 1, {"p": 2.0}),
        (Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, 5, {"a": 0.0}),
        (Variant.CKN_EDGE_B_EQUALS_A, 3, {"a": -0.5}),
        (Variant.CKN_INTERPOLATED, 3, {"a": 0.0, "b": 0.5}),
        (Variant.RELLICH, 5, {}),
        (Variant.RELLICH, 8, {}),
    ]:
        c = make_case(v, n, **kw)
        consts.append(sharp_constant(c, sobolev=cfg.sobolev).to_dict())
    sobolev = [{"n": n, "literal_K": sobolev_sharp_constant(n, 2.0), "talenti_K": talenti_constant(n, 2.0)}
               for n in (3, 4, 5, 6)]

    cross = []
    for c in [make_case(Variant.HARDY_SUBCRITICAL, 3, 2.0), make_case(Variant.HARDY_SUPERCRITICAL, 2, 3.0),
              make_case(Variant.HARDY_1D, 1, 2.0), make_case(Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, 3, a=0.0),
              make_case(Variant.CKN_EDGE_B_EQUALS_A, 3, a=-0.5), make_case(Variant.CKN_EDGE_B_EQUALS_A, 5, a=0.5),
              make_case(Variant.RELLICH, 13)]:
        r = crosscheck_closed_forms(c, tol=cfg.tol, rellich=cfg.rellich_variant, sobolev=cfg.sobolev)
        cross.append({"case": c.to_dict(), **r.to_dict()})

    violations = 0
    for case, prof in battery():
        mc = None
        if cfg.mc_samples > 0 and case.variant is not Variant.HARDY_1D and prof.family.value == "Mollifier":
            mc = McSpec(cfg.mc_samples, cfg.seed, prof.support[1])
        rep = verify_case(case, prof, qs, mc, sobolev=cfg.sobolev)
        violations += not rep.ok
        d = rep.to_dict(timing=cfg.timing)
        rows.append({"variant": case.variant.value, "n": case.n, "p": case.p, "a": case.a, "b": case.b,
                     "theta": case.theta, "profile": prof.family.value, "lhs": rep.lhs, "rhs": rep.rhs,
                     "constant": rep.constant.value, "ratio": rep.ratio, "margin": rep.margin,
                     "mc": d["mc"]})

    sweeps = [sweep(c, quad_spec=qs, sobolev=cfg.sobolev).to_dict()
              for c in (make_case(Variant.HARDY_SUBCRITICAL, 3, 2.0),
                        make_case(Variant.CKN_EDGE_B_EQUALS_A_PLUS_1, 5, a=0.5))]
    flds = [_fields_check(n, f, cfg.points, cfg.seed)
            for n, f in [(3, hardy_field(3, 2.0)), (4, hardy_field(4, 3.0)), (3, ckn_field(3, 1.0)),
                         (5, ckn_field(5, 1.5))]]
    rng = np.random.default_rng(cfg.seed)
    exps = []
    for _ in range(20):
        n = int(rng.integers(3, 9))
        a = float(rng.uniform(-2.0, (n - 2) / 2.0 - 1e-3))
        th = float(rng.uniform(0.0, 1.0))
        b = b_from_theta(n, a, th)
        c = make_case(Variant.CKN_INTERPOLATED, n, a=a, b=b)
        s2 = sobolev_conjugate(n)
        exps.append({"n": n, "a": a, "theta": th,
                     "exp1_residual": abs(c.p - (2 * (1 - th) + s2 * th)),
                     "exp3_residual": abs(b * c.p - (2 * (1 - th) * (a + 1) + s2 * th * a)),
                     "inverse_residual": abs(theta_from_b(n, a, b) - th)})
    young = young_pointwise_check(3.0, lambdas=(0.7,), seed=cfg.seed)
    return {"constants": consts, "sobolev": sobolev, "crosschecks": cross, "rows": rows,
            "violations": violations, "sweeps": sweeps, "fields": flds, "exponents": exps, "young": young}


HANDLERS = {"constants": cmd_constants, "optimize": cmd_optimize, "verify": cmd_verify,
            "sweep": cmd_sweep, "fields": cmd_fields, "all": cmd_all}


def render(report: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return dumps_json(report)
    if fmt == "csv":
        cols = ["param", "lhs", "rhs", "ratio", "margin"] if command == "sweep" else None
        return dumps_csv(report, columns=cols)
    return dumps_text(report)


def run(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = resolve_config(ns)
        if cfg.format not in ("json", "csv", "text"):
            raise DomainError(f"unknown format {cfg.format!r}")
        body = HANDLERS[cfg.command](cfg)
        report = {"config": to_plain(asdict(cfg)), **body}
        text = render(report, cfg.format, cfg.command)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if body.get("ok") is False or body.get("violations"):
            return EXIT_VIOLATION
        return EXIT_OK
    except DomainError as exc:
        sys.stderr.write(f"DomainError: {exc}\n")
        return EXIT_DOMAIN
    except NumericalError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
