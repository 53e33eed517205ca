"""Command line front end: ``cremona-dec <verb> ...``.

Exit codes: 0 success, 1 bad input, 2 mathematical failure (membership false,
field extension required), 3 a bounded search ran out of candidates.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import FieldSpec
from .birmap import BirMap, as_map, contracted_lines, invert, proper_base_points, quad_from_points
from .curves import CONIC, CUSPIDAL, LINE, NODAL, classify, in_dec, in_ine, parse_curve, restrict
from .decomp.conic import conic, express_quadratic_in_sigma, lambda_ab, mu_c, orbit_classify, sigma_ab
from .decomp import lemmas, xd
from .decomp.demo import demo_cuspidal
from .decomp.words import Factorization, load_certificate, verify_factorization
from .errors import CremonaError, InputError, OracleUnavailable, PreconditionError
from .projgeom import ProjPoint

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_SEARCH = 0, 1, 2, 3


class MembershipFalse(Exception):
    """A yes/no verb answered no."""


class Report:
    def __init__(self, verb):
        self.verb = verb
        self.status = "ok"
        self.result = {}
        self.lines = []
        self.certificate: Factorization | None = None

    def add(self, key, value, text=None):
        self.result[key] = value
        self.lines.append(text if text is not None else f"{key}: {value}")

    def to_json(self, timing=None):
        out = {"verb": self.verb, "status": self.status, "result": self.result}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if timing is not None:
            out["seconds"] = timing
        return out


# ---------------------------------------------------------------------------
# argument helpers


def _map(text, F):
    return BirMap.parse(text, F)


def _curve(text, F):
    return parse_curve(text, F)


def _point(text, F):
    return ProjPoint.parse(text, F)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from exc


def _certificate(rep: Report, f: Factorization):
    rep.certificate = f
    rep.add("quadratic_count", f.quadratic_count)
    rep.add("linear_count", f.linear_count)
    rep.add("verified", f.verified)
    rep.lines.append("steps:")
    for i, s in enumerate(f.steps):
        rep.lines.append(f"  {i}: {s.kind} {s.map}")


# ---------------------------------------------------------------------------
# verbs


def cmd_compose(args, F, rep):
    maps = [_map(m, F) for m in args.maps]
    out = maps[0]
    for m in maps[1:]:
        out = out.compose(m)
    out = BirMap(out.components, F)
    rep.add("map", str(out))
    rep.add("degree", out.degree)


def cmd_invert(args, F, rep):
    out = invert(_map(args.map, F))
    rep.add("map", str(out))
    rep.add("degree", out.degree)


def cmd_base_points(args, F, rep):
    pts = proper_base_points(_map(args.map, F))
    rep.add("base_points", [str(p) for p in pts], "base points: " + ", ".join(str(p) for p in pts))


def cmd_contracted_lines(args, F, rep):
    lines = contracted_lines(_map(args.map, F))
    rep.add("lines", [[str(L), m] for L, m in lines],
            "contracted lines: " + ", ".join(f"{L}^{m}" for L, m in lines))


def cmd_classify(args, F, rep):
    from .algebra import parse_form
    cls, markers = classify(parse_form(args.form, "xyz", F))
    rep.add("class", cls)
    if markers.singular_point is not None:
        rep.add("singular_point", str(markers.singular_point))
        rep.add("singular_type", markers.singular_type)


def cmd_check_dec(args, F, rep):
    ok = in_dec(_map(args.map, F), _curve(args.curve, F))
    rep.add("in_dec", ok, str(ok).lower())
    if not ok:
        raise MembershipFalse


def cmd_check_ine(args, F, rep):
    ok = in_ine(_map(args.map, F), _curve(args.curve, F))
    rep.add("in_ine", ok, str(ok).lower())
    if not ok:
        raise MembershipFalse


def cmd_restrict(args, F, rep):
    X = _curve(args.curve, F)
    X2 = _curve(args.to, F) if args.to else X
    m = restrict(_map(args.map, F), X, X2)
    (a, b), (c, d) = m.matrix
    rep.add("mobius", [[F.format(a), F.format(b)], [F.format(c), F.format(d)]], repr(m))


def cmd_gen(args, F, rep):
    kind, vals = args.kind, args.values
    need = {"sigma-ab": 2, "lambda-ab": 2, "mu-c": 1, "tau-a": 2, "aut-xd": 2, "quad": 3}[kind]
    if len(vals) != need:
        raise InputError(f"gen {kind} takes {need} arguments")
    if kind == "quad":
        out = quad_from_points(*[_point(v, F) for v in vals])
    elif kind == "sigma-ab":
        out = sigma_ab(F(vals[0]), F(vals[1]), F)
    elif kind == "lambda-ab":
        out = lambda_ab(F(vals[0]), F(vals[1]), F).to_birmap()
    elif kind == "mu-c":
        out = mu_c(F(vals[0]), F).to_birmap()
    elif kind == "tau-a":
        out = xd.xd_tau(int(vals[0]), F(vals[1]), F)
    else:
        out = xd.xd_aut(int(vals[0]), F(vals[1]), F).to_birmap()
    rep.add("map", str(as_map(out)), str(as_map(out)))


def cmd_orbit(args, F, rep):
    C = _curve(args.curve, F)
    if C.curve_class != CONIC:
        raise PreconditionError("orbit classification is for the conic")
    lab = orbit_classify(_map(args.map, F), C, ordered=args.ordered)
    rep.add("orbit", str(lab), str(lab))
    if lab.d is not None:
        rep.result["d"] = F.format(lab.d)


def cmd_express(args, F, rep):
    seed = tuple(F(v) for v in args.seed_ab) if args.seed_ab else (F(2), F(1))
    _certificate(rep, express_quadratic_in_sigma(_map(args.map, F), seed))


def _oracle_from(args, F):
    if not args.oracle:
        return None
    cert = load_certificate(_read_json(args.oracle), F)
    return lemmas.ProductOracle([cert])


def cmd_factor_conic(args, F, rep):
    tau = _map(args.map, F)
    oracle = _oracle_from(args, F)
    if oracle is None:
        phi = lemmas.default_phi_line_conic(F)
        tau_line = invert(phi.map).compose(tau).compose(phi.map)
        raise OracleUnavailable(f"supply --oracle with a Dec(L) certificate for {tau_line}")
    _certificate(rep, lemmas.factor_dec_conic(tau, oracle))


def _cubic_oracle(X, F):
    C = conic(F)
    cusp = X.curve_class == CUSPIDAL
    strict = lemmas.WordSearchOracle(lemmas.tangent_avoiding(C, cusp), rational_tangents=cusp)
    loose = lemmas.WordSearchOracle(lemmas.tangent_avoiding(C, False))

    def oracle(tau):
        from .errors import SearchExhausted
        try:
            return strict(tau)
        except SearchExhausted:
            return loose(tau)
    return oracle


def cmd_factor_cubic(args, F, rep):
    X = _curve(args.curve, F)
    if X.curve_class not in (NODAL, CUSPIDAL):
        raise PreconditionError("factor-cubic needs --curve nodal or cuspidal")
    oracle = _oracle_from(args, F) or _cubic_oracle(X, F)
    _certificate(rep, lemmas.factor_dec_cubic(_map(args.map, F), X=X, conic_oracle=oracle))


def cmd_lift(args, F, rep):
    if not args.oracle:
        raise InputError("lift needs --oracle with the source-level certificate")
    source = load_certificate(_read_json(args.oracle), F)
    Z = _curve(args.curve, F)
    Y = source.curve
    if (Y.curve_class, Z.curve_class) == (LINE, CONIC):
        phi = lemmas.default_phi_line_conic(F)
    elif Y.curve_class == CONIC and Z.curve_class in (NODAL, CUSPIDAL):
        phi = lemmas.default_phi_conic_cubic(Z.curve_class, F)
    else:
        raise PreconditionError(f"cannot lift from {Y.curve_class} to {Z.curve_class}")
    tau = _map(args.map, F)
    expected = invert(phi.map).compose(tau).compose(phi.map)
    if source.target != expected:
        raise PreconditionError(f"the source certificate must factor {expected}")
    _certificate(rep, lemmas.lift_factorization(tau, Y, source, phi, phi))


def cmd_verify(args, F, rep):
    data = _read_json(args.certificate)
    field = FieldSpec.parse(data.get("field", F.name))
    report = verify_factorization(load_certificate(data, field))
    rep.add("verified", report["verified"], "green" if report["verified"] else "FAILED")
    rep.add("quadratic_count", report["quadratic_count"])
    rep.add("linear_count", report["linear_count"])
    if report["failures"]:
        rep.add("failures", report["failures"])
        raise MembershipFalse


def cmd_demo_cuspidal(args, F, rep):
    r = demo_cuspidal(F)
    f = r.pop("certificate")
    r.pop("seconds")
    for k, v in r.items():
        rep.add(k, v)
    rep.certificate = f
    if not r["verified"]:
        raise MembershipFalse


VERBS = {
    "compose": cmd_compose, "invert": cmd_invert, "base-points": cmd_base_points,
    "contracted-lines": cmd_contracted_lines, "classify": cmd_classify, "check-dec": cmd_check_dec,
    "check-ine": cmd_check_ine, "restrict": cmd_restrict, "gen": cmd_gen, "orbit": cmd_orbit,
    "express": cmd_express, "factor-conic": cmd_factor_conic, "factor-cubic": cmd_factor_cubic,
    "lift": cmd_lift, "verify": cmd_verify, "demo-cuspidal": cmd_demo_cuspidal,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS, help="q (default) or fp:<p> with p > 3")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the certificate to this file")
    common.add_argument("--oracle", default=argparse.SUPPRESS, help="source-level certificate (JSON)")
    common.add_argument("--seed-ab", nargs=2, default=argparse.SUPPRESS, metavar=("A", "B"),
                        help="sigma seed for express")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall time in the output")

    p = argparse.ArgumentParser(prog="cremona-dec", parents=[common],
                                description="Exact factorization in decomposition groups of plane curves.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = verb("compose", "compose maps, rightmost applied first")
    s.add_argument("maps", nargs="+")
    verb("invert", "inverse map").add_argument("map")
    verb("base-points", "proper base points").add_argument("map")
    verb("contracted-lines", "lines contracted by the map").add_argument("map")
    verb("classify", "class of a plane curve given by its form").add_argument("form")
    for name, help_ in (("check-dec", "does the map preserve the curve"),
                        ("check-ine", "does the map fix the curve pointwise")):
        s = verb(name, help_)
        s.add_argument("--curve", default="conic")
        s.add_argument("map")
    s = verb("restrict", "induced Moebius map on parameters")
    s.add_argument("--curve", default="conic")
    s.add_argument("--to", default=None, help="target curve, default the source curve")
    s.add_argument("map")
    s = verb("gen", "generators: sigma-ab, lambda-ab, mu-c, tau-a, aut-xd, quad")
    s.add_argument("kind", choices=["sigma-ab", "lambda-ab", "mu-c", "tau-a", "aut-xd", "quad"])
    s.add_argument("values", nargs="*")
    s = verb("orbit", "orbit of the base triple under Aut(P^2, C)")
    s.add_argument("--curve", default="conic")
    s.add_argument("--ordered", action="store_true", help="keep B_{0,1} distinct from B_{1,0}")
    s.add_argument("map")
    verb("express", "write a quadratic in Dec(C) through one sigma_{a,b}").add_argument("map")
    verb("factor-conic", "factor a map in Dec(C)").add_argument("map")
    s = verb("factor-cubic", "factor a map in Dec(X), X a singular cubic")
    s.add_argument("--curve", default="cuspidal")
    s.add_argument("map")
    s = verb("lift", "lift a source-level certificate one level up")
    s.add_argument("--curve", default="conic", help="target curve")
    s.add_argument("map")
    verb("verify", "recheck a certificate").add_argument("certificate")
    verb("demo-cuspidal", "the cuspidal de Jonquieres example")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    for name, default in (("field", "q"), ("json", False), ("out", None), ("oracle", None),
                          ("seed_ab", None), ("timing", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    rep = Report(args.verb)
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        F = FieldSpec.parse(args.field)
        VERBS[args.verb](args, F, rep)
    except MembershipFalse:
        rep.status = "false"
        code = EXIT_MATH
    except CremonaError as exc:
        rep.status = "error"
        rep.add("error", f"{type(exc).__name__}: {exc}")
        code = exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        rep.status = "error"
        rep.add("error", f"{type(exc).__name__}: {exc}")
        code = EXIT_INPUT
    timing = round(time.perf_counter() - t0, 3) if args.timing else None
    if args.out and rep.certificate is not None:
        with open(args.out, "w") as fh:
            fh.write(rep.certificate.dumps() + "\n")
    if args.json:
        stdout.write(json.dumps(rep.to_json(timing), indent=2, default=str) + "\n")
    else:
        for line in rep.lines:
            stdout.write(f"{line}\n")
        if timing is not None:
            stdout.write(f"seconds: {timing}\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
