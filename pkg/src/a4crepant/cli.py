"""Command line interface: ``a4crepant <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .conics import ConicForm, classify_point, oracle_classify
from .fields import GF2k, FieldError, parse_field
from .ideal import GREVLEX, LEX, BudgetExceeded, IdealBasis, MonomialOrder, count_points
from .pipeline import PipelineError, load_pipeline, run_pipeline
from .poly import PolynomialError, parse_poly
from .presentation import verify_presentation
from .strata import StratumError, motivic_class, parse_stratum, specialize

BUNDLED_IDEALS = ("sing-m.ideal",)


class UsageError(Exception):
    pass


# -------------------------------------------------------------- ideal files

def parse_ideal_file(text: str) -> tuple[IdealBasis, MonomialOrder]:
    """Header lines ``variables = ...``, optional ``order = grevlex|lex`` and
    ``field = gf2``, then one generator per line (``#`` comments)."""
    header: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if sep and key.strip() in ("variables", "order", "field") and not body:
            header[key.strip()] = value.strip()
        else:
            body.append((n, line))
    if "variables" not in header:
        raise UsageError("ideal file needs a 'variables = ...' line")
    names = tuple(v.strip() for v in header["variables"].split(","))
    F = parse_field(header.get("field", "gf2"))
    order = {"grevlex": GREVLEX, "lex": LEX}.get(header.get("order", "grevlex"))
    if order is None:
        raise UsageError(f"unknown order {header['order']!r} (use grevlex or lex)")
    gens = []
    for n, line in body:
        try:
            gens.append(parse_poly(line, F, names))
        except PolynomialError as exc:
            raise UsageError(f"line {n}: {exc}") from None
    if not gens:
        raise UsageError("ideal file has no generators")
    return IdealBasis(gens, names, F), order


def read_ideal_file(path: str) -> tuple[IdealBasis, MonomialOrder]:
    p = Path(path)
    if not p.exists() and p.name in BUNDLED_IDEALS and len(p.parts) == 1:
        return parse_ideal_file(resources.files("a4crepant").joinpath("data", p.name).read_text())
    try:
        return parse_ideal_file(p.read_text())
    except OSError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------- subcommands

def _field(text: str) -> GF2k:
    try:
        F = parse_field(text)
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    if not isinstance(F, GF2k):
        raise UsageError("--field must be gf2^k")
    return F


def cmd_verify_presentation(args) -> dict:
    rep = verify_presentation()
    for name, chk in rep["checks"].items():
        print(f"{name}: {'pass' if chk['pass'] else 'FAIL'}")
    print(f"verdict: {rep['verdict']}")
    return rep


def cmd_run(args) -> dict:
    F = _field(args.field) if args.field else GF2k(2)
    spec = load_pipeline(args.pipeline)
    rep = run_pipeline(spec, verify_field=F)
    for step in rep["steps"]:
        charts = [c["name"] for b in step["blowups"] for c in b.get("charts", [])]
        print(f"step {step['step']}: {step['status']}" + (f" ({', '.join(charts)})" if charts else ""))
    fin = rep["final"]
    print(f"frontier: {', '.join(fin['frontier'])} smooth: {fin['verdict']}")
    print(f"euler: {rep['euler']}")
    print(f"class: {rep['motivic_class']}")
    if "batyrev" in rep:
        b = rep["batyrev"]
        print(f"conjugacy classes: {b['conjugacy_classes']}, counterexample: {b['counterexample']}")
    print(f"verdict: {rep['verdict']}")
    return rep


def cmd_classify_conic(args) -> dict:
    F = _field(args.field)
    coeffs = [args.a, args.b, args.c, args.d, args.e, args.f]
    for x in coeffs:
        if not 0 <= x < F.q:
            raise UsageError(f"coefficient {x} is not an element of {F.name} (0..{F.q - 1})")
    form = ConicForm(*coeffs, field=F)
    cls = classify_point(form)
    out = {"field": F.name, "coefficients": coeffs, "class": str(cls),
           "outside_affine_regime": form.outside_affine_regime, "verdict": "pass"}
    print(cls)
    if form.outside_affine_regime:
        print("note: a = b = c = 0, classified with the projective convention", file=sys.stderr)
    if args.check:
        res = oracle_classify(coeffs, F.k)
        out["oracle"] = {"class": str(res.cls), "linear_factors": res.linear_factors,
                         "points": res.points, "over": f"gf2^{2 * F.k}"}
        if res.cls != cls:
            out["verdict"] = "fail"
        print(f"oracle: {res.cls} ({res.points} points over GF({res.field_q}))")
    return out


def cmd_euler(args) -> dict:
    try:
        expr = parse_stratum(args.expr)
        c = motivic_class(expr)
    except StratumError as exc:
        raise UsageError(str(exc)) from None
    chi = specialize(c, 1)
    print(chi)
    if args.show_class:
        print(c)
    return {"expression": str(expr), "euler": chi, "class": str(c), "verdict": "pass"}


def cmd_groebner(args) -> dict:
    I, order = read_ideal_file(args.ideal)
    if args.order:
        order = {"grevlex": GREVLEX, "lex": LEX}[args.order]
    gb = I.groebner(order)
    for g in gb:
        print(g)
    return {"variables": list(I.vars), "order": str(order), "field": I.field.name,
            "generators": [str(g) for g in I.generators], "basis": [str(g) for g in gb],
            "unit": I.is_unit(), "verdict": "pass"}


def cmd_count_points(args) -> dict:
    I, _ = read_ideal_file(args.ideal)
    F = _field(args.field)
    try:
        n = count_points(I, F.q)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    print(n)
    return {"variables": list(I.vars), "field": F.name, "points": n, "verdict": "pass"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="a4crepant",
                                description="Verify a crepant resolution of A^4/A4 in characteristic 2.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, field_default=None):
        sp.add_argument("--report", metavar="PATH", help="write a JSON report")
        sp.add_argument("--field", default=field_default, help="pointwise field gf2^k")
        return sp

    sp = common(sub.add_parser("verify-presentation", help="check the invariant-ring presentation"))
    sp.set_defaults(func=cmd_verify_presentation)

    sp = common(sub.add_parser("run", help="run a pipeline file"))
    sp.add_argument("pipeline", help="pipeline file (bundled: a4-char2.pipeline)")
    sp.set_defaults(func=cmd_run)

    sp = common(sub.add_parser("classify-conic", help="classify aX^2+bXY+cY^2+dXZ+eYZ+fZ^2"),
                "gf2")
    for name in "abcdef":
        sp.add_argument(f"--{name}", type=int, default=0)
    sp.add_argument("--check", action="store_true", help="also run the brute-force oracle")
    sp.set_defaults(func=cmd_classify_conic)

    sp = common(sub.add_parser("euler", help="Euler number of a stratum expression"))
    sp.add_argument("expr")
    sp.add_argument("--class", dest="show_class", action="store_true",
                    help="also print the motivic class")
    sp.set_defaults(func=cmd_euler)

    sp = common(sub.add_parser("groebner", help="reduced Gröbner basis of an ideal file"))
    sp.add_argument("ideal")
    sp.add_argument("--order", choices=("grevlex", "lex"))
    sp.set_defaults(func=cmd_groebner)

    sp = common(sub.add_parser("count-points", help="count GF(q)-points of an ideal file"), "gf2")
    sp.add_argument("ideal")
    sp.set_defaults(func=cmd_count_points)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except (UsageError, PipelineError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.report:
        Path(args.report).write_text(json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    return 0 if rep.get("verdict") == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
