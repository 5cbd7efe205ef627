"""Declarative resolution towers: parse a pipeline file, run every certificate,
and build a JSON-ready report.

File format (line oriented, ``#`` starts a comment)::

    [root]
    name = M
    field = gf2
    variables = A, B, C, D, E
    weights = 1, 2, 3, 4, 6
    equation = <polynomial>
    group = (1 2 3), (1 2)(3 4)
    singular M = <ideal> | <ideal>

    [step 1]
    blowup M along A, C, E as (u0:u1:u2) -> U0, U1, U2
    blowup V0 along A, v2, D + u1^2 as (w0:w1:w2) -> W0, W1, W2 with D = D' + u1^2
    singular U0 on exceptional = A, B, u2
    conic M: double = everywhere; degenerate = everywhere
    prune U2 = covered
    prune X0 = avoids u0 [on exceptional]
    note U2 = free text

    [final]
    smooth R0

    [ledger]
    stratum E4 = A^2*(P1vP1)
    evidence E4 = free text
    expect euler = 10
    expect class = L^4 + 6*L^3 + 3*L^2
"""
from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__, kernel
from .blowup import (BlowupError, BlowupResult, Center, Chart, CoordinateChange, blow_up,
                     crepancy_certificate, locus_containment, radical_equal,
                     restrict_exceptional, singular_locus, union_equal)
from .conics import FamilyStratification
from .fields import GF2k, modulus_str, parse_field
from .groups import enumerate_group, format_cycles, reflection_census
from .ideal import BudgetExceeded, IdealBasis, point_budget, radical_membership, vanishing_mask
from .poly import Polynomial, PolynomialError, _split_top, parse_poly, parse_poly_list
from .strata import MotivicClass, StratumError, ledger_total

BUNDLED = ("a4-char2.pipeline",)
IDENT = r"[A-Za-z][A-Za-z0-9_']*"


class PipelineError(ValueError):
    """Structural problem in a pipeline file (bad reference, parse failure)."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# ------------------------------------------------------------------ spec

@dataclass
class Directive:
    kind: str
    line: int
    args: dict


@dataclass
class StepSpec:
    number: int
    line: int
    directives: list[Directive] = dc_field(default_factory=list)


@dataclass
class PipelineSpec:
    name: str = "root"
    field: str = "gf2"
    variables: tuple[str, ...] = ()
    weights: tuple[int, ...] | None = None
    equation: str = ""
    group: list[str] = dc_field(default_factory=list)
    root_directives: list[Directive] = dc_field(default_factory=list)
    steps: list[StepSpec] = dc_field(default_factory=list)
    final: list[Directive] = dc_field(default_factory=list)
    strata: list[tuple[str, str, int]] = dc_field(default_factory=list)
    evidence: dict[str, str] = dc_field(default_factory=dict)
    expect_euler: int | None = None
    expect_class: str | None = None
    source: str = "<string>"


_SECTION = re.compile(r"^\[(root|final|ledger|step\s+(\d+))\]$")
_BLOWUP = re.compile(
    rf"^blowup\s+(?P<src>\S+)\s+along\s+(?P<gens>.+?)\s+as\s+"
    rf"\(\s*(?P<y0>{IDENT})\s*:\s*(?P<y1>{IDENT})\s*:\s*(?P<y2>{IDENT})\s*\)\s*->\s*"
    rf"(?P<n0>{IDENT})\s*,\s*(?P<n1>{IDENT})\s*,\s*(?P<n2>{IDENT})"
    rf"(?:\s+with\s+(?P<with>.+))?$")
_CHANGE = re.compile(rf"^\s*(?P<old>{IDENT})\s*=\s*(?P<new>{IDENT})\s*\+\s*(?P<shift>.+?)\s*$")
_SINGULAR = re.compile(r"^singular\s+(?P<chart>\S+)(?P<exc>\s+on\s+exceptional)?\s*=\s*(?P<body>.+)$")
_PRUNE = re.compile(
    r"^prune\s+(?P<chart>\S+)\s*=\s*(?:(?P<covered>covered)|avoids\s+(?P<g>.+?)"
    r"(?P<exc>\s+on\s+exceptional)?)\s*$")
_CONIC = re.compile(r"^conic\s+(?P<chart>\S+)\s*:\s*(?P<body>.+)$")
_SMOOTH = re.compile(r"^smooth\s+(?P<chart>\S+)$")
_NOTE = re.compile(r"^note\s+(?P<chart>\S+)\s*=\s*(?P<text>.+)$")
_KV = re.compile(r"^(?P<key>[A-Za-z_]+)\s*=\s*(?P<value>.*)$")
_STRATUM = re.compile(r"^(?P<kind>stratum|evidence)\s+(?P<label>[^=]+?)\s*=\s*(?P<value>.+)$")
_EXPECT = re.compile(r"^expect\s+(?P<what>euler|class)\s*=\s*(?P<value>.+)$")


def _directive(text: str, line: int) -> Directive:
    for kind, rx in (("blowup", _BLOWUP), ("singular", _SINGULAR), ("prune", _PRUNE),
                     ("conic", _CONIC), ("smooth", _SMOOTH), ("note", _NOTE)):
        m = rx.match(text)
        if m:
            return Directive(kind, line, {k: v for k, v in m.groupdict().items()})
    raise PipelineError(f"unrecognised directive {text!r}", line)


def parse_pipeline(text: str, source: str = "<string>") -> PipelineSpec:
    spec = PipelineSpec(source=source)
    section = None
    seen_root = False
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            section = m.group(1)
            if section == "root":
                if seen_root:
                    raise PipelineError("more than one [root] section", n)
                seen_root = True
            elif m.group(2):
                num = int(m.group(2))
                if spec.steps and num != spec.steps[-1].number + 1 or not spec.steps and num != 1:
                    raise PipelineError(f"steps must be numbered 1, 2, ... in order (got {num})", n)
                spec.steps.append(StepSpec(num, n))
                section = "step"
            continue
        if section is None:
            raise PipelineError("content before the first section", n)
        if section == "root":
            kv = _KV.match(line)
            if kv and kv.group("key") in ("name", "field", "variables", "weights", "equation",
                                          "group"):
                key, value = kv.group("key"), kv.group("value").strip()
                if key == "name":
                    spec.name = value
                elif key == "field":
                    spec.field = value
                elif key == "variables":
                    spec.variables = tuple(v.strip() for v in value.split(","))
                elif key == "weights":
                    try:
                        spec.weights = tuple(int(v) for v in value.split(","))
                    except ValueError:
                        raise PipelineError(f"bad weights {value!r}", n) from None
                elif key == "equation":
                    spec.equation = value
                else:
                    spec.group = [g.strip() for g in _split_top(value, ",")]
            else:
                spec.root_directives.append(_directive(line, n))
        elif section == "step":
            spec.steps[-1].directives.append(_directive(line, n))
        elif section == "final":
            d = _directive(line, n)
            if d.kind not in ("smooth", "note"):
                raise PipelineError(f"{d.kind} is not allowed in [final]", n)
            spec.final.append(d)
        elif section == "ledger":
            m = _STRATUM.match(line)
            e = _EXPECT.match(line)
            if e:
                if e.group("what") == "euler":
                    try:
                        spec.expect_euler = int(e.group("value"))
                    except ValueError:
                        raise PipelineError("expected an integer Euler number", n) from None
                else:
                    spec.expect_class = e.group("value").strip()
            elif m:
                label = m.group("label").strip()
                if m.group("kind") == "stratum":
                    spec.strata.append((label, m.group("value").strip(), n))
                else:
                    spec.evidence[label] = m.group("value").strip()
            else:
                raise PipelineError(f"unrecognised ledger line {line!r}", n)
    if not seen_root:
        raise PipelineError("missing [root] section")
    if not spec.variables or not spec.equation:
        raise PipelineError("[root] needs variables and equation")
    if spec.weights is not None and len(spec.weights) != len(spec.variables):
        raise PipelineError("weights and variables differ in length")
    return spec


def load_pipeline(path: str | Path) -> PipelineSpec:
    """Read a pipeline file; bare bundled names resolve to the packaged data."""
    p = Path(path)
    if not p.exists() and p.name in BUNDLED and len(p.parts) == 1:
        text = resources.files("a4crepant").joinpath("data", p.name).read_text()
        return parse_pipeline(text, p.name)
    return parse_pipeline(p.read_text(), p.name)


# ---------------------------------------------------------------- runner

@dataclass
class _State:
    field: GF2k
    charts: dict[str, Chart] = dc_field(default_factory=dict)
    frontier: list[str] = dc_field(default_factory=list)
    origin: dict[str, tuple[BlowupResult, int]] = dc_field(default_factory=dict)
    blowups: dict[str, BlowupResult] = dc_field(default_factory=dict)
    verify_field: GF2k | None = None

    def chart(self, name: str, line: int) -> Chart:
        if name not in self.charts:
            raise PipelineError(f"unknown chart {name!r}", line)
        return self.charts[name]

    def add(self, ch: Chart, line: int):
        if ch.name in self.charts:
            raise PipelineError(f"chart name {ch.name!r} already used", line)
        self.charts[ch.name] = ch
        self.frontier.append(ch.name)


def _parse_in(ch: Chart, text: str, line: int) -> Polynomial:
    try:
        return parse_poly(text, ch.equation.field, ch.coords)
    except PolynomialError as exc:
        raise PipelineError(f"{exc} (chart {ch.name} has coordinates {', '.join(ch.coords)})",
                            line) from None


def _ideal_in(ch: Chart, text: str, line: int) -> IdealBasis:
    try:
        gens = parse_poly_list(text, ch.equation.field, ch.coords)
    except PolynomialError as exc:
        raise PipelineError(f"{exc} (chart {ch.name})", line) from None
    return IdealBasis(gens, ch.coords, ch.equation.field)


def _point_counts(J: IdealBasis, comps: Sequence[IdealBasis], budget: int) -> dict:
    """Exhaustive GF(2)/GF(4) counts of V(J) and of the declared union."""
    out = {}
    for k in (1, 2):
        F = GF2k(k)
        try:
            lift = lambda I: [Polynomial(g.vars, F, dict(g.terms)) for g in I.generators]
            mj = vanishing_mask(lift(J), J.vars, F, budget)
            masks = [vanishing_mask(lift(C), J.vars, F, budget) for C in comps]
        except BudgetExceeded:
            out[F.name] = "skipped (budget)"
            continue
        union = masks[0].copy()
        for m in masks[1:]:
            union |= m
        out[F.name] = {"singular": int(mj.sum()), "declared": int(union.sum()),
                       "components": [int(m.sum()) for m in masks],
                       "agree": bool((mj == union).all())}
    return out


def _counts_ok(counts: dict) -> bool:
    return all(v["agree"] for v in counts.values() if isinstance(v, dict))


def _run_singular(state: _State, d: Directive) -> dict:
    ch = state.chart(d.args["chart"], d.line)
    exc = bool(d.args["exc"])
    J = restrict_exceptional(ch) if exc else singular_locus(ch)
    comps = [_ideal_in(ch, part, d.line) for part in d.args["body"].split("|")]
    if exc:
        e = Polynomial.variable(ch.exceptional, ch.coords, ch.equation.field)
        comps = [C + e for C in comps]
    cert = radical_equal(J, comps[0]) if len(comps) == 1 else union_equal(J, comps)
    counts = _point_counts(J, comps, min(point_budget(), 1 << 16))
    ok = cert.holds and _counts_ok(counts)
    return {
        "chart": ch.name,
        "on_exceptional": exc,
        "declared": [[str(g) for g in C.generators] for C in comps],
        "jacobian_generators": len(J.generators),
        "groebner_size": len(J.groebner()),
        "declared_in_radical_of_jacobian": all(cert.forward),
        "jacobian_in_radical_of_declared": all(cert.backward),
        "point_counts": counts,
        "verdict": "pass" if ok else "fail",
    }


def _run_prune(state: _State, d: Directive) -> dict:
    name = d.args["chart"]
    ch = state.chart(name, d.line)
    if name not in state.frontier:
        raise PipelineError(f"chart {name!r} is not on the frontier", d.line)
    if d.args["covered"]:
        if name not in state.origin:
            raise PipelineError(f"chart {name!r} does not come from a blow-up", d.line)
        res, j = state.origin[name]
        ok = res.covered(j)
        out = {"chart": name, "check": "covered by sibling charts", "verdict": "pass" if ok else "fail"}
    else:
        g = _parse_in(ch, d.args["g"], d.line)
        exc = bool(d.args["exc"])
        L = restrict_exceptional(ch) if exc else singular_locus(ch)
        ok = locus_containment(L, g)
        out = {"chart": name, "check": f"singular locus{' on exceptional' if exc else ''} avoids {g} = 0",
               "verdict": "pass" if ok else "fail"}
    state.frontier.remove(name)
    return out


def _conic_expect(strat: FamilyStratification, body: str, line: int, field) -> dict:
    base = strat.base
    out = {}
    for part in body.split(";"):
        if not part.strip():
            continue
        m = re.match(r"^\s*(double|degenerate)\s*=\s*(.+?)\s*$", part)
        if not m:
            raise PipelineError(f"bad conic expectation {part.strip()!r}", line)
        what, value = m.groups()
        if value == "everywhere":
            declared = []
        elif value == "nowhere":
            declared = [Polynomial.constant(1, base, field)]
        else:
            try:
                declared = parse_poly_list(value, field, base)
            except PolynomialError as exc:
                raise PipelineError(f"{exc} (conic base {', '.join(base)})", line) from None
        computed = strat.double_line if what == "double" else strat.degenerate
        I = IdealBasis(computed, base, field)
        D = IdealBasis(declared, base, field)
        eq = radical_equal(I, D)
        out[what] = {"declared": value, "computed": [str(g) for g in computed],
                     "verdict": "pass" if eq.holds else "fail"}
    return out


def _run_blowup(state: _State, d: Directive, record: dict) -> bool:
    a = d.args
    src = state.chart(a["src"], d.line)
    if a["src"] not in state.frontier:
        raise PipelineError(f"chart {a['src']!r} is not on the frontier", d.line)
    gens = [_parse_in(src, t, d.line) for t in _split_top(a["gens"], ",")]
    changes = []
    if a["with"]:
        for part in a["with"].split(";"):
            m = _CHANGE.match(part)
            if not m:
                raise PipelineError(f"bad coordinate change {part.strip()!r}", d.line)
            shift = _parse_in(src, m.group("shift"), d.line)
            changes.append(CoordinateChange(m.group("old"), m.group("new"), shift))
    C = Center(tuple(gens), tuple(changes))
    try:
        cert = crepancy_certificate(src, C)
    except BlowupError as exc:
        raise PipelineError(str(exc), d.line) from None
    J = singular_locus(src)
    centre = IdealBasis(gens, src.coords, src.equation.field)
    in_sing = all(radical_membership(g, centre) for g in J.generators)
    entry = {
        "source": src.name,
        "center": [str(g) for g in gens],
        "coordinate_change": [f"{c.old} = {c.new} + {c.shift}" for c in changes],
        "certificate": cert.as_dict(),
        "center_in_singular_locus": in_sing,
    }
    record["blowups"].append(entry)
    if not (cert.passed and in_sing):
        entry["verdict"] = "fail"
        return False
    names = (a["n0"], a["n1"], a["n2"])
    res = blow_up(src, C, (a["y0"], a["y1"], a["y2"]), names)
    charts = []
    for cr in res.charts:
        charts.append({
            "name": cr.chart.name,
            "coordinates": list(cr.chart.coords),
            "equation": str(cr.chart.equation),
            "exceptional_coordinate": cr.chart.exceptional,
            "exponent": cr.exponent,
            "substitution_identity": cr.identity_holds(),
            "exceptional_equation": str(cr.exceptional_equation),
            "exceptional_consistent": cr.exceptional_consistent(),
        })
    overlaps = {f"{names[j]}/{names[k]}": res.overlap_consistent(j, k)
                for j in range(3) for k in range(3) if j != k}
    strat = res.conic_family(state.verify_field)
    entry.update({
        "prepared_equation": str(res.prepared.equation) if changes else None,
        "projective": list(res.projective),
        "charts": charts,
        "overlaps": overlaps,
        "exceptional_conic": str(res.conic),
        "conic_family": strat.summary(),
    })
    ok = (all(c["substitution_identity"] and c["exceptional_consistent"] and c["exponent"] == 2
              for c in charts)
          and all(overlaps.values()) and not strat.mismatches)
    entry["verdict"] = "pass" if ok else "fail"
    state.frontier.remove(src.name)
    state.blowups[src.name] = res
    for j, cr in enumerate(res.charts):
        state.add(cr.chart, d.line)
        state.origin[cr.chart.name] = (res, j)
    return ok


def _run_directives(state: _State, directives: Sequence[Directive], record: dict) -> bool:
    """Blow-ups first, then claims, conics and pruning, in file order."""
    ok = True
    for d in directives:
        if d.kind == "blowup":
            if not _run_blowup(state, d, record):
                record["status"] = "fail"
                return False
    for d in directives:
        if d.kind == "singular":
            r = _run_singular(state, d)
            record["singular"].append(r)
            ok &= r["verdict"] == "pass"
        elif d.kind == "conic":
            res = state.blowups.get(d.args["chart"])
            if res is None:
                raise PipelineError(f"no blow-up of {d.args['chart']!r} to classify", d.line)
            strat = res.conic_family(None)
            r = {"source": d.args["chart"], **_conic_expect(strat, d.args["body"], d.line,
                                                            state.field)}
            record["conics"].append(r)
            ok &= all(v["verdict"] == "pass" for k, v in r.items() if isinstance(v, dict))
        elif d.kind == "note":
            record["notes"].append({"chart": d.args["chart"], "text": d.args["text"]})
    for d in directives:
        if d.kind == "prune":
            r = _run_prune(state, d)
            record["pruned"].append(r)
            ok &= r["verdict"] == "pass"
        elif d.kind == "smooth":
            ch = state.chart(d.args["chart"], d.line)
            record.setdefault("declared_smooth", []).append(ch.name)
    record["status"] = "pass" if ok else "fail"
    return ok


def _batyrev(spec: PipelineSpec, euler: int) -> dict | None:
    if not spec.group:
        return None
    G = enumerate_group(spec.group)
    refl = reflection_census(G, 2)
    classes = len(G.conjugacy_classes)
    return {
        "group_order": G.order,
        "conjugacy_classes": classes,
        "euler": euler,
        "reflections_char2": [format_cycles(g) for g in refl],
        "counterexample": classes != euler and not refl,
    }


def run_pipeline(spec: PipelineSpec, verify_field: GF2k | None = GF2k(2),
                 timestamp: str | None = None) -> dict:
    F = parse_field(spec.field)
    if not isinstance(F, GF2k) or F.k != 1:
        raise PipelineError("the symbolic pipeline runs over gf2 only")
    try:
        f = parse_poly(spec.equation, F, spec.variables, spec.weights)
    except PolynomialError as exc:
        raise PipelineError(f"root equation: {exc}") from None
    state = _State(F, verify_field=verify_field)
    root = Chart(spec.name, f.with_weights(None))
    state.add(root, None)

    report: dict = {
        "tool": {"name": "a4crepant", "version": __version__,
                 "kernel": kernel.active_name(),
                 "pointwise_field": verify_field.name if verify_field else None,
                 "pointwise_modulus": modulus_str(verify_field.k) if verify_field else None,
                 "point_budget": point_budget()},
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "pipeline": spec.source,
        "root": {"name": spec.name, "variables": list(spec.variables),
                 "weights": list(spec.weights) if spec.weights else None,
                 "equation": str(root.equation),
                 "weighted_degrees": sorted(f.weighted_degree_set()) if spec.weights else None},
    }
    verdicts = []
    root_rec = {"blowups": [], "singular": [], "conics": [], "pruned": [], "notes": []}
    verdicts.append(_run_directives(state, spec.root_directives, root_rec))
    report["root"].update({k: v for k, v in root_rec.items() if k != "blowups"})

    steps = []
    failed = False
    for st in spec.steps:
        rec = {"step": st.number, "blowups": [], "singular": [], "conics": [], "pruned": [],
               "notes": []}
        if failed:
            rec["status"] = "skipped"
            steps.append(rec)
            continue
        ok = _run_directives(state, st.directives, rec)
        verdicts.append(ok)
        if any(b.get("verdict") == "fail" for b in rec["blowups"]):
            failed = True
        steps.append(rec)
    report["steps"] = steps

    final_rec = {"blowups": [], "singular": [], "conics": [], "pruned": [], "notes": []}
    declared = []
    if not failed:
        _run_directives(state, spec.final, final_rec)
        declared = final_rec.get("declared_smooth", [])
        for name in declared:
            if name not in state.frontier:
                raise PipelineError(f"smooth {name}: chart is not on the final frontier")
    smooth = {} if failed else {name: singular_locus(state.charts[name]).is_unit()
                                for name in state.frontier}
    report["final"] = {
        "frontier": list(state.frontier),
        "smooth": smooth,
        "declared_smooth": declared,
        "notes": final_rec["notes"],
        "verdict": "pass" if (not failed and all(smooth.values())
                              and set(declared) <= set(smooth)) else "fail",
    }
    verdicts.append(report["final"]["verdict"] == "pass")

    try:
        total = ledger_total([(label, expr) for label, expr, _ in spec.strata])
    except StratumError as exc:
        line = next((n for label, expr, n in spec.strata if expr in str(exc)), None)
        raise PipelineError(f"ledger: {exc}", line) from None
    ledger = {
        "entries": [{"label": l, "stratum": e, "euler": x, "class": c,
                     "evidence": spec.evidence.get(l)} for l, e, x, c in total.entries],
        "euler": total.euler,
        "class": str(total.motivic),
    }
    lok = True
    if spec.expect_euler is not None:
        ledger["expected_euler"] = spec.expect_euler
        lok &= total.euler == spec.expect_euler
    if spec.expect_class is not None:
        try:
            expected = MotivicClass.parse(spec.expect_class)
        except StratumError as exc:
            raise PipelineError(f"expect class: {exc}") from None
        ledger["expected_class"] = str(expected)
        lok &= total.motivic == expected
    ledger["verdict"] = "pass" if lok else "fail"
    verdicts.append(lok)
    report["ledger"] = ledger
    report["euler"] = total.euler
    report["motivic_class"] = str(total.motivic)
    bat = _batyrev(spec, total.euler)
    if bat is not None:
        report["batyrev"] = bat
    report["verdict"] = "pass" if all(verdicts) and not failed else "fail"
    return report


def run_file(path: str | Path, **kw) -> dict:
    return run_pipeline(load_pipeline(path), **kw)
