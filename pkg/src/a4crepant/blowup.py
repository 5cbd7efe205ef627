"""Hypersurface charts, blow-ups along coordinate-aligned codimension-3 centers,
and the certificates that make each blow-up crepant.

Chart convention: blowing up along (c0, c1, c2) with projective coordinates
(y0 : y1 : y2), chart j keeps the coordinate c_j and replaces c_i (i != j) by
y_i, via c_i -> c_j * y_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .conics import FamilyStratification, classify_family, conic_coefficients
from .fields import GF2k
from .ideal import IdealBasis, ideal_membership, power, radical_membership
from .poly import Polynomial, PolynomialError, jacobian, substitute


class BlowupError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    name: str
    equation: Polynomial
    exceptional: str | None = None  # coordinate cutting out the newest exceptional divisor

    def __post_init__(self):
        if self.equation.is_zero():
            raise BlowupError(f"chart {self.name}: zero hypersurface")

    @property
    def coords(self) -> tuple[str, ...]:
        return self.equation.vars

    def poly(self, text_or_poly) -> Polynomial:
        from .poly import parse_poly
        if isinstance(text_or_poly, Polynomial):
            return text_or_poly.embed(self.coords)
        return parse_poly(text_or_poly, self.equation.field, self.coords)


# ------------------------------------------------------- coordinate changes

@dataclass(frozen=True)
class CoordinateChange:
    """``old = new + shift`` where ``shift`` involves only untouched coordinates."""

    old: str
    new: str
    shift: Polynomial


def change_coordinates(ch: Chart, changes: Sequence[CoordinateChange]) -> tuple[Chart, dict]:
    """Apply triangular changes; returns the new chart and the substitution used."""
    olds = [c.old for c in changes]
    news = [c.new for c in changes]
    if len(set(olds)) != len(olds) or len(set(news)) != len(news):
        raise BlowupError("each coordinate may be changed at most once")
    for c in changes:
        if c.old not in ch.coords:
            raise BlowupError(f"{c.old!r} is not a coordinate of {ch.name}")
        if c.new in ch.coords and c.new not in olds:
            raise BlowupError(f"new coordinate {c.new!r} clashes with {ch.name}")
    touched = set(olds) | set(news)
    for c in changes:
        used = set(c.shift.variables_used())
        if used & touched:
            raise BlowupError(
                f"substitution for {c.old} is not invertible: shift uses {sorted(used & touched)}")
    rename = dict(zip(olds, news))
    new_vars = tuple(rename.get(v, v) for v in ch.coords)
    F = ch.equation.field
    mapping = {}
    for c in changes:
        mapping[c.old] = Polynomial.variable(c.new, new_vars, F) + c.shift.embed(new_vars)
    eq = substitute(ch.equation, mapping, new_vars)
    exc = rename.get(ch.exceptional, ch.exceptional) if ch.exceptional else None
    return Chart(ch.name, eq, exc), mapping


def inverse_change(mapping: Mapping[str, Polynomial], changes: Sequence[CoordinateChange],
                   old_vars: Sequence[str]) -> dict:
    """Inverse map ``new -> old + shift`` (shift evaluated in old coordinates)."""
    out = {}
    for c in changes:
        out[c.new] = Polynomial.variable(c.old, old_vars, c.shift.field) + c.shift.embed(old_vars)
    return out


# --------------------------------------------------------------- loci

def singular_locus(ch: Chart) -> IdealBasis:
    """Hypersurface plus all formal partials."""
    f = ch.equation
    return IdealBasis([f] + jacobian(f), f.vars, f.field)


def locus_containment(L: IdealBasis, g: Polynomial) -> bool:
    """V(L) ∩ {g = 0} is empty."""
    return (L + g.embed(L.vars)).is_unit()


@dataclass
class RadicalEquality:
    forward: list[bool]   # generators of J vanish on V(I)
    backward: list[bool]  # generators of I vanish on V(J)

    @property
    def holds(self) -> bool:
        return all(self.forward) and all(self.backward)


def radical_equal(I: IdealBasis, J: IdealBasis) -> RadicalEquality:
    return RadicalEquality(
        [radical_membership(g, I) for g in J.generators],
        [radical_membership(g, J) for g in I.generators])


def union_equal(I: IdealBasis, components: Sequence[IdealBasis]) -> RadicalEquality:
    """V(I) = ∪ V(C_k), without computing the intersection: every generator
    of I vanishes on each component, and every product of one generator per
    component vanishes on V(I)."""
    fwd = [radical_membership(g, C) for C in components for g in I.generators]
    prods = [Polynomial.constant(1, I.vars, I.field)]
    for C in components:
        prods = [p * g for p in prods for g in C.generators]
    back = [radical_membership(p, I) for p in prods]
    return RadicalEquality(back, fwd)


# ---------------------------------------------------------------- centers

@dataclass(frozen=True)
class Center:
    generators: tuple[Polynomial, ...]
    changes: tuple[CoordinateChange, ...] = ()


def aligned_coordinates(ch: Chart, gens: Sequence[Polynomial]) -> tuple[str, ...] | None:
    """Coordinate names if every generator is a single chart coordinate."""
    out = []
    for g in gens:
        g = g.embed(ch.coords)
        if len(g.terms) != 1:
            return None
        (e, c), = g.terms.items()
        if c != ch.equation.field.one or sum(e) != 1:
            return None
        out.append(ch.coords[e.index(1)])
    return tuple(out)


def prepare(ch: Chart, C: Center) -> tuple[Chart, tuple[Polynomial, ...], dict]:
    """Apply the center's coordinate change to the chart and its generators."""
    if not C.changes:
        return ch, tuple(g.embed(ch.coords) for g in C.generators), {}
    new, mapping = change_coordinates(ch, C.changes)
    gens = tuple(substitute(g.embed(ch.coords), mapping, new.coords) for g in C.generators)
    return new, gens, mapping


def multiplicity_along(ch: Chart, gens: Sequence[Polynomial], top: int = 4) -> int:
    """Largest m <= top with the equation in I^m (0 if not even in I)."""
    f = ch.equation
    I = IdealBasis(list(gens), f.vars, f.field)
    m = 0
    for k in range(1, top + 1):
        if not power(I, k).contains(f):
            break
        m = k
    return m


@dataclass
class CrepancyCertificate:
    chart: str
    center: list[str]
    aligned: bool
    coordinates: list[str]
    codimension: int
    smooth_center: bool
    in_square: bool
    in_cube: bool
    witness_square: str
    witness_cube: str

    @property
    def multiplicity_two(self) -> bool:
        return self.in_square and not self.in_cube

    @property
    def passed(self) -> bool:
        return self.aligned and self.codimension == 3 and self.smooth_center and self.multiplicity_two

    def as_dict(self) -> dict:
        return {
            "chart": self.chart,
            "center": self.center,
            "coordinate_aligned": self.aligned,
            "coordinates": self.coordinates,
            "codimension": self.codimension,
            "smooth_center": self.smooth_center,
            "smoothness_reason": "coordinate subspace" if self.aligned else "not certified",
            "in_I2": self.in_square,
            "in_I3": self.in_cube,
            "normal_form_mod_I2": self.witness_square,
            "normal_form_mod_I3": self.witness_cube,
            "multiplicity_2": self.multiplicity_two,
            "verdict": "pass" if self.passed else "fail",
        }


def crepancy_certificate(ch: Chart, C: Center | Sequence[Polynomial]) -> CrepancyCertificate:
    if not isinstance(C, Center):
        C = Center(tuple(C))
    work, gens, _ = prepare(ch, C)
    coords = aligned_coordinates(work, gens)
    aligned = coords is not None and len(coords) == 3
    codim = len(set(coords)) if coords is not None else 0
    f = work.equation
    I = IdealBasis(list(gens), f.vars, f.field)
    sq = ideal_membership(f, power(I, 2))
    cube = ideal_membership(f, power(I, 3))
    return CrepancyCertificate(
        chart=ch.name, center=[str(g) for g in C.generators],
        aligned=aligned, coordinates=list(coords or ()), codimension=codim,
        smooth_center=aligned and codim == 3,
        in_square=sq.member, in_cube=cube.member,
        witness_square=str(sq.normal_form), witness_cube=str(cube.normal_form))


# ---------------------------------------------------------------- blow-up

@dataclass
class ChartResult:
    index: int
    chart: Chart
    transformed: Polynomial
    exponent: int
    exceptional_equation: Polynomial

    def identity_holds(self) -> bool:
        c = self.chart.exceptional
        cj = Polynomial.variable(c, self.chart.coords, self.chart.equation.field)
        return self.transformed == cj ** self.exponent * self.chart.equation

    def exceptional_consistent(self) -> bool:
        return self.exceptional_equation == self.chart.equation.specialize({self.chart.exceptional: 0})


@dataclass
class BlowupResult:
    source: Chart
    prepared: Chart
    center: tuple[str, str, str]
    projective: tuple[str, str, str]
    charts: list[ChartResult]
    conic: Polynomial
    substitution: dict = dc_field(default_factory=dict)

    def chart(self, j: int) -> Chart:
        return self.charts[j].chart

    def base(self) -> tuple[str, ...]:
        return tuple(v for v in self.prepared.coords if v not in self.center)

    def conic_family(self, verify_field: GF2k | None = GF2k(2)) -> FamilyStratification:
        return classify_family(conic_coefficients(self.conic, self.projective), verify_field)

    def covered(self, j: int) -> bool:
        """Chart j adds nothing: its points with all other y_i = 0 do not exist."""
        res = self.charts[j]
        others = [Polynomial.variable(self.projective[i], res.chart.coords,
                                      res.chart.equation.field)
                  for i in range(3) if i != j]
        return IdealBasis([res.chart.equation] + others).is_unit()

    def overlap_consistent(self, j: int, k: int) -> bool:
        """Strict transforms of charts j and k agree on y_k != 0 (denominators cleared)."""
        cj, ck = self.center[j], self.center[k]
        yj, yk = self.projective[j], self.projective[k]
        sk = self.charts[k].chart.equation
        target = self.charts[j].chart.equation
        tv = target.vars
        pos = {v: i for i, v in enumerate(tv)}
        ys = [self.projective[i] for i in range(3) if i not in (j, k)]
        F = sk.field
        raw = []
        for e, c in sk.terms.items():
            out = [0] * len(tv)
            yk_exp = 0
            den = 0
            for v, a in zip(sk.vars, e):
                if not a:
                    continue
                if v == ck:          # c_k = c_j * y_k
                    out[pos[cj]] += a
                    yk_exp += a
                elif v == yj:        # y'_j = 1 / y_k
                    den += a
                elif v in ys:        # y'_i = y_i / y_k
                    out[pos[v]] += a
                    den += a
                else:
                    out[pos[v]] += a
            raw.append((out, yk_exp - den, c))
        N = max(0, -min(x for _, x, _ in raw))
        lhs = {}
        for out, x, c in raw:
            out[pos[yk]] += x + N
            key = tuple(out)
            lhs[key] = F.add(lhs[key], c) if key in lhs else c
        left = Polynomial(tv, F, lhs)
        y = Polynomial.variable(yk, tv, F)
        if N >= 2:
            return left == y ** (N - 2) * target
        return left * y ** (2 - N) == target


def _degree2_part(f: Polynomial, center: Sequence[str], projective: Sequence[str]) -> Polynomial:
    """Quadratic part of f in the center coordinates, with coefficients
    restricted to the center, written in the projective coordinates."""
    idx = [f.vars.index(c) for c in center]
    base = [v for v in f.vars if v not in center]
    new_vars = tuple(projective) + tuple(base)
    bidx = [f.vars.index(v) for v in base]
    terms = {}
    for e, c in f.terms.items():
        if sum(e[i] for i in idx) != 2:
            continue
        key = tuple(e[i] for i in idx) + tuple(e[i] for i in bidx)
        terms[key] = c
    return Polynomial(new_vars, f.field, terms)


def blow_up(ch: Chart, C: Center, projective: Sequence[str], names: Sequence[str] | None = None,
            enforce: bool = True) -> BlowupResult:
    """All three charts of the blow-up of ``ch`` along ``C``."""
    work, gens, mapping = prepare(ch, C)
    coords = aligned_coordinates(work, gens)
    if coords is None or len(set(coords)) != 3 or len(coords) != 3:
        raise BlowupError(f"center of {ch.name} is not three distinct coordinates")
    projective = tuple(projective)
    if len(projective) != 3 or len(set(projective)) != 3:
        raise BlowupError("need three distinct projective coordinate names")
    for j, y in enumerate(projective):
        if y in work.coords and y not in coords:
            raise BlowupError(f"projective name {y!r} clashes with a coordinate of {ch.name}")
    if enforce:
        m = multiplicity_along(work, gens, top=3)
        if m != 2:
            raise BlowupError(f"multiplicity of {ch.name} along the center is {m}, not 2")
    names = list(names) if names else [f"{ch.name}_{j}" for j in range(3)]
    f = work.equation
    F = f.field
    results = []
    for j in range(3):
        cj = coords[j]
        new_vars = tuple(projective[coords.index(v)] if v in coords and v != cj else v
                         for v in work.coords)
        cpoly = Polynomial.variable(cj, new_vars, F)
        m = {coords[i]: cpoly * Polynomial.variable(projective[i], new_vars, F)
             for i in range(3) if i != j}
        t = substitute(f, m, new_vars)
        ci = new_vars.index(cj)
        N = min(e[ci] for e in t.terms)
        strict = Polynomial(new_vars, F, {e[:ci] + (e[ci] - N,) + e[ci + 1:]: c
                                          for e, c in t.terms.items()})
        chart = Chart(names[j], strict, cj)
        results.append(ChartResult(j, chart, t, N, strict.specialize({cj: 0})))
    return BlowupResult(ch, work, coords, projective, results,
                        _degree2_part(f, coords, projective), mapping)


def smooth(ch: Chart) -> bool:
    return singular_locus(ch).is_unit()


def restrict_exceptional(ch: Chart) -> IdealBasis:
    """Singular locus intersected with the newest exceptional divisor."""
    if ch.exceptional is None:
        raise PolynomialError(f"chart {ch.name} has no exceptional coordinate")
    return singular_locus(ch) + Polynomial.variable(ch.exceptional, ch.coords,
                                                     ch.equation.field)
