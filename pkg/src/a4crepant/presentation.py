"""End-to-end check of the presentation K[A,B,C,D,E]/(f) = K[x1..x4]^{A4} in
characteristic 2."""
from __future__ import annotations

from .fields import GF2
from .groups import (alternating_group, count_orbits, elementary_symmetric, is_invariant,
                     orbit_sum, parse_cycles, enumerate_group, reflection_census,
                     symmetric_to_elementary, symmetric_group, format_cycles)
from .poly import Polynomial, parse_poly, substitute
from .series import (RationalFunction, expand, hilbert_series_weighted_hypersurface,
                     molien_series, one_minus_power, pprod, series_equal)

X = ("x1", "x2", "x3", "x4")
S = ("s1", "s2", "s3", "s4")
INVARIANT_VARS = ("A", "B", "C", "D", "E")
WEIGHTS = (1, 2, 3, 4, 6)
RELATION = ("E^2 + (A^2*D + A*B*C + C^2)*E + A^4*D^2 + A^3*C^3 + A^2*B^3*D"
            " + B^3*C^2 + C^4")
ELEMENTARY_REP = "s1^4*s4^2 + s1^3*s3^3 + s1^2*s2^3*s4 + s2^3*s3^2 + s3^4"
LINEAR_COEFF = "s1^2*s4 + s1*s2*s3 + s3^2"
SERIES_ORDER = 24
BRUTE_FORCE_DEGREE = 6


def delta4() -> Polynomial:
    """Orbit sum of x1^3 x2^2 x3 under A4."""
    return orbit_sum(alternating_group(4), (3, 2, 1, 0), X, GF2).polynomial


def vandermonde() -> Polynomial:
    v = Polynomial.constant(1, X, GF2)
    for i in range(4):
        for j in range(i + 1, 4):
            v = v * (Polynomial.variable(X[i], X) + Polynomial.variable(X[j], X))
    return v


def relation() -> Polynomial:
    return parse_poly(RELATION, GF2, INVARIANT_VARS, WEIGHTS)


def _check(ok: bool, **details) -> dict:
    return {"pass": bool(ok), **details}


def verify_presentation(delta: Polynomial | None = None, relation_degree: int = 12) -> dict:
    """Checks (i)-(v); every failure is a verdict, never an exception."""
    G = alternating_group(4)
    S4 = symmetric_group(4)
    d = delta4() if delta is None else delta.embed(X)
    s = elementary_symmetric(4, X, GF2)
    checks = {}

    transposition = parse_cycles("(1 2)", 4)
    swap = enumerate_group([transposition], 4)
    inv_all = all(is_invariant(d, enumerate_group([g], 4)) for g in G.elements)
    inv_s4 = is_invariant(d, S4)
    checks["delta_invariance"] = _check(
        inv_all and not is_invariant(d, swap) and not inv_s4,
        invariant_under_A4=inv_all, elements_checked=G.order,
        invariant_under_transposition=is_invariant(d, swap), invariant_under_S4=inv_s4,
        terms=len(d.terms))

    lin = substitute(parse_poly(LINEAR_COEFF, GF2, S), dict(zip(S, s)), X)
    combo = d * d + lin * d
    expected = parse_poly(ELEMENTARY_REP, GF2, S)
    try:
        rep = symmetric_to_elementary(combo, S)
        rep_ok = rep == expected
        rep_text = str(rep)
    except ValueError as exc:
        rep_ok, rep_text = False, f"not symmetric: {exc}"
    direct = substitute(expected, dict(zip(S, s)), X) == combo
    checks["elementary_representation"] = _check(
        rep_ok and direct, computed=rep_text, expected=ELEMENTARY_REP, expanded_identity=direct)

    f = relation()
    phi = dict(zip(INVARIANT_VARS, list(s) + [d]))
    image = substitute(f.with_weights(None), phi, X)
    degs = sorted(f.weighted_degree_set())
    checks["kernel"] = _check(image.is_zero(), phi_of_f=str(image), weighted_degrees=degs)

    mol = molien_series(G.class_data(), G.order)
    compact = RationalFunction(
        (1, 0, 0, 0, 0, 0, 1), pprod(one_minus_power(k) for k in (1, 2, 3, 4)))
    hyp = hilbert_series_weighted_hypersurface(WEIGHTS, relation_degree)
    coeffs = expand(mol, SERIES_ORDER).coeffs
    nonneg = all(c.denominator == 1 and c >= 0 for c in coeffs)
    brute = [count_orbits(G, k) for k in range(BRUTE_FORCE_DEGREE + 1)]
    brute_ok = brute == [int(c) for c in coeffs[:BRUTE_FORCE_DEGREE + 1]]
    eq_compact = series_equal(mol, compact)
    eq_hyp = series_equal(mol, hyp)
    checks["hilbert_series"] = _check(
        eq_compact and eq_hyp and nonneg and brute_ok,
        molien=str(mol), relation_degree=relation_degree,
        equals_compact_form=eq_compact, equals_hypersurface_series=eq_hyp,
        coefficients=[str(c) for c in coeffs], nonnegative_integers=nonneg,
        orbit_counts=brute, orbit_counts_match=brute_ok)

    classes = G.conjugacy_classes
    refl = reflection_census(G, 2)
    checks["group"] = _check(
        len(classes) == 4 and not refl and G.order == 12,
        order=G.order, conjugacy_classes=len(classes),
        class_sizes=[len(c) for c in classes],
        reflections_char2=[format_cycles(g) for g in refl])

    return {"checks": checks, "verdict": "pass" if all(c["pass"] for c in checks.values()) else "fail"}
