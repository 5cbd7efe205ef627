"""Finite permutation groups acting on polynomial rings.

Permutations are tuples of 0-based images. ``g`` acts on variables by
``x_i -> x_{g(i)}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .fields import GF2
from .poly import Polynomial, PolynomialError

Perm = tuple[int, ...]


class PermutationSyntaxError(ValueError):
    pass


def parse_cycles(text: str, n: int | None = None) -> Perm:
    """Parse cycle notation such as ``"(1 2 3)(4)"`` (1-based points)."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\)\s*)+|\(\s*\)", text):
        raise PermutationSyntaxError(f"bad cycle notation {text!r}")
    cycles = [[int(x) for x in c.split()] for c in re.findall(r"\(([^)]*)\)", text)]
    pts = [x for c in cycles for x in c]
    if any(x < 1 for x in pts) or len(pts) != len(set(pts)):
        raise PermutationSyntaxError(f"points must be distinct positive integers: {text!r}")
    size = max(pts, default=0)
    if n is None:
        n = size
    elif size > n:
        raise PermutationSyntaxError(f"point {size} exceeds degree {n}")
    img = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def format_cycles(g: Perm) -> str:
    seen, out = set(), []
    for i in range(len(g)):
        if i in seen or g[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = g[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def compose(g: Perm, h: Perm) -> Perm:
    """``g ∘ h``: apply h first."""
    return tuple(g[h[i]] for i in range(len(h)))


def inverse(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def cycle_type(g: Perm) -> tuple[int, ...]:
    seen, lengths = set(), []
    for i in range(len(g)):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = g[j]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


@dataclass(frozen=True)
class PermutationAction:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def conjugacy_classes(self) -> list[list[Perm]]:
        remaining = list(self.elements)
        classes = []
        while remaining:
            x = remaining[0]
            cls = sorted({compose(compose(g, x), inverse(g)) for g in self.elements})
            classes.append(cls)
            remaining = [y for y in remaining if y not in set(cls)]
        return classes

    def cycle_types(self) -> dict[Perm, tuple[int, ...]]:
        return {g: cycle_type(g) for g in self.elements}

    def class_data(self) -> list[tuple[tuple[int, ...], int]]:
        """(cycle type, class size) per conjugacy class, as Molien input."""
        return [(cycle_type(c[0]), len(c)) for c in self.conjugacy_classes]


def enumerate_group(gens: Sequence[Perm | str], n: int | None = None) -> PermutationAction:
    """Close the generators under composition (breadth first)."""
    parsed = []
    for g in gens:
        parsed.append(parse_cycles(g, n) if isinstance(g, str) else tuple(g))
    if n is None:
        n = max((len(g) for g in parsed), default=0)
    parsed = [g + tuple(range(len(g), n)) for g in parsed]
    identity = tuple(range(n))
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in parsed:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    return PermutationAction(n, tuple(parsed), tuple(sorted(order)))


def alternating_group(n: int = 4) -> PermutationAction:
    if n == 4:
        return enumerate_group(["(1 2 3)", "(1 2)(3 4)"], 4)
    gens = [tuple(range(n))]
    for k in range(2, n):
        gens.append(parse_cycles(f"(1 2 {k + 1})", n))
    return enumerate_group(gens, n)


def symmetric_group(n: int) -> PermutationAction:
    if n < 2:
        return enumerate_group([tuple(range(n))], n)
    return enumerate_group([parse_cycles("(1 2)", n),
                            parse_cycles("(" + " ".join(map(str, range(1, n + 1))) + ")", n)], n)


# ------------------------------------------------------------------ action

def act_exponent(g: Perm, e: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(e)
    for i, k in enumerate(e):
        out[g[i]] = k
    return tuple(out)


def act(g: Perm, p: Polynomial) -> Polynomial:
    if len(g) != len(p.vars):
        raise PolynomialError("permutation degree differs from number of variables")
    return Polynomial(p.vars, p.field, {act_exponent(g, e): c for e, c in p.terms.items()},
                      p.weights)


@dataclass(frozen=True)
class OrbitSumPoly:
    source: tuple[int, ...]
    orbit_size: int
    polynomial: Polynomial


def orbit_sum(G: PermutationAction, m: Sequence[int], vars: Sequence[str] | None = None,
              field=GF2) -> OrbitSumPoly:
    """Sum of the distinct monomials in the G-orbit of ``x^m``."""
    m = tuple(m)
    if len(m) != G.degree:
        raise PolynomialError("monomial length differs from group degree")
    vars = tuple(vars) if vars else tuple(f"x{i + 1}" for i in range(G.degree))
    orbit = {act_exponent(g, m) for g in G.elements}
    poly = Polynomial(vars, field, {e: field.one for e in orbit})
    return OrbitSumPoly(m, len(orbit), poly)


def is_invariant(p: Polynomial, G: PermutationAction) -> bool:
    return all(act(g, p) == p for g in G.generators)


def count_orbits(G: PermutationAction, degree: int) -> int:
    """Number of G-orbits on monomials of the given total degree."""
    n = G.degree
    seen, count = set(), 0
    for e in _compositions(degree, n):
        if e in seen:
            continue
        count += 1
        seen.update(act_exponent(g, e) for g in G.elements)
    return count


def _compositions(d: int, n: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


# --------------------------------------------------------------- symmetric

def elementary_symmetric(n: int, vars: Sequence[str] | None = None, field=GF2) -> list[Polynomial]:
    vars = tuple(vars) if vars else tuple(f"x{i + 1}" for i in range(n))
    out = []
    for k in range(1, n + 1):
        terms = {}
        for e in _compositions(k, n):
            if all(x <= 1 for x in e):
                terms[e] = field.one
        out.append(Polynomial(vars, field, terms))
    return out


def symmetric_to_elementary(p: Polynomial, names: Sequence[str] | None = None) -> Polynomial:
    """Rewrite a symmetric polynomial in the elementary symmetric polynomials.

    Lex leading-term descent with x1 > x2 > ...; raises ``ValueError`` if the
    input is not symmetric.
    """
    n = len(p.vars)
    F = p.field
    names = tuple(names) if names else tuple(f"s{i + 1}" for i in range(n))
    if not is_invariant(p, symmetric_group(n)):
        raise ValueError("input is not a symmetric polynomial")
    s = elementary_symmetric(n, p.vars, F)
    cache: dict[tuple[int, ...], Polynomial] = {}

    def s_power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = s[i] ** k
        return cache[key]

    out = {}
    rest = p
    while rest:
        lead = max(rest.terms)
        c = rest.terms[lead]
        if any(lead[i] < lead[i + 1] for i in range(n - 1)):
            raise ValueError("leading exponent not a partition; input not symmetric")
        powers = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
        out[powers] = F.add(out[powers], c) if powers in out else c
        prod = Polynomial.constant(1, p.vars, F).scale(c)
        for i, k in enumerate(powers):
            if k:
                prod = prod * s_power(i, k)
        rest = rest - prod
    return Polynomial(names, F, out)


# -------------------------------------------------------------- reflections

def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    if p == 0:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = (1 / m[rank][col]) if p == 0 else pow(m[rank][col], p - 2, p)
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [(a - f * b) if p == 0 else (a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def fixed_space_codimension(g: Perm, characteristic: int) -> int:
    """rank(g - 1) for the permutation matrix of g over the prime field."""
    n = len(g)
    rows = [[(1 if g[j] == i else 0) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return _rank_mod_p(rows, characteristic)


def reflection_census(G: PermutationAction, characteristic: int) -> list[Perm]:
    """Non-identity elements fixing a hyperplane (pseudo-reflections)."""
    identity = tuple(range(G.degree))
    return [g for g in G.elements
            if g != identity and fixed_space_codimension(g, characteristic) == 1]
