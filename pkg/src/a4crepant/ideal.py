"""Gröbner bases and ideal-theoretic predicates.

Buchberger's algorithm with the Gebauer-Möller criteria and the normal
selection strategy. GF(2) ideals run through the packed reduction kernel
(compiled when available); other fields use a generic pure-Python reducer.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Sequence

import numpy as np

from . import kernel
from .fields import GF2k
from .poly import Polynomial, PolynomialError

DEFAULT_POINT_BUDGET = 1 << 24


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex``, or ``elim``: block order with ``eliminate`` first."""

    kind: str = "grevlex"
    eliminate: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and not self.eliminate:
            raise ValueError("elimination order needs variables to eliminate")

    @classmethod
    def elimination(cls, names: Sequence[str]) -> "MonomialOrder":
        return cls("elim", tuple(names))

    def __str__(self):
        return self.kind if self.kind != "elim" else f"elim({','.join(self.eliminate)})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class _Layout:
    """Packing of exponent vectors and order keys into fixed-width fields."""

    def __init__(self, vars: Sequence[str], order: MonomialOrder, width: int = 8):
        self.vars = tuple(vars)
        n = self.n = len(self.vars)
        self.order = order
        if order.kind == "elim":
            missing = [v for v in order.eliminate if v not in self.vars]
            if missing:
                raise PolynomialError(f"cannot eliminate unknown variables {missing}")
            elim = [self.vars.index(v) for v in order.eliminate]
            rest = [i for i in range(n) if i not in elim]
            self.perm = elim + rest
            blocks = [(0, len(elim)), (len(elim), n)]
        else:
            self.perm = list(range(n))
            blocks = [(0, n)]
        rows = []
        if order.kind == "lex":
            rows = [[int(c == r) for c in range(n)] for r in range(n)]
        else:
            for lo, hi in blocks:
                for r in range(hi - lo):
                    rows.append([int(lo <= c < hi - r) for c in range(n)])
        self.rows = rows
        self.width = width
        self.bits = max(n, 1) * width
        self.fmax = (1 << (width - 1)) - 1
        self.guard = sum(1 << (width * i + width - 1) for i in range(n))
        self.mask = (1 << width) - 1
        self.lows = sum(1 << (width * i) for i in range(n))
        self.full = (1 << self.bits) - 1
        # grevlex packs variable 0 lowest so its key is a prefix sum: exp * lows
        self.reverse = order.kind == "grevlex"

    def _shift(self, i: int) -> int:
        return self.width * (i if self.reverse else self.n - 1 - i)

    def encode(self, e: Sequence[int]) -> tuple[int, int]:
        internal = [e[p] for p in self.perm]
        return self.key_of(internal), self.pack(internal)

    def pack(self, internal: Sequence[int]) -> int:
        out = 0
        for i, x in enumerate(internal):
            if x > self.fmax:
                raise OverflowError("exponent exceeds packed field")
            out |= x << self._shift(i)
        return out

    def unpack(self, exp: int) -> list[int]:
        m = self.mask
        return [(exp >> self._shift(i)) & m for i in range(self.n)]

    def key_of(self, internal: Sequence[int]) -> int:
        w, out = self.width, 0
        for r, row in enumerate(self.rows):
            v = sum(a * b for a, b in zip(row, internal))
            if v > self.fmax:
                raise OverflowError("order key exceeds packed field")
            out |= v << (w * (self.n - 1 - r))
        return out

    def decode(self, exp: int) -> tuple[int, ...]:
        internal = self.unpack(exp)
        e = [0] * self.n
        for i, p in enumerate(self.perm):
            e[p] = internal[i]
        return tuple(e)

    def lcm(self, e1: int, e2: int) -> tuple[int, int]:
        # fieldwise max: the guard bit survives the subtraction where e1 >= e2
        g = self.guard
        sel = ((((e1 | g) - e2) & g) >> (self.width - 1)) * self.mask
        m = (e1 & sel) | (e2 & ~sel)
        kind = self.order.kind
        if kind == "lex":
            return m, m
        if kind == "grevlex":
            # both inputs have degree <= fmax, so the prefix sums cannot carry
            key = (m * self.lows) & self.full
            if key >> (self.width * (self.n - 1)) > self.fmax:
                raise OverflowError("order key exceeds packed field")
            return key, m
        return self.key_of(self.unpack(m)), m

    def coprime(self, e1: int, e2: int) -> bool:
        g, lows = self.guard, self.lows
        return not (((e1 | g) - lows) & ((e2 | g) - lows) & g)

    def divides(self, e1: int, e2: int) -> bool:
        return not (e2 - e1) & self.guard


# ---------------------------------------------------------------- backends

class _GF2Backend:
    def __init__(self, layout: _Layout):
        self.layout = layout
        self.k = kernel.get(layout.bits)

    def to_packed(self, p: Polynomial):
        enc = sorted((self.layout.encode(e) for e in p.terms), reverse=True)
        return [k for k, _ in enc], [e for _, e in enc]

    def from_packed(self, p, vars, field):
        dec = self.layout.decode
        return Polynomial(vars, field, {dec(e): 1 for e in p[1]})

    def reducer(self, polys):
        r = self.k.Reducer(self.layout.guard)
        for p in polys:
            r.add(p[0], p[1])
        return r

    def reduce(self, reducer, p):
        return reducer.reduce(p[0], p[1])

    def monic(self, p):
        return p

    def spoly(self, f, g, lk, le):
        return self.k.spoly(f[0], f[1], g[0], g[1], lk - f[0][0], le - f[1][0],
                            lk - g[0][0], le - g[1][0], self.layout.guard)


class _GenericReducer:
    def __init__(self, field, guard):
        self.F = field
        self.guard = guard
        self.divs = []

    def add(self, keys, exps, coeffs):
        self.divs.append((keys[0], exps[0], coeffs[0], keys, exps, coeffs))

    def reduce(self, keys, exps, coeffs):
        F, guard = self.F, self.guard
        cur = {k: [e, c] for k, e, c in zip(keys, exps, coeffs)}
        heap = [-k for k in keys]
        heapify(heap)
        rk, re_, rc = [], [], []
        while heap:
            k = -heappop(heap)
            ent = cur.get(k)
            if ent is None:
                continue
            e, c = ent
            for dk0, de0, dc0, dks, des, dcs in self.divs:
                if not (e - de0) & guard:
                    mk, me = k - dk0, e - de0
                    factor = F.neg(F.div(c, dc0))
                    for a, b, cc in zip(dks, des, dcs):
                        t, tb = a + mk, b + me
                        if (t | tb) & guard:
                            raise OverflowError("packed monomial field overflow")
                        v = F.mul(cc, factor)
                        if t in cur:
                            s = F.add(cur[t][1], v)
                            if F.is_zero(s):
                                del cur[t]
                            else:
                                cur[t][1] = s
                        else:
                            cur[t] = [tb, v]
                            heappush(heap, -t)
                    break
            else:
                del cur[k]
                rk.append(k)
                re_.append(e)
                rc.append(c)
        return rk, re_, rc


class _FieldBackend:
    def __init__(self, layout: _Layout, field):
        self.layout = layout
        self.F = field

    def to_packed(self, p: Polynomial):
        enc = sorted(((*self.layout.encode(e), c) for e, c in p.terms.items()),
                     key=lambda t: t[0], reverse=True)
        return [t[0] for t in enc], [t[1] for t in enc], [t[2] for t in enc]

    def from_packed(self, p, vars, field):
        dec = self.layout.decode
        return Polynomial(vars, field, {dec(e): c for e, c in zip(p[1], p[2])})

    def reducer(self, polys):
        r = _GenericReducer(self.F, self.layout.guard)
        for p in polys:
            r.add(*p)
        return r

    def reduce(self, reducer, p):
        return reducer.reduce(*p)

    def monic(self, p):
        F = self.F
        inv = F.inv(p[2][0])
        return p[0], p[1], [F.mul(c, inv) for c in p[2]]

    def spoly(self, f, g, lk, le):
        F, guard = self.F, self.layout.guard
        cur = {}
        for poly, sign in ((f, F.one), (g, F.neg(F.one))):
            mk, me = lk - poly[0][0], le - poly[1][0]
            s = F.mul(sign, F.inv(poly[2][0]))
            for a, b, c in zip(*poly):
                t, tb = a + mk, b + me
                if (t | tb) & guard:
                    raise OverflowError("packed monomial field overflow")
                v = F.mul(c, s)
                if t in cur:
                    x = F.add(cur[t][1], v)
                    if F.is_zero(x):
                        del cur[t]
                    else:
                        cur[t][1] = x
                else:
                    cur[t] = [tb, v]
        keys = sorted(cur, reverse=True)
        return keys, [cur[k][0] for k in keys], [cur[k][1] for k in keys]


def _backend(layout: _Layout, field):
    if isinstance(field, GF2k) and field.k == 1:
        return _GF2Backend(layout)
    return _FieldBackend(layout, field)


# ------------------------------------------------------------- Buchberger

@dataclass
class GBStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    kernel: str = ""


def _buchberger(polys, layout: _Layout, be, stats: GBStats):
    store = []
    lead_e = []
    G: list[int] = []
    B: list[tuple[int, int]] = []
    lcm_cache: dict[tuple[int, int], tuple[int, int]] = {}

    def lcm(i, j):
        key = (i, j) if i < j else (j, i)
        if key not in lcm_cache:
            lcm_cache[key] = layout.lcm(lead_e[i], lead_e[j])
        return lcm_cache[key]

    def update(h):
        nonlocal G, B
        C = list(G)
        D = []
        while C:
            g1 = C.pop(0)
            if layout.coprime(lead_e[h], lead_e[g1]):
                D.append(g1)
                continue
            l1 = lcm(h, g1)[1]
            if not any(layout.divides(lcm(h, g2)[1], l1) for g2 in itertools.chain(C, D)):
                D.append(g1)
        E = [(g, h) for g in D if not layout.coprime(lead_e[h], lead_e[g])]
        newB = []
        for g1, g2 in B:
            l12 = lcm(g1, g2)[1]
            if (not layout.divides(lead_e[h], l12)
                    or lcm(g1, h)[1] == l12 or lcm(h, g2)[1] == l12):
                newB.append((g1, g2))
        B = newB + E
        G = [g for g in G if not layout.divides(lead_e[h], lead_e[g])] + [h]

    def reducer_for(indices):
        return be.reducer([store[i] for i in indices])

    red = reducer_for([])
    for p in polys:
        if not p[0]:
            continue
        h = be.reduce(red, p) if len(G) else p
        if not h[0]:
            continue
        h = be.monic(h)
        if lead_e_is_const(h):
            return [h]
        store.append(h)
        lead_e.append(h[1][0])
        old = list(G)
        update(len(store) - 1)
        if set(old) - set(G):
            red = reducer_for(G)
        else:
            red.add(*h)

    while B:
        best = min(range(len(B)), key=lambda t: (lcm(*B[t])[0], B[t]))
        i, j = B.pop(best)
        stats.pairs_considered += 1
        lk, le = lcm(i, j)
        s = be.spoly(store[i], store[j], lk, le)
        h = be.reduce(red, s) if s[0] else s
        stats.pairs_reduced += 1
        if not h[0]:
            stats.zero_reductions += 1
            continue
        h = be.monic(h)
        if lead_e_is_const(h):
            return [h]
        store.append(h)
        lead_e.append(h[1][0])
        old = set(G)
        update(len(store) - 1)
        if old - set(G):
            red = reducer_for(G)
        else:
            red.add(*h)

    # interreduce to the reduced basis
    basis = [store[g] for g in G]
    out = []
    for idx, g in enumerate(basis):
        others = be.reducer([b for t, b in enumerate(basis) if t != idx])
        out.append(be.monic(be.reduce(others, g)))
    out.sort(key=lambda p: p[0][0])
    return out


def lead_e_is_const(p) -> bool:
    return p[1][0] == 0


def _groebner_packed(polys: Sequence[Polynomial], vars, field, order: MonomialOrder,
                     stats: GBStats | None = None):
    stats = stats if stats is not None else GBStats()
    width = 8
    while True:
        layout = _Layout(vars, order, width)
        be = _backend(layout, field)
        stats.kernel = getattr(be, "k", None).NAME if isinstance(be, _GF2Backend) else "generic"
        try:
            packed = [be.to_packed(p) for p in polys if p]
            packed.sort(key=lambda p: (p[0][0], len(p[0])))
            return layout, be, _buchberger(packed, layout, be, stats)
        except OverflowError:
            if width >= 32:
                raise
            width *= 2


def groebner_basis(I: "IdealBasis", order: MonomialOrder = GREVLEX) -> list[Polynomial]:
    """Reduced Gröbner basis of ``I`` (deterministic for a fixed order)."""
    return I.groebner(order)


# ------------------------------------------------------------------ ideals

class IdealBasis:
    """A finite generating set with cached reduced Gröbner bases per order."""

    def __init__(self, generators: Sequence[Polynomial], vars: Sequence[str] | None = None,
                 field=None):
        gens = list(generators)
        if vars is None:
            if not gens:
                raise PolynomialError("empty ideal needs an explicit variable list")
            vars = gens[0].vars
        self.vars = tuple(vars)
        if field is None:
            field = gens[0].field if gens else GF2k(1)
        self.field = field
        self.generators = tuple(g.embed(self.vars) for g in gens)
        for g in self.generators:
            if g.field != field:
                raise PolynomialError("generators over different fields")
        self._gb: dict[MonomialOrder, list[Polynomial]] = {}
        self._red: dict[MonomialOrder, tuple] = {}
        self.stats: dict[MonomialOrder, GBStats] = {}

    def __repr__(self):
        return f"IdealBasis([{', '.join(str(g) for g in self.generators)}])"

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = [other]
        if isinstance(other, IdealBasis):
            other = other.generators
        return IdealBasis(list(self.generators) + list(other), self.vars, self.field)

    def embed(self, vars):
        return IdealBasis([g.embed(vars) for g in self.generators], vars, self.field)

    def groebner(self, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
        if order not in self._gb:
            stats = GBStats()
            layout, be, packed = _groebner_packed(self.generators, self.vars, self.field,
                                                  order, stats)
            self._gb[order] = [be.from_packed(p, self.vars, self.field) for p in packed]
            self._red[order] = (layout, be, be.reducer(packed))
            self.stats[order] = stats
        return list(self._gb[order])

    def normal_form(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        self.groebner(order)
        layout, be, red = self._red[order]
        p = p.embed(self.vars)
        if not p:
            return p
        try:
            r = be.reduce(red, be.to_packed(p))
        except OverflowError:
            # fall back to a wider layout for this one reduction
            wide_layout, wide_be, packed = _groebner_packed(
                self._gb[order], self.vars, self.field, order)
            r = wide_be.reduce(wide_be.reducer(packed), wide_be.to_packed(p))
            return wide_be.from_packed(r, self.vars, self.field)
        return be.from_packed(r, self.vars, self.field)

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant() and not gb[0].is_zero()


def _fresh(vars: Sequence[str], base: str = "t") -> str:
    name, i = f"_{base}", 0
    while name in vars:
        i += 1
        name = f"_{base}{i}"
    return name


@dataclass
class Membership:
    member: bool
    normal_form: Polynomial

    def __bool__(self):
        return self.member


def ideal_membership(p: Polynomial, I: IdealBasis,
                     order: MonomialOrder = GREVLEX) -> Membership:
    nf = I.normal_form(p, order)
    return Membership(nf.is_zero(), nf)


def is_unit_ideal(I: IdealBasis) -> bool:
    return I.is_unit()


def radical_membership(p: Polynomial, I: IdealBasis) -> bool:
    """Whether ``p`` vanishes on V(I) over the algebraic closure (Rabinowitsch)."""
    p = p.embed(I.vars)
    if p.is_zero():
        return True
    t = _fresh(I.vars)
    ext = (t,) + I.vars
    F = I.field
    tp = Polynomial.variable(t, ext, F) * p.embed(ext)
    gens = [g.embed(ext) for g in I.generators] + [Polynomial.constant(1, ext, F) - tp]
    return IdealBasis(gens, ext, F).is_unit()


def _eliminate(gens: Sequence[Polynomial], ext_vars, drop: Sequence[str], keep_vars, field):
    J = IdealBasis(gens, ext_vars, field)
    gb = J.groebner(MonomialOrder.elimination(drop))
    out = []
    for g in gb:
        if all(g.degree_in(v) <= 0 for v in drop):
            out.append(g.embed(keep_vars))
    return IdealBasis(out, keep_vars, field)


def intersect(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    """I ∩ J = (t·I + (1-t)·J) ∩ K[x]."""
    _same_ring(I, J)
    t = _fresh(I.vars)
    ext = (t,) + I.vars
    F = I.field
    tv = Polynomial.variable(t, ext, F)
    one = Polynomial.constant(1, ext, F)
    gens = [tv * g.embed(ext) for g in I.generators]
    gens += [(one - tv) * g.embed(ext) for g in J.generators]
    return _eliminate(gens, ext, [t], I.vars, F)


def product(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    _same_ring(I, J)
    return IdealBasis([a * b for a in I.generators for b in J.generators], I.vars, I.field)


def power(I: IdealBasis, m: int) -> IdealBasis:
    if m < 0:
        raise ValueError("ideal power must be non-negative")
    if m == 0:
        return IdealBasis([Polynomial.constant(1, I.vars, I.field)], I.vars, I.field)
    gens = []
    seen = set()
    for combo in itertools.combinations_with_replacement(I.generators, m):
        g = combo[0]
        for h in combo[1:]:
            g = g * h
        if g and g not in seen:
            seen.add(g)
            gens.append(g)
    return IdealBasis(gens, I.vars, I.field)


def saturate(I: IdealBasis, g: Polynomial) -> IdealBasis:
    """I : g^∞ via an auxiliary variable and elimination."""
    t = _fresh(I.vars)
    ext = (t,) + I.vars
    F = I.field
    tg = Polynomial.variable(t, ext, F) * g.embed(ext)
    gens = [h.embed(ext) for h in I.generators] + [Polynomial.constant(1, ext, F) - tg]
    return _eliminate(gens, ext, [t], I.vars, F)


def ideal_ops(I: IdealBasis, J: IdealBasis | None = None, op: str = "intersect",
              m: int | None = None, g: Polynomial | None = None) -> IdealBasis:
    if op == "intersect":
        return intersect(I, J)
    if op == "product":
        return product(I, J)
    if op == "power":
        return power(I, m)
    if op == "saturate_by":
        return saturate(I, g)
    raise ValueError(f"unknown ideal operation {op!r}")


def _same_ring(I: IdealBasis, J: IdealBasis):
    if I.vars != J.vars or I.field != J.field:
        raise PolynomialError("ideals live in different rings")


def is_groebner(polys: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger criterion, checked on every S-pair without shortcuts."""
    polys = [p for p in polys if p]
    if not polys:
        return True
    vars, F = polys[0].vars, polys[0].field
    layout = _Layout(vars, order, 16)
    be = _backend(layout, F)
    packed = [be.monic(be.to_packed(p)) for p in polys]
    red = be.reducer(packed)
    for i, j in itertools.combinations(range(len(packed)), 2):
        lk, le = layout.lcm(packed[i][1][0], packed[j][1][0])
        s = be.spoly(packed[i], packed[j], lk, le)
        if s[0] and be.reduce(red, s)[0]:
            return False
    return True


def leading_exponent(p: Polynomial, order: MonomialOrder = GREVLEX):
    layout = _Layout(p.vars, order, 16)
    best = max(p.terms, key=lambda e: layout.encode(e)[0])
    return best


def is_reduced(polys: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Monic leads and no lead divides any monomial of another element."""
    polys = [p for p in polys if p]
    leads = [leading_exponent(p, order) for p in polys]
    for p, lead in zip(polys, leads):
        if p.terms[lead] != p.field.one:
            return False
    for i, p in enumerate(polys):
        for j, lead in enumerate(leads):
            if i == j:
                continue
            for e in p.terms:
                if all(a <= b for a, b in zip(lead, e)):
                    return False
    return True


# ------------------------------------------------------------ point counts

def point_budget() -> int:
    return int(os.environ.get("A4CREPANT_POINT_BUDGET", DEFAULT_POINT_BUDGET))


def vanishing_mask(polys: Sequence[Polynomial], vars: Sequence[str], field: GF2k,
                   budget: int | None = None, chunk: int = 1 << 16) -> np.ndarray:
    """Boolean mask over all points of GF(q)^n (index = base-q digits, first
    variable least significant) marking common zeros of ``polys``."""
    if not isinstance(field, GF2k):
        raise ValueError("point enumeration needs a finite field")
    q, n = field.q, len(vars)
    total = q ** n
    budget = point_budget() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(f"{q}^{n} = {total} points exceed the enumeration budget {budget}")
    exp = np.array(field.exp_table, dtype=np.int64)
    log = np.array(field.log_table, dtype=np.int64)
    polys = [p.embed(vars) for p in polys]
    out = np.ones(total, dtype=bool)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coords = [(idx // q ** i) % q for i in range(n)]
        logs = [log[c] for c in coords]
        zeros = [c == 0 for c in coords]
        ok = np.ones(idx.shape, dtype=bool)
        for p in polys:
            acc = np.zeros(idx.shape, dtype=np.int64)
            for e, c in p.terms.items():
                lsum = np.full(idx.shape, field.log_table[c], dtype=np.int64)
                z = np.zeros(idx.shape, dtype=bool)
                for i, k in enumerate(e):
                    if k:
                        lsum += k * logs[i]
                        z |= zeros[i]
                val = np.where(z, 0, exp[lsum % (q - 1)])
                acc ^= val
            ok &= acc == 0
        out[start:start + len(idx)] = ok
    return out


def count_points(I: IdealBasis, q: int = 2, budget: int | None = None) -> int:
    """Exact number of GF(q)-points of V(I) by exhaustive enumeration."""
    k = q.bit_length() - 1
    if q < 2 or q != 1 << k:
        raise ValueError("q must be a power of 2")
    F = GF2k(k)
    gens = [_lift_to(g, F) for g in I.generators]
    return int(vanishing_mask(gens, I.vars, F, budget).sum())


def _lift_to(p: Polynomial, F: GF2k) -> Polynomial:
    """View a GF(2)-coefficient polynomial over GF(2^k)."""
    if p.field == F:
        return p
    if not (isinstance(p.field, GF2k) and p.field.k == 1):
        raise ValueError("only GF(2) polynomials can be lifted to extensions")
    return Polynomial(p.vars, F, dict(p.terms), p.weights)


def points_of(mask: np.ndarray, n: int, q: int) -> np.ndarray:
    idx = np.nonzero(mask)[0]
    return np.stack([(idx // q ** i) % q for i in range(n)], axis=1) if n else idx[:, None]
