"""Conics in characteristic 2: pointwise and family classification.

A conic is ``aX^2 + bXY + cY^2 + dXZ + eYZ + fZ^2`` (affine: Z = 1). The
classification uses the denominator-free invariant

    Δ = b^2 f + b d e + a e^2 + c d^2,

with DoubleLine iff b = d = e = 0, TwoLines iff Δ = 0 otherwise, and
NonDegenerate iff Δ ≠ 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fields import GF2, FieldElement, GF2k
from .poly import Polynomial, PolynomialError


class ConicClass(str, enum.Enum):
    DOUBLE_LINE = "DoubleLine"
    TWO_LINES = "TwoLines"
    NON_DEGENERATE = "NonDegenerate"
    ZERO_FORM = "ZeroForm"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ConicForm:
    """Six coefficients over a field (pointwise mode)."""

    a: object
    b: object
    c: object
    d: object
    e: object
    f: object
    field: GF2k = GF2
    projective: bool = True

    @classmethod
    def of(cls, coeffs: Sequence, field: GF2k = GF2, projective: bool = True):
        vals = [x.value if isinstance(x, FieldElement) else field.from_int(x) if field.k == 1
                else x for x in coeffs]
        for v in vals:
            if not field.contains(v):
                raise ValueError(f"coefficient {v!r} not in {field!r}")
        return cls(*vals, field=field, projective=projective)

    @property
    def coeffs(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    @property
    def outside_affine_regime(self) -> bool:
        """a = b = c = 0: the affine statement does not apply (projective convention used)."""
        F = self.field
        return all(F.is_zero(x) for x in (self.a, self.b, self.c))


def delta(a, b, c, d, e, f, F=GF2):
    m, add = F.mul, F.add
    return add(add(m(m(b, b), f), m(m(b, d), e)), add(m(a, m(e, e)), m(c, m(d, d))))


def classify_coeffs(a, b, c, d, e, f, F=GF2) -> ConicClass:
    z = F.is_zero
    if all(z(x) for x in (a, b, c, d, e, f)):
        return ConicClass.ZERO_FORM
    if z(b) and z(d) and z(e):
        return ConicClass.DOUBLE_LINE
    if z(delta(a, b, c, d, e, f, F)):
        return ConicClass.TWO_LINES
    return ConicClass.NON_DEGENERATE


def classify_point(q: ConicForm) -> ConicClass:
    if q.field.characteristic != 2:
        raise ValueError("classification assumes characteristic 2")
    return classify_coeffs(*q.coeffs, F=q.field)


def classify_by_cases(a, b, c, d, e, f, F=GF2) -> ConicClass:
    """Case analysis with square roots and divisions; needs (a, b, c) != 0."""
    z = F.is_zero
    if all(z(x) for x in (a, b, c)):
        raise ValueError("case analysis needs (a, b, c) != 0")
    div, mul, add, sqrt = F.div, F.mul, F.add, F.sqrt
    if z(b) and z(d) and z(e):
        return ConicClass.DOUBLE_LINE
    if not z(b):
        inner = add(add(mul(d, e), div(mul(a, mul(e, e)), b)), div(mul(c, mul(d, d)), b))
        F_ = add(f, div(inner, b))
        return ConicClass.TWO_LINES if z(F_) else ConicClass.NON_DEGENERATE
    if not z(a) and not z(d) and z(add(e, mul(d, sqrt(div(c, a))))):
        return ConicClass.TWO_LINES
    if not z(c) and not z(e) and z(add(d, mul(e, sqrt(div(a, c))))):
        return ConicClass.TWO_LINES
    return ConicClass.NON_DEGENERATE


# ------------------------------------------------------------ brute force

@lru_cache(maxsize=None)
def _embedding(k: int) -> tuple[int, ...]:
    """Images of GF(2^k) elements inside GF(2^(2k)) under a fixed embedding."""
    small, big = GF2k(k), GF2k(2 * k)
    mod = small.modulus
    root = None
    for beta in range(big.q):
        acc = 0
        for i in range(k + 1):
            if mod >> i & 1:
                acc ^= big.pow(beta, i)
        if acc == 0:
            root = beta
            break
    if root is None:
        raise RuntimeError("no embedding root found")
    images = []
    for a in range(small.q):
        v = 0
        for i in range(k):
            if a >> i & 1:
                v ^= big.pow(root, i)
        images.append(v)
    return tuple(images)


@lru_cache(maxsize=None)
def _mul_table(k: int) -> np.ndarray:
    F = GF2k(k)
    q = F.q
    exp = np.array(F.exp_table, dtype=np.int64)
    log = np.array(F.log_table, dtype=np.int64)
    x = np.arange(q)
    lx = log[x]
    t = exp[(lx[:, None] + lx[None, :]) % (q - 1)]
    t[0, :] = 0
    t[:, 0] = 0
    return t


@dataclass
class OracleResult:
    cls: ConicClass
    linear_factors: int
    points: int
    field_q: int


def oracle_classify(coeffs: Sequence[int], k: int) -> OracleResult:
    """Classify by exhaustive search over GF(2^(2k)).

    Counts projective zeros and normalized linear forms dividing the
    homogenized conic.
    """
    emb = _embedding(k)
    K = 2 * k
    T = _mul_table(K)
    Q = 1 << K
    a, b, c, d, e, f = (emb[x] for x in coeffs)
    if not any((a, b, c, d, e, f)):
        return OracleResult(ConicClass.ZERO_FORM, -1, Q * Q + Q + 1, Q)
    g = np.arange(Q)
    sq = T[g, g]
    factors = 0
    # X = beta*Y + gamma*Z
    r1 = T[a, sq] ^ T[b, g] ^ c
    for beta in np.nonzero(r1 == 0)[0]:
        r2 = T[b, g] ^ T[d, beta] ^ e
        r3 = T[a, sq] ^ T[d, g] ^ f
        factors += int(np.count_nonzero((r2 == 0) & (r3 == 0)))
    # Y = gamma*Z
    if a == 0:
        r2 = T[b, g] ^ d
        r3 = T[c, sq] ^ T[e, g] ^ f
        factors += int(np.count_nonzero((r2 == 0) & (r3 == 0)))
    # Z = 0
    if a == 0 and b == 0 and c == 0:
        factors += 1
    points = _projective_zeros(T, Q, (a, b, c, d, e, f))
    if factors == 0:
        cls = ConicClass.NON_DEGENERATE
    elif factors == 1:
        cls = ConicClass.DOUBLE_LINE
    elif factors == 2:
        cls = ConicClass.TWO_LINES
    else:
        raise AssertionError(f"nonzero conic with {factors} linear factors")
    return OracleResult(cls, factors, points, Q)


def _projective_zeros(T, Q, coeffs) -> int:
    a, b, c, d, e, f = coeffs
    g = np.arange(Q)
    Y, Z = np.meshgrid(g, g, indexing="ij")
    Y, Z = Y.ravel(), Z.ravel()
    # points (1 : Y : Z)
    v = a ^ T[b, Y] ^ T[c, T[Y, Y]] ^ T[d, Z] ^ T[e, T[Y, Z]] ^ T[f, T[Z, Z]]
    n = int(np.count_nonzero(v == 0))
    # points (0 : 1 : Z)
    v = c ^ T[e, g] ^ T[f, T[g, g]]
    n += int(np.count_nonzero(v == 0))
    # point (0 : 0 : 1)
    n += int(f == 0)
    return n


# ---------------------------------------------------------------- families

def conic_coefficients(h: Polynomial, xyz: Sequence[str]) -> tuple[Polynomial, ...]:
    """Split a quadratic form in ``xyz`` into six coefficient polynomials over the
    remaining variables, in the order a, b, c, d, e, f."""
    X, Y, Z = xyz
    base = tuple(v for v in h.vars if v not in xyz)
    idx = [h.vars.index(v) for v in xyz]
    bidx = [h.vars.index(v) for v in base]
    slots = {(2, 0, 0): 0, (1, 1, 0): 1, (0, 2, 0): 2, (1, 0, 1): 3, (0, 1, 1): 4, (0, 0, 2): 5}
    parts: list[dict] = [dict() for _ in range(6)]
    F = h.field
    for e, c in h.terms.items():
        key = tuple(e[i] for i in idx)
        if key not in slots:
            raise PolynomialError(f"not a quadratic form in {xyz}: term exponent {key}")
        be = tuple(e[i] for i in bidx)
        bucket = parts[slots[key]]
        bucket[be] = F.add(bucket[be], c) if be in bucket else c
    return tuple(Polynomial(base, F, p) for p in parts)


@dataclass
class FamilyStratification:
    """Condition ideals (as generator lists) over the base variables."""

    base: tuple[str, ...]
    coeffs: tuple[Polynomial, ...]
    delta: Polynomial
    zero_form: list[Polynomial]
    double_line: list[Polynomial]
    degenerate: list[Polynomial]
    checked_points: int = 0
    mismatches: list = dc_field(default_factory=list)

    def at(self, point: Sequence[int], F: GF2k) -> ConicClass:
        vals = [_lift(p, F).evaluate(point) for p in self.coeffs]
        return classify_coeffs(*vals, F=F)

    def summary(self) -> dict:
        return {
            "base": list(self.base),
            "coefficients": dict(zip("abcdef", (str(p) for p in self.coeffs))),
            "delta": str(self.delta),
            "double_line_ideal": [str(p) for p in self.double_line],
            "degenerate_ideal": [str(p) for p in self.degenerate],
            "checked_points": self.checked_points,
            "mismatches": len(self.mismatches),
        }


def _lift(p: Polynomial, F: GF2k) -> Polynomial:
    if p.field == F:
        return p
    return Polynomial(p.vars, F, dict(p.terms))


def classify_family(coeffs: Sequence[Polynomial], verify_field: GF2k | None = GF2k(2),
                    budget: int = 1 << 12, oracle: bool = True) -> FamilyStratification:
    """Condition ideals for each class; optionally checked at every base point
    over ``verify_field`` against ``classify_point`` and the brute-force oracle."""
    a, b, c, d, e, f = coeffs
    base = a.vars
    dlt = b * b * f + b * d * e + a * e * e + c * d * d
    strat = FamilyStratification(
        base=base, coeffs=tuple(coeffs), delta=dlt,
        zero_form=[p for p in coeffs], double_line=[b, d, e], degenerate=[dlt])
    if verify_field is None:
        return strat
    q, n = verify_field.q, len(base)
    if q ** n > budget:
        return strat
    lifted = [_lift(p, verify_field) for p in coeffs]
    dl = _lift(dlt, verify_field)
    for idx in range(q ** n):
        pt = [(idx // q ** i) % q for i in range(n)]
        vals = [p.evaluate(pt) for p in lifted]
        got = classify_point(ConicForm(*vals, field=verify_field))
        z = [x == 0 for x in vals]
        if all(z):
            expect = ConicClass.ZERO_FORM
        elif z[1] and z[3] and z[4]:
            expect = ConicClass.DOUBLE_LINE
        elif dl.evaluate(pt) == 0:
            expect = ConicClass.TWO_LINES
        else:
            expect = ConicClass.NON_DEGENERATE
        ok = got == expect
        if ok and oracle:
            ok = oracle_classify(vals, verify_field.k).cls == got
        strat.checked_points += 1
        if not ok:
            strat.mismatches.append((tuple(pt), str(got), str(expect)))
    return strat
