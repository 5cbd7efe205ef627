"""Exact univariate rational functions and truncated power series in λ.

Polynomials are coefficient tuples (constant term first) of ``Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_ORDER = 24

UPoly = tuple[Fraction, ...]


def _trim(c: Iterable) -> UPoly:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Sequence, b: Sequence) -> UPoly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def pmul(a: Sequence, b: Sequence) -> UPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pscale(a: Sequence, c) -> UPoly:
    return _trim(x * c for x in a)


def one_minus_power(k: int) -> UPoly:
    """1 - λ^k."""
    if k <= 0:
        raise ValueError("exponent must be positive")
    c = [Fraction(0)] * (k + 1)
    c[0], c[k] = Fraction(1), Fraction(-1)
    return tuple(c)


def pprod(factors: Iterable[Sequence]) -> UPoly:
    out: UPoly = (Fraction(1),)
    for f in factors:
        out = pmul(out, f)
    return out


def pstr(a: Sequence, var: str = "λ") -> str:
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        mon = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        mag = abs(c)
        coef = "" if (mag == 1 and mon) else str(mag)
        body = coef + ("*" if coef and mon else "") + mon
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass(frozen=True)
class RationalFunction:
    num: UPoly
    den: UPoly

    def __post_init__(self):
        object.__setattr__(self, "num", _trim(self.num))
        object.__setattr__(self, "den", _trim(self.den))
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(padd(pmul(self.num, other.den), pmul(other.num, self.den)),
                                pmul(self.den, other.den))

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(pmul(self.num, other.num), pmul(self.den, other.den))

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(pscale(self.num, Fraction(c)), self.den)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return series_equal(self, other)

    def __hash__(self):
        return hash(tuple(expand(self, 8).coeffs)) if self.den[0] else 0

    def __str__(self):
        return f"({pstr(self.num)}) / ({pstr(self.den)})"


def series_equal(r1: RationalFunction, r2: RationalFunction) -> bool:
    """Cross-multiplication equality; no normal form needed."""
    return pmul(r1.num, r2.den) == pmul(r2.num, r1.den)


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                out[i + j] += self.coeffs[i] * other.coeffs[j]
        return TruncatedSeries(tuple(out))

    def __getitem__(self, i):
        return self.coeffs[i]

    def as_ints(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("series has non-integer coefficients")
        return [int(c) for c in self.coeffs]


def expand(r: RationalFunction, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """First ``order + 1`` power-series coefficients of ``r``."""
    den = r.den
    if den[0] == 0:
        raise ZeroDivisionError("pole at λ = 0: denominator has no constant term")
    inv0 = 1 / den[0]
    out = []
    for k in range(order + 1):
        acc = r.num[k] if k < len(r.num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc * inv0)
    return TruncatedSeries(tuple(out))


def molien_series(classes: Sequence[tuple[Sequence[int], int]], order: int) -> RationalFunction:
    """(1/|G|) Σ size / Π_cycles (1 - λ^len) for a permutation representation."""
    if sum(size for _, size in classes) != order:
        raise ValueError("class sizes do not sum to the group order")
    total = RationalFunction((Fraction(0),), (Fraction(1),))
    for ctype, size in classes:
        term = RationalFunction((Fraction(size),), pprod(one_minus_power(k) for k in ctype))
        total = total + term
    return total.scale(Fraction(1, order))


def hilbert_series_weighted_hypersurface(weights: Sequence[int], degree: int) -> RationalFunction:
    """(1 - λ^d) / Π (1 - λ^w) for a degree-d hypersurface in a weighted polynomial ring."""
    if degree <= 0 or any(w <= 0 for w in weights):
        raise ValueError("weights and relation degree must be positive")
    return RationalFunction(one_minus_power(degree), pprod(one_minus_power(w) for w in weights))


def hilbert_series_polynomial_ring(weights: Sequence[int]) -> RationalFunction:
    return RationalFunction((Fraction(1),), pprod(one_minus_power(w) for w in weights))
