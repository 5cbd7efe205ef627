"""Stratification expressions, their motivic classes in 𝕃, and Euler numbers.

Grammar: atoms ``A^n``, ``P1``, ``P1vP1``, ``pt``; ``*`` product, ``+``
disjoint union, ``-`` removal of a closed piece; parentheses. ``*`` binds
tighter than ``+``/``-``, which associate to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .fields import QQ
from .poly import PolynomialError, parse_poly

VALIDITY_POINTS = (2, 4, 8)


class StratumError(ValueError):
    pass


class StratumSyntaxError(StratumError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.position = position


@dataclass(frozen=True)
class MotivicClass:
    """Integer polynomial in 𝕃, constant term first."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def L(cls, n: int = 1) -> "MotivicClass":
        return cls((0,) * n + (1,))

    @classmethod
    def parse(cls, text: str) -> "MotivicClass":
        """Read e.g. ``"L^4 + 6*L^3 + 3*L^2"`` (the symbol may be L or 𝕃)."""
        try:
            p = parse_poly(text.replace("𝕃", "L"), QQ, ["L"])
        except PolynomialError as exc:
            raise StratumError(f"bad class {text!r}: {exc}") from None
        if any(c.denominator != 1 for c in p.terms.values()):
            raise StratumError(f"non-integer coefficient in {text!r}")
        deg = p.total_degree() if p else -1
        out = [0] * (deg + 1)
        for (k,), c in p.terms.items():
            out[k] = int(c)
        return cls(tuple(out))

    def _zip(self, other, op):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return MotivicClass(tuple(op(x, y) for x, y in zip(a, b)))

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return MotivicClass()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return MotivicClass(tuple(out))

    def __call__(self, q: int) -> int:
        return specialize(self, q)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else "L" if k == 1 else f"L^{k}"
            mag = abs(c)
            body = mon if (mag == 1 and mon) else f"{mag}*{mon}" if mon else str(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def specialize(c: MotivicClass, q: int) -> int:
    if q < 1:
        raise ValueError("specialization needs q >= 1")
    return sum(x * q ** k for k, x in enumerate(c.coeffs))


# ------------------------------------------------------------ expressions

@dataclass(frozen=True)
class Atom:
    kind: str   # "A", "P1", "P1vP1", "pt"
    n: int = 0

    def __str__(self):
        return f"A^{self.n}" if self.kind == "A" else self.kind


@dataclass(frozen=True)
class Op:
    op: str     # "*", "+", "-"
    left: "StratumExpr"
    right: "StratumExpr"

    def __str__(self):
        def paren(x):
            return f"({x})" if isinstance(x, Op) and x.op != "*" else str(x)
        if self.op == "*":
            return f"{paren(self.left)}*{paren(self.right)}"
        return f"{self.left} {self.op} {paren(self.right)}"


StratumExpr = Atom | Op

_TOKEN = re.compile(r"\s*(?:(?P<atom>A\^\d+|P1vP1|P1|pt)|(?P<op>[-+*()]))")


def _tokens(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise StratumSyntaxError("unexpected character", text, bad)
        kind = "atom" if m.group("atom") else "op"
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise StratumSyntaxError(f"unexpected {val!r}", self.text, pos)
        return e

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = Op(op, left, self.term())
        return left

    def term(self):
        left = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            left = Op("*", left, self.factor())
        return left

    def factor(self):
        kind, val, pos = self.take()
        if kind == "atom":
            if val.startswith("A^"):
                return Atom("A", int(val[2:]))
            return Atom(val)
        if (kind, val) == ("op", "("):
            e = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise StratumSyntaxError("expected ')'", self.text, p2)
            return e
        raise StratumSyntaxError(f"expected an atom, got {val or 'end of input'!r}", self.text, pos)


def parse_stratum(text: str) -> StratumExpr:
    return _Parser(text).parse()


_ATOMS = {
    "P1": MotivicClass((1, 1)),
    "P1vP1": MotivicClass((1, 2)),
    "pt": MotivicClass((1,)),
}


def motivic_class(s: StratumExpr | str, check: bool = True) -> MotivicClass:
    """Class in 𝕃; with ``check``, every removal must be numerically valid."""
    if isinstance(s, str):
        s = parse_stratum(s)
    if isinstance(s, Atom):
        return MotivicClass.L(s.n) if s.kind == "A" else _ATOMS[s.kind]
    a = motivic_class(s.left, check)
    b = motivic_class(s.right, check)
    if s.op == "*":
        return a * b
    if s.op == "+":
        return a + b
    if check:
        for q in VALIDITY_POINTS:
            if specialize(b, q) > specialize(a, q):
                raise StratumError(
                    f"cannot remove {s.right} ({b}) from {s.left} ({a}): "
                    f"{specialize(b, q)} > {specialize(a, q)} at L = {q}")
    return a - b


def euler(s: StratumExpr | str) -> int:
    return specialize(motivic_class(s), 1)


@dataclass
class LedgerTotal:
    euler: int
    motivic: MotivicClass
    entries: list[tuple[str, str, int, str]]


def ledger_total(entries: Iterable[tuple[str, StratumExpr | str]]) -> LedgerTotal:
    total = MotivicClass()
    rows = []
    chi = 0
    for label, expr in entries:
        e = parse_stratum(expr) if isinstance(expr, str) else expr
        c = motivic_class(e)
        total = total + c
        chi += specialize(c, 1)
        rows.append((label, str(e), specialize(c, 1), str(c)))
    return LedgerTotal(chi, total, rows)
