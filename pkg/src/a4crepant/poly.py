"""Sparse multivariate polynomials over an exact field, and a text parser.

Terms are stored as ``{exponent tuple: coefficient}`` in descending
graded-reverse-lexicographic order of the stored variable list.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .fields import GF2, FieldError

MAX_EXPONENT = 10**6


class PolynomialError(ValueError):
    pass


class PolynomialSyntaxError(PolynomialError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownVariableError(PolynomialError):
    pass


def grevlex_key(e: Sequence[int]):
    return (sum(e), tuple(-x for x in reversed(e)))


class Polynomial:
    """Immutable sparse polynomial in a fixed, named variable list."""

    __slots__ = ("vars", "field", "terms", "weights", "_hash")

    def __init__(self, vars: Sequence[str], field=GF2, terms: Mapping | None = None,
                 weights: Sequence[int] | None = None, _canonical: bool = False):
        self.vars = tuple(vars)
        self.field = field
        if weights is not None:
            weights = tuple(int(w) for w in weights)
            if len(weights) != len(self.vars) or any(w <= 0 for w in weights):
                raise PolynomialError("weights must be positive, one per variable")
        self.weights = weights
        self._hash = None
        if _canonical:
            self.terms = terms
            return
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise PolynomialError(f"exponent {e} does not match {n} variables")
            if any(x < 0 or x > MAX_EXPONENT for x in e):
                raise OverflowError(f"exponent out of range in {e}")
            if not field.is_zero(c):
                clean[e] = c
        self.terms = {e: clean[e] for e in sorted(clean, key=grevlex_key, reverse=True)}

    # construction helpers
    @classmethod
    def zero(cls, vars, field=GF2, weights=None):
        return cls(vars, field, {}, weights, _canonical=True)

    @classmethod
    def constant(cls, c, vars, field=GF2, weights=None):
        if isinstance(c, int):
            c = field.from_int(c)
        return cls(vars, field, {(0,) * len(vars): c}, weights)

    @classmethod
    def variable(cls, name: str, vars, field=GF2, weights=None):
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariableError(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, field, {e: field.one}, weights, _canonical=True)

    @classmethod
    def monomial(cls, exps, vars, field=GF2, coeff=None, weights=None):
        return cls(vars, field, {tuple(exps): field.one if coeff is None else coeff}, weights)

    def _new(self, terms, canonical=False):
        return Polynomial(self.vars, self.field, terms, self.weights, _canonical=canonical)

    def gens(self):
        return [Polynomial.variable(v, self.vars, self.field, self.weights) for v in self.vars]

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), self.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def weighted_degree_set(self) -> set[int]:
        w = self.weights or (1,) * len(self.vars)
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    def is_weighted_homogeneous(self) -> bool:
        return len(self.weighted_degree_set()) <= 1

    def variables_used(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def leading_exponent(self):
        return next(iter(self.terms)) if self.terms else None

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {var!r}") from None

    # arithmetic
    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.vars != self.vars:
            raise PolynomialError(f"mismatched variable lists {self.vars} vs {other.vars}")
        if other.field != self.field:
            raise FieldError("mismatched coefficient fields")

    def _lift(self, other):
        if isinstance(other, int):
            return Polynomial.constant(other, self.vars, self.field, self.weights)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = F.add(out[e], c)
                if F.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({e: F.neg(c) for e, c in self.terms.items()}, canonical=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in out:
                    out[e] = F.add(out[e], c)
                else:
                    out[e] = c
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.vars, self.field, self.weights)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        F = self.field
        return self._new({e: F.mul(v, c) for e, v in self.terms.items()})

    def mul_monomial(self, exps, coeff=None):
        F = self.field
        c0 = F.one if coeff is None else coeff
        return self._new({tuple(a + b for a, b in zip(e, exps)): F.mul(c, c0)
                          for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.vars, self.field)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, self.field, frozenset(self.terms.items())))
        return self._hash

    # ring changes
    def embed(self, vars: Sequence[str], weights=None) -> "Polynomial":
        """Re-express in a variable list containing every variable actually used."""
        vars = tuple(vars)
        if vars == self.vars:
            return self if weights is None else Polynomial(vars, self.field, self.terms, weights)
        pos = {v: i for i, v in enumerate(vars)}
        idx = []
        for i, v in enumerate(self.vars):
            if v in pos:
                idx.append((i, pos[v]))
            elif any(e[i] for e in self.terms):
                raise UnknownVariableError(f"variable {v!r} not in target list {vars}")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial(vars, self.field, out, weights)

    def with_weights(self, weights):
        return Polynomial(self.vars, self.field, self.terms, weights, _canonical=True)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new_vars)) != len(new_vars):
            raise PolynomialError("renaming collapses variables")
        return Polynomial(new_vars, self.field, self.terms, self.weights, _canonical=True)

    def evaluate(self, point) -> object:
        """Evaluate at a point given as a mapping name->value or a sequence."""
        F = self.field
        if isinstance(point, Mapping):
            vals = [point[v] for v in self.vars]
        else:
            vals = list(point)
        total = F.zero
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = F.mul(t, F.pow(v, k))
            total = F.add(total, t)
        return total

    def specialize(self, values: Mapping[str, object]) -> "Polynomial":
        """Set some variables to field constants; the variable list is kept."""
        F = self.field
        idx = [(self._index(v), val) for v, val in values.items()]
        out = {}
        for e, c in self.terms.items():
            e = list(e)
            for i, val in idx:
                if e[i]:
                    c = F.mul(c, F.pow(val, e[i]))
                    e[i] = 0
            e = tuple(e)
            out[e] = F.add(out[e], c) if e in out else c
        return self._new(out)

    def __str__(self):
        return to_str(self)

    def __repr__(self):
        return f"Polynomial({to_str(self)!r}, vars={self.vars})"


def to_str(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    F = p.field
    pieces = []
    for e, c in p.terms.items():
        neg = False
        if F.characteristic == 0 and c < 0:
            neg, c = True, -c
        mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(p.vars, e) if k)
        if not mon:
            s = F.fmt(c)
        elif c == F.one:
            s = mon
        else:
            s = f"{F.fmt(c)}*{mon}"
        pieces.append(("- " if neg else "+ ") + s)
    out = " ".join(pieces)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_']*)|(?P<int>\d+)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text, field, vars, weights):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.vars = tuple(vars)
        self.weights = weights
        self.one = Polynomial.constant(1, self.vars, field, weights)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PolynomialSyntaxError(f"expected {want!r}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return p

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if tok[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.power()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.power()
        return p

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return Polynomial.constant(int(tok[1]), self.vars, self.field, self.weights)
        if tok[0] == "ident":
            self.take()
            if tok[1] not in self.vars:
                raise UnknownVariableError(
                    f"unknown identifier {tok[1]!r} at position {tok[2]}: {self.text!r}")
            return Polynomial.variable(tok[1], self.vars, self.field, self.weights)
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            p = self.expr()
            self.take("op", ")")
            return p
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.power()
        got = tok[1] or "end of input"
        raise PolynomialSyntaxError(f"unexpected {got!r}", self.text, tok[2])


def parse_poly(text: str, field=GF2, vars: Sequence[str] = (), weights=None) -> Polynomial:
    """Parse ``text`` into canonical sparse form over ``field``.

    Integer literals are reduced into the field, so ``2*x`` is zero over GF(2).
    """
    return _Parser(text, field, vars, weights).parse()


def parse_poly_list(text: str, field=GF2, vars: Sequence[str] = ()) -> list[Polynomial]:
    """Parse a comma-separated list of polynomials."""
    parts = [s for s in _split_top(text, ",") if s.strip()]
    return [parse_poly(s, field, vars) for s in parts]


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


# ---------------------------------------------------------- substitution

def substitute(p: Polynomial, mapping: Mapping[str, Polynomial],
               target_vars: Sequence[str] | None = None) -> Polynomial:
    """Compose ``p`` with the variable map; unmapped variables carry through.

    Images and carried variables are expressed in ``target_vars`` (default:
    the variable list of ``p``).
    """
    target = tuple(target_vars) if target_vars is not None else p.vars
    F = p.field
    for name in mapping:
        if name not in p.vars:
            raise UnknownVariableError(f"substitution source {name!r} not a variable of p")
    images = []
    for v in p.vars:
        if v in mapping:
            img = mapping[v]
            if img.field != F:
                raise FieldError("substitution image over a different field")
            images.append(img.embed(target))
        else:
            if v not in target and p.degree_in(v) > 0:
                raise UnknownVariableError(f"unmapped variable {v!r} missing from target")
            images.append(Polynomial.variable(v, target, F) if v in target else None)
    powers: list[dict[int, Polynomial]] = [dict() for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] ** k if k < 2 or (k - 1) not in cache else cache[k - 1] * images[i]
        return cache[k]

    acc: dict = {}
    for e, c in p.terms.items():
        t = Polynomial.constant(1, target, F).scale(c)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
        for te, tc in t.terms.items():
            acc[te] = F.add(acc[te], tc) if te in acc else tc
    return Polynomial(target, F, acc)


def compose_maps(m1: Mapping[str, Polynomial], m2: Mapping[str, Polynomial],
                 vars1: Sequence[str], target_vars: Sequence[str] | None = None):
    """The map ``p -> substitute(substitute(p, m1), m2)`` as a single VarMap."""
    out = {}
    for v in vars1:
        img = m1.get(v)
        if img is None:
            continue
        out[v] = substitute(img, m2, target_vars)
    for v, img in m2.items():
        if v not in m1 and v in vars1:
            out[v] = img
    return out


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative; exponent multipliers are reduced into the field."""
    i = p._index(var)
    F = p.field
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k == 0:
            continue
        m = F.from_int(k)
        if F.is_zero(m):
            continue
        ne = e[:i] + (k - 1,) + e[i + 1:]
        out[ne] = F.mul(c, m)
    return p._new(out)


def jacobian(p: Polynomial) -> list[Polynomial]:
    return [partial_derivative(p, v) for v in p.vars]


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise PolynomialError(f"unknown operation {op!r}")


def common_vars(polys: Iterable[Polynomial]) -> tuple[str, ...]:
    polys = list(polys)
    if not polys:
        return ()
    vars = polys[0].vars
    for q in polys[1:]:
        if q.vars != vars:
            raise PolynomialError("polynomials live in different variable lists")
    return vars
