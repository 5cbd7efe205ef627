"""Exact coefficient fields: GF(2^k) and the rationals.

Field objects do arithmetic on raw values (``int`` bit-vectors for GF(2^k),
``Fraction`` for QQ). :class:`FieldElement` wraps a value together with its
field for operator-style use.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

# Primitive moduli for GF(2^k), as bit masks including the leading term.
# For k <= 8 these are the Conway polynomials.
MODULI = {
    1: 0b11,                      # x + 1
    2: 0b111,                     # x^2 + x + 1
    3: 0b1011,                    # x^3 + x + 1
    4: 0b10011,                   # x^4 + x + 1
    5: 0b100101,                  # x^5 + x^2 + 1
    6: 0b1011011,                 # x^6 + x^4 + x^3 + x + 1
    7: 0b10000011,                # x^7 + x + 1
    8: 0b100011101,               # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,              # x^9 + x^4 + 1
    10: 0b10001101111,            # x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    11: 0b100000000101,           # x^11 + x^2 + 1
    12: 0b1000011101011,          # x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    13: 0b10000000011011,         # x^13 + x^4 + x^3 + x + 1
    14: 0b100000010101001,        # x^14 + x^7 + x^5 + x^3 + 1
    15: 0b1000000000110101,       # x^15 + x^5 + x^4 + x^2 + 1
    16: 0b10000000000101101,      # x^16 + x^5 + x^3 + x^2 + 1
}


def modulus_str(k: int) -> str:
    bits = MODULI[k]
    terms = []
    for i in range(k, -1, -1):
        if bits >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return " + ".join(terms)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class FieldError(ValueError):
    pass


class GF2k:
    """The field GF(2^k) with elements encoded as k-bit integers."""

    characteristic = 2

    def __init__(self, k: int = 1):
        if k not in MODULI:
            raise FieldError(f"unsupported extension degree {k} (1..16)")
        self.k = k
        self.q = 1 << k
        self.modulus = MODULI[k]
        self.zero, self.one = 0, 1
        self._exp, self._log = _tables(k)

    def __repr__(self):
        return f"GF(2^{self.k})" if self.k > 1 else "GF(2)"

    def __eq__(self, other):
        return isinstance(other, GF2k) and other.k == self.k

    def __hash__(self):
        return hash(("GF2k", self.k))

    @property
    def name(self) -> str:
        return "gf2" if self.k == 1 else f"gf2^{self.k}"

    def from_int(self, n: int) -> int:
        # integer literals live in the prime field
        return n & 1

    def contains(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.q

    def elements(self):
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def neg(self, a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def sqrt(self, a: int) -> int:
        """The unique square root; Frobenius is a bijection, so a^(2^(k-1))."""
        return self.pow(a, 1 << (self.k - 1))

    def is_zero(self, a) -> bool:
        return a == 0

    def fmt(self, a: int) -> str:
        return str(a) if a < 2 else f"0x{a:x}"

    @property
    def exp_table(self):
        return self._exp

    @property
    def log_table(self):
        return self._log


@lru_cache(maxsize=None)
def _tables(k: int):
    q = 1 << k
    mod = MODULI[k]
    exp = [0] * (2 * q)
    log = [0] * q
    x = 1
    for i in range(q - 1):
        exp[i] = x
        if i and x == 1:
            raise FieldError(f"modulus for k={k} is not primitive")
        log[x] = i
        x <<= 1
        if x & q:
            x ^= mod
    if x != 1:
        raise FieldError(f"modulus for k={k} is not primitive")
    for i in range(q - 1, 2 * q):
        exp[i] = exp[i - (q - 1)]
    return tuple(exp), tuple(log)


def is_primitive_modulus(k: int) -> bool:
    """Independent check: x has multiplicative order exactly 2^k - 1."""
    mod, order = MODULI[k], (1 << k) - 1

    def mulmod(a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> k & 1:
                a ^= mod
        return r

    def powx(e):
        r, base = 1, 0b10 if k > 1 else 1
        while e:
            if e & 1:
                r = mulmod(r, base)
            base = mulmod(base, base)
            e >>= 1
        return r

    if powx(order) != 1:
        return False
    return all(powx(order // p) != 1 for p in _prime_factors(order)) if order > 1 else True


class Rationals:
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)
    name = "qq"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def contains(self, a) -> bool:
        return isinstance(a, (int, Fraction))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, e):
        return Fraction(a) ** e

    def is_zero(self, a) -> bool:
        return a == 0

    def fmt(self, a) -> str:
        return str(a)


GF2 = GF2k(1)
QQ = Rationals()


def parse_field(text: str):
    """Parse ``gf2``, ``gf2^k``, ``gf4``, ``gf256`` or ``qq``."""
    t = text.strip().lower().replace("(", "").replace(")", "")
    if t in ("qq", "q", "rationals"):
        return QQ
    if t.startswith("gf"):
        body = t[2:]
        if body.startswith("2^"):
            return GF2k(int(body[2:]))
        if body.isdigit():
            q = int(body)
            k = q.bit_length() - 1
            if q >= 2 and q == 1 << k:
                return GF2k(k)
    raise FieldError(f"unknown field {text!r}; expected gf2^k or qq")


@dataclass(frozen=True)
class FieldElement:
    field: object
    value: object

    def _wrap(self, v):
        return FieldElement(self.field, v)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("field mismatch")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self):
        return self._wrap(self.field.inv(self.value))

    def sqrt(self):
        return sqrt_char2(self)

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def __repr__(self):
        return f"{self.field!r}({self.field.fmt(self.value)})"


def sqrt_char2(a: FieldElement) -> FieldElement:
    if a.field.characteristic != 2:
        raise FieldError("sqrt_char2 needs a characteristic-2 field")
    return FieldElement(a.field, a.field.sqrt(a.value))
