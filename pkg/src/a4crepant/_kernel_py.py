"""Pure-Python GF(2) reduction kernel.

A polynomial is a pair of parallel int lists ``(keys, exps)`` sorted by
descending key. ``key`` encodes the monomial order, ``exps`` the exponent
vector; both are packed into fixed-width fields whose top bit is a guard.
Divisibility of monomials is ``((b - a) & guard) == 0`` on ``exps``.
"""
from __future__ import annotations

from heapq import heapify, heappop, heappush

NAME = "python"


class Reducer:
    """A list of divisors, used to compute full normal forms over GF(2)."""

    def __init__(self, guard: int):
        self.guard = guard
        self._divs = []

    def __len__(self):
        return len(self._divs)

    def add(self, keys, exps):
        if not keys:
            raise ValueError("cannot add the zero polynomial as a divisor")
        self._divs.append((keys[0], exps[0], list(keys), list(exps)))

    def reduce(self, keys, exps):
        guard = self.guard
        divs = self._divs
        cur = dict(zip(keys, exps))
        heap = [-k for k in keys]
        heapify(heap)
        rk, re = [], []
        while heap:
            k = -heappop(heap)
            e = cur.get(k)
            if e is None:
                continue
            for dk0, de0, dks, des in divs:
                if not (e - de0) & guard:
                    mk = k - dk0
                    me = e - de0
                    for a, b in zip(dks, des):
                        t = a + mk
                        tb = b + me
                        if (t | tb) & guard:
                            raise OverflowError("packed monomial field overflow")
                        if t in cur:
                            del cur[t]
                        else:
                            cur[t] = tb
                            heappush(heap, -t)
                    break
            else:
                del cur[k]
                rk.append(k)
                re.append(e)
        return rk, re


def spoly(fk, fe, gk, ge, m1k, m1e, m2k, m2e, guard):
    """Return ``m1*f + m2*g`` over GF(2) as sorted (keys, exps)."""
    cur = {}
    for ks, es, mk, me in ((fk, fe, m1k, m1e), (gk, ge, m2k, m2e)):
        for a, b in zip(ks, es):
            t = a + mk
            tb = b + me
            if (t | tb) & guard:
                raise OverflowError("packed monomial field overflow")
            if t in cur:
                del cur[t]
            else:
                cur[t] = tb
    keys = sorted(cur, reverse=True)
    return keys, [cur[k] for k in keys]
