# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) reduction kernel; same API as ``_kernel_py``.

Monomials are packed into 64-bit words, so layouts must fit in 64 bits.
"""
from libc.stdint cimport uint64_t
from libcpp.vector cimport vector

NAME = "compiled"


cdef class Reducer:
    cdef uint64_t guard
    cdef vector[vector[uint64_t]] dkeys
    cdef vector[vector[uint64_t]] dexps
    cdef vector[uint64_t] lead_e

    def __init__(self, guard):
        self.guard = <uint64_t>guard

    def __len__(self):
        return self.dkeys.size()

    def add(self, keys, exps):
        if not keys:
            raise ValueError("cannot add the zero polynomial as a divisor")
        cdef vector[uint64_t] k = keys
        cdef vector[uint64_t] e = exps
        self.dkeys.push_back(k)
        self.dexps.push_back(e)
        self.lead_e.push_back(e[0])

    def reduce(self, keys, exps):
        cdef vector[uint64_t] fk = keys
        cdef vector[uint64_t] fe = exps
        cdef vector[uint64_t] tk, te, rk, re
        cdef size_t start = 0, nf, nd, i, j, d, ndiv = self.lead_e.size()
        cdef uint64_t k, e, mk, me, a, b, bb, guard = self.guard
        cdef bint found
        while start < fk.size():
            k = fk[start]
            e = fe[start]
            found = False
            for d in range(ndiv):
                if ((e - self.lead_e[d]) & guard) == 0:
                    found = True
                    break
            if not found:
                rk.push_back(k)
                re.push_back(e)
                start += 1
                continue
            mk = k - self.dkeys[d][0]
            me = e - self.lead_e[d]
            nf = fk.size()
            nd = self.dkeys[d].size()
            tk.clear()
            te.clear()
            i = start + 1
            j = 1
            while i < nf and j < nd:
                a = fk[i]
                b = self.dkeys[d][j] + mk
                if a > b:
                    tk.push_back(a)
                    te.push_back(fe[i])
                    i += 1
                elif b > a:
                    bb = self.dexps[d][j] + me
                    if (b | bb) & guard:
                        raise OverflowError("packed monomial field overflow")
                    tk.push_back(b)
                    te.push_back(bb)
                    j += 1
                else:
                    i += 1
                    j += 1
            while i < nf:
                tk.push_back(fk[i])
                te.push_back(fe[i])
                i += 1
            while j < nd:
                b = self.dkeys[d][j] + mk
                bb = self.dexps[d][j] + me
                if (b | bb) & guard:
                    raise OverflowError("packed monomial field overflow")
                tk.push_back(b)
                te.push_back(bb)
                j += 1
            fk.swap(tk)
            fe.swap(te)
            start = 0
        return rk, re


def spoly(fk_, fe_, gk_, ge_, m1k_, m1e_, m2k_, m2e_, guard_):
    cdef vector[uint64_t] fk = fk_, fe = fe_, gk = gk_, ge = ge_
    cdef uint64_t m1k = m1k_, m1e = m1e_, m2k = m2k_, m2e = m2e_, guard = guard_
    cdef vector[uint64_t] ok, oe
    cdef size_t i = 0, j = 0, nf = fk.size(), ng = gk.size()
    cdef uint64_t a, b, ae, be
    while i < nf or j < ng:
        if i < nf:
            a = fk[i] + m1k
            ae = fe[i] + m1e
            if (a | ae) & guard:
                raise OverflowError("packed monomial field overflow")
        if j < ng:
            b = gk[j] + m2k
            be = ge[j] + m2e
            if (b | be) & guard:
                raise OverflowError("packed monomial field overflow")
        if j >= ng or (i < nf and a > b):
            ok.push_back(a)
            oe.push_back(ae)
            i += 1
        elif i >= nf or b > a:
            ok.push_back(b)
            oe.push_back(be)
            j += 1
        else:
            i += 1
            j += 1
    return ok, oe
