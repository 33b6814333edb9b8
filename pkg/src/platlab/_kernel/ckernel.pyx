# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled closure kernel over 64-bit atom masks.

Mirrors pykernel exactly; only spaces with at most 64 atoms may use it.
"""

from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector
from libc.stdint cimport uint64_t

IMPLEMENTATION = "c"


def polar(rows, mask, full):
    cdef uint64_t out = full
    cdef uint64_t m = mask
    cdef vector[uint64_t] crows
    cdef Py_ssize_t i, n = len(rows)
    crows.reserve(n)
    for i in range(n):
        crows.push_back(rows[i])
    cdef int bit
    while m and out:
        bit = _ctz(m)
        out &= crows[bit]
        m &= m - 1
    return out


def biclosure(rows, mask, full):
    return polar(rows, polar(rows, mask, full), full)


cdef inline int _ctz(uint64_t x):
    cdef int c = 0
    while not (x & 1):
        x >>= 1
        c += 1
    return c


def intersection_closure(seeds, full, max_sets=0):
    cdef vector[uint64_t] uniq
    cdef unordered_set[uint64_t] seen_seed
    cdef uint64_t s, x, y
    for v in sorted(set(seeds)):
        s = v
        if seen_seed.find(s) == seen_seed.end():
            seen_seed.insert(s)
            uniq.push_back(s)
    cdef unordered_set[uint64_t] out
    cdef vector[uint64_t] frontier, nxt
    cdef uint64_t cfull = full
    cdef Py_ssize_t limit = max_sets
    out.insert(cfull)
    frontier.push_back(cfull)
    cdef Py_ssize_t i, j
    while frontier.size() > 0:
        nxt.clear()
        for i in range(<Py_ssize_t>frontier.size()):
            x = frontier[i]
            for j in range(<Py_ssize_t>uniq.size()):
                y = x & uniq[j]
                if out.find(y) == out.end():
                    out.insert(y)
                    nxt.push_back(y)
                    if limit and <Py_ssize_t>out.size() > limit:
                        raise ValueError(
                            f"closure enumeration exceeded {max_sets} sets")
        frontier.swap(nxt)
    result = sorted(out)
    return result
