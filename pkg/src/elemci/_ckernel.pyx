# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elementary closure kernel.

Same algorithm and interface as ``_pykernel.Closer``.  Statements are packed
into a single ``uint64`` key ``(a << 52) | K``, so every index must be below
``MAX_INDEX``.
"""
from cython.operator cimport dereference as deref, preincrement as inc
from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

from .errors import BudgetExhausted

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

ctypedef unordered_map[uint64_t, uint64_t] Index

cdef struct Item:
    int a
    int b
    uint64_t K

cdef int SHIFT = 52
cdef uint64_t KMASK = (<uint64_t>1 << 52) - 1


cdef inline uint64_t _key(int a, uint64_t K) nogil:
    return (<uint64_t>a << SHIFT) | K


cdef inline uint64_t _get(Index* idx, int a, uint64_t K) nogil:
    cdef Index.iterator it = idx.find(_key(a, K))
    if it == idx.end():
        return 0
    return deref(it).second


cdef class Closer:
    cdef Index fwd
    cdef Index rev
    cdef vector[Item] queue
    cdef public int level
    cdef public bint symmetric
    cdef Py_ssize_t count

    MAX_INDEX = 52

    def __cinit__(self, int level, bint symmetric=True):
        self.level = level
        self.symmetric = symmetric
        self.count = 0

    def __len__(self):
        return self.count

    cdef bint _add(self, int i, int j, uint64_t K) nogil:
        cdef uint64_t bit = (<uint64_t>1) << j
        cdef uint64_t* slot = &self.fwd[_key(i, K)]
        cdef Item item
        if slot[0] & bit:
            return False
        slot[0] |= bit
        if not self.symmetric:
            self.rev[_key(j, K)] |= (<uint64_t>1) << i
        item.a = i
        item.b = j
        item.K = K
        self.queue.push_back(item)
        self.count += 1
        return True

    cdef inline void _put(self, int a, int b, uint64_t K, bint transposed) nogil:
        if transposed:
            self._add(b, a, K)
        else:
            self._add(a, b, K)

    def add(self, int i, int j, K):
        return self._add(i, j, <uint64_t>K)

    def contains(self, int i, int j, K):
        return (_get(&self.fwd, i, <uint64_t>K) >> j) & 1 == 1

    cdef void _rules(self, int a, int b, uint64_t K, Index* idx, bint tr) nogil:
        cdef uint64_t bb = (<uint64_t>1) << b
        cdef uint64_t rest = K
        cdef uint64_t bk, L, partners
        cdef int k, j
        while rest:
            k = __builtin_ctzll(rest)
            rest &= rest - 1
            bk = (<uint64_t>1) << k
            L = K ^ bk
            if (_get(idx, a, L) >> k) & 1:
                self._put(a, k, L | bb, tr)
                self._put(a, b, L, tr)
            if self.level >= 2 and (_get(idx, a, L | bb) >> k) & 1:
                self._put(a, b, L, tr)
                self._put(a, k, L, tr)
        partners = _get(idx, a, K | bb)
        while partners:
            j = __builtin_ctzll(partners)
            partners &= partners - 1
            self._put(a, b, K | ((<uint64_t>1) << j), tr)
            self._put(a, j, K, tr)
        if self.level >= 3:
            rest = _get(idx, a, K) & ~bb
            while rest:
                k = __builtin_ctzll(rest)
                rest &= rest - 1
                self._put(a, b, K | ((<uint64_t>1) << k), tr)
                self._put(a, k, K | bb, tr)

    def run(self, budget=None):
        cdef long long limit = -1 if budget is None else budget
        cdef long long steps = 0
        cdef Item t
        while not self.queue.empty():
            if limit >= 0 and steps >= limit:
                raise BudgetExhausted(f"closure stopped after {steps} steps")
            t = self.queue.back()
            self.queue.pop_back()
            steps += 1
            if self.symmetric:
                self._add(t.b, t.a, t.K)
                self._rules(t.a, t.b, t.K, &self.fwd, False)
            else:
                self._rules(t.a, t.b, t.K, &self.fwd, False)
                self._rules(t.b, t.a, t.K, &self.rev, True)
        return steps

    def triplets(self):
        cdef list out = []
        cdef uint64_t m
        cdef int i, j
        cdef Index.iterator it = self.fwd.begin()
        while it != self.fwd.end():
            m = deref(it).second
            i = <int>(deref(it).first >> SHIFT)
            while m:
                j = __builtin_ctzll(m)
                m &= m - 1
                out.append((i, j, int(deref(it).first & KMASK)))
            inc(it)
        return out
