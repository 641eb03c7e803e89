# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Sparse rank over a prime field: compiled twin of qhopf._mod_rank_py.

Same algorithm and contract as the pure-Python module (dense accumulator,
heap of touched columns, plain echelon with pivot rows pooled in flat
arrays), with the per-row elimination running in C and without the GIL, so
ranks over distinct primes parallelize across threads.  Primes must be
below 2**31 so a product of two reduced values fits in signed 64 bits.
"""

from libc.stdint cimport int32_t, int64_t
from libc.stdlib cimport calloc, free, malloc, realloc

__all__ = ["rank_mod_p"]


cdef int64_t _mod_inv(int64_t a, int64_t p) noexcept nogil:
    # extended Euclid; gcd(a, p) = 1 is guaranteed since p is prime and a != 0
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef class _Eliminator:
    """Workspace for one rank computation; all buffers freed on dealloc."""

    cdef int64_t* acc          # dense accumulator, length ncols
    cdef int32_t* heap         # binary min-heap of touched columns
    cdef Py_ssize_t heap_len, heap_cap
    cdef int32_t* touched      # every column pushed for the current row
    cdef Py_ssize_t touch_len, touch_cap
    cdef int64_t* piv_off      # column -> offset of its pivot row in the pool, -1 if none
    cdef int32_t* piv_len      # column -> length of its pivot row
    cdef int32_t* pool_cols    # pivot rows, concatenated
    cdef int64_t* pool_vals
    cdef Py_ssize_t pool_len, pool_cap
    cdef int32_t* row_cols     # staging buffer for one incoming row
    cdef int64_t* row_vals
    cdef Py_ssize_t row_cap
    cdef Py_ssize_t ncols
    cdef int64_t p

    def __cinit__(self, Py_ssize_t ncols, int64_t p):
        cdef Py_ssize_t n = ncols if ncols > 0 else 1
        self.ncols = ncols
        self.p = p
        self.acc = <int64_t*> calloc(n, sizeof(int64_t))
        self.piv_off = <int64_t*> malloc(n * sizeof(int64_t))
        self.piv_len = <int32_t*> malloc(n * sizeof(int32_t))
        self.heap_cap = 1024
        self.heap = <int32_t*> malloc(self.heap_cap * sizeof(int32_t))
        self.touch_cap = 1024
        self.touched = <int32_t*> malloc(self.touch_cap * sizeof(int32_t))
        self.pool_cap = 4096
        self.pool_cols = <int32_t*> malloc(self.pool_cap * sizeof(int32_t))
        self.pool_vals = <int64_t*> malloc(self.pool_cap * sizeof(int64_t))
        self.row_cap = 1024
        self.row_cols = <int32_t*> malloc(self.row_cap * sizeof(int32_t))
        self.row_vals = <int64_t*> malloc(self.row_cap * sizeof(int64_t))
        if (self.acc == NULL or self.piv_off == NULL or self.piv_len == NULL
                or self.heap == NULL or self.touched == NULL
                or self.pool_cols == NULL or self.pool_vals == NULL
                or self.row_cols == NULL or self.row_vals == NULL):
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(n):
            self.piv_off[i] = -1
        self.heap_len = 0
        self.touch_len = 0
        self.pool_len = 0

    def __dealloc__(self):
        free(self.acc)
        free(self.heap)
        free(self.touched)
        free(self.piv_off)
        free(self.piv_len)
        free(self.pool_cols)
        free(self.pool_vals)
        free(self.row_cols)
        free(self.row_vals)

    cdef int _grow_row(self, Py_ssize_t need) except -1:
        cdef Py_ssize_t cap = self.row_cap
        while cap < need:
            cap *= 2
        cdef int32_t* nc = <int32_t*> realloc(self.row_cols, cap * sizeof(int32_t))
        if nc == NULL:
            raise MemoryError()
        self.row_cols = nc
        cdef int64_t* nv = <int64_t*> realloc(self.row_vals, cap * sizeof(int64_t))
        if nv == NULL:
            raise MemoryError()
        self.row_vals = nv
        self.row_cap = cap
        return 0

    # -- nogil helpers; each returns -1 on allocation failure ------------

    cdef int _hpush(self, int32_t c) noexcept nogil:
        cdef Py_ssize_t i, parent, cap
        cdef int32_t* h
        if self.heap_len == self.heap_cap:
            cap = self.heap_cap * 2
            h = <int32_t*> realloc(self.heap, cap * sizeof(int32_t))
            if h == NULL:
                return -1
            self.heap = h
            self.heap_cap = cap
        h = self.heap
        i = self.heap_len
        self.heap_len = i + 1
        while i > 0:
            parent = (i - 1) >> 1
            if h[parent] <= c:
                break
            h[i] = h[parent]
            i = parent
        h[i] = c
        return 0

    cdef int32_t _hpop(self) noexcept nogil:
        cdef int32_t* h = self.heap
        cdef int32_t top = h[0], last
        cdef Py_ssize_t i = 0, child, n = self.heap_len - 1
        self.heap_len = n
        if n == 0:
            return top
        last = h[n]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and h[child + 1] < h[child]:
                child += 1
            if h[child] >= last:
                break
            h[i] = h[child]
            i = child
        h[i] = last
        return top

    cdef int _touch(self, int32_t c) noexcept nogil:
        cdef Py_ssize_t cap
        cdef int32_t* t
        if self.touch_len == self.touch_cap:
            cap = self.touch_cap * 2
            t = <int32_t*> realloc(self.touched, cap * sizeof(int32_t))
            if t == NULL:
                return -1
            self.touched = t
            self.touch_cap = cap
        self.touched[self.touch_len] = c
        self.touch_len += 1
        return 0

    cdef int _insert(self, Py_ssize_t nrow) noexcept nogil:
        """Scatter the staged row, eliminate, store a pivot row if any.

        Returns 1 if the rank grew, 0 if the row reduced to zero, -1 on
        allocation failure.
        """
        cdef int64_t p = self.p
        cdef int64_t f, vv, t, inv
        cdef int32_t c, cc, pivot_col = -1
        cdef Py_ssize_t i, k, off, ln, cap
        cdef int32_t* ncp
        cdef int64_t* nvp
        for i in range(nrow):
            c = self.row_cols[i]
            self.acc[c] = self.row_vals[i]
            if self._hpush(c) < 0 or self._touch(c) < 0:
                return -1
        while self.heap_len > 0:
            c = self._hpop()
            f = self.acc[c]
            if f == 0:
                continue  # cancelled since it was pushed (or duplicate pop)
            off = self.piv_off[c]
            if off < 0:
                if pivot_col < 0:
                    pivot_col = c
                # else: tail entry with no pivot to clear it; stays in the row
                continue
            ln = self.piv_len[c]
            for k in range(ln):
                cc = self.pool_cols[off + k]
                vv = self.pool_vals[off + k]
                t = (self.acc[cc] - f * vv) % p
                if t < 0:
                    t += p
                if self.acc[cc] == 0 and t != 0:
                    if self._hpush(cc) < 0 or self._touch(cc) < 0:
                        return -1
                self.acc[cc] = t
        if pivot_col < 0:
            for i in range(self.touch_len):
                self.acc[self.touched[i]] = 0
            self.touch_len = 0
            return 0
        if self.pool_len + self.touch_len + 1 > self.pool_cap:
            cap = self.pool_cap
            while cap < self.pool_len + self.touch_len + 1:
                cap *= 2
            ncp = <int32_t*> realloc(self.pool_cols, cap * sizeof(int32_t))
            if ncp == NULL:
                return -1
            self.pool_cols = ncp
            nvp = <int64_t*> realloc(self.pool_vals, cap * sizeof(int64_t))
            if nvp == NULL:
                return -1
            self.pool_vals = nvp
            self.pool_cap = cap
        inv = _mod_inv(self.acc[pivot_col], p)
        off = self.pool_len
        self.pool_cols[off] = pivot_col
        self.pool_vals[off] = 1
        self.pool_len += 1
        self.acc[pivot_col] = 0
        for i in range(self.touch_len):  # duplicates skipped by zeroing as we go
            cc = self.touched[i]
            t = self.acc[cc]
            if t != 0:
                self.pool_cols[self.pool_len] = cc
                self.pool_vals[self.pool_len] = (t * inv) % p
                self.pool_len += 1
                self.acc[cc] = 0
        self.piv_off[pivot_col] = off
        self.piv_len[pivot_col] = <int32_t> (self.pool_len - off)
        self.touch_len = 0
        return 1


def rank_mod_p(rows, ncols, p):
    """Rank over F_p of the matrix whose rows are ``{col: value}`` dicts.

    ``p`` must be a prime below 2**31 (so products fit in 64-bit signed
    arithmetic); values may be arbitrary ints and are reduced mod p.
    """
    cdef int64_t cp = p
    if not 1 < cp < 2**31:
        raise ValueError(f"prime must satisfy 1 < p < 2**31, got {p}")
    cdef Py_ssize_t nc = ncols
    cdef _Eliminator e = _Eliminator(nc, cp)
    cdef Py_ssize_t rank = 0, n
    cdef int64_t v
    cdef Py_ssize_t c
    cdef int st
    for row in rows:
        if len(row) > e.row_cap:
            e._grow_row(len(row))
        n = 0
        for key, val in row.items():
            c = key
            if not 0 <= c < nc:
                raise ValueError(f"column {key} out of range for ncols={ncols}")
            v = val % cp
            if v:
                e.row_cols[n] = <int32_t> c
                e.row_vals[n] = v
                n += 1
        with nogil:
            st = e._insert(n)
        if st < 0:
            raise MemoryError()
        rank += st
    return rank
