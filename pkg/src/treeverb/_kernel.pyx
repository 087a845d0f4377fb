# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled portrait kernel.  Layout and semantics match ``_kernel_py``."""
from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc
from libc.string cimport memset

ctypedef unsigned short u16


cdef class PortraitKernel:
    cdef public int d, n, size, inner, nperm
    cdef u16* _mul
    cdef u16* _inv
    cdef int* _img

    def __cinit__(self, int d, int n, mul_table, inv_table, img_table):
        cdef int a, b, i
        self.d = d
        self.n = n
        self.size = 0
        self.inner = 0
        for i in range(n):
            self.inner = self.size
            self.size = self.size * d + 1
        self.nperm = len(inv_table)
        self._mul = <u16*> malloc(self.nperm * self.nperm * sizeof(u16))
        self._inv = <u16*> malloc(self.nperm * sizeof(u16))
        self._img = <int*> malloc(self.nperm * d * sizeof(int))
        if not self._mul or not self._inv or not self._img:
            raise MemoryError()
        for a in range(self.nperm):
            row = mul_table[a]
            for b in range(self.nperm):
                self._mul[a * self.nperm + b] = row[b]
            self._inv[a] = inv_table[a]
            irow = img_table[a]
            for i in range(d):
                self._img[a * d + i] = irow[i]

    def __dealloc__(self):
        free(self._mul)
        free(self._inv)
        free(self._img)

    cdef inline void _positions(self, const u16* xv, int* pos) noexcept:
        cdef int p, i, base, q
        cdef int d = self.d
        pos[0] = 0
        for p in range(self.inner):
            base = d * pos[p] + 1
            q = d * p + 1
            for i in range(d):
                pos[q + i] = base + self._img[xv[p] * d + i]

    cpdef bytes mul(self, bytes x, bytes y):
        cdef int p
        cdef int size = self.size
        cdef const u16* xv = <const u16*> PyBytes_AS_STRING(x)
        cdef const u16* yv = <const u16*> PyBytes_AS_STRING(y)
        cdef bytes out = PyBytes_FromStringAndSize(NULL, 2 * size)
        cdef u16* ov = <u16*> PyBytes_AS_STRING(out)
        cdef int* pos
        if size == 0:
            return out
        pos = <int*> malloc(size * sizeof(int))
        if not pos:
            raise MemoryError()
        self._positions(xv, pos)
        for p in range(size):
            ov[p] = self._mul[xv[p] * self.nperm + yv[pos[p]]]
        free(pos)
        return out

    cpdef bytes inv(self, bytes x):
        cdef int p
        cdef int size = self.size
        cdef const u16* xv = <const u16*> PyBytes_AS_STRING(x)
        cdef bytes out = PyBytes_FromStringAndSize(NULL, 2 * size)
        cdef u16* ov = <u16*> PyBytes_AS_STRING(out)
        cdef int* pos
        if size == 0:
            return out
        pos = <int*> malloc(size * sizeof(int))
        if not pos:
            raise MemoryError()
        self._positions(xv, pos)
        for p in range(size):
            ov[pos[p]] = self._inv[xv[p]]
        free(pos)
        return out

    cpdef bytes power(self, bytes x, long m):
        cdef bytes result
        cdef bytes base
        if m < 0:
            x = self.inv(x)
            m = -m
        result = PyBytes_FromStringAndSize(NULL, 2 * self.size)
        memset(PyBytes_AS_STRING(result), 0, 2 * self.size)
        base = x
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    cpdef bytes conj(self, bytes x, bytes c):
        return self.mul(self.mul(self.inv(c), x), c)

    def expand(self, set seen, list elems, Py_ssize_t lo, Py_ssize_t hi, list gens, Py_ssize_t limit):
        cdef Py_ssize_t i = lo
        cdef bytes e, g, p
        while i < (len(elems) if hi < 0 else hi):
            e = elems[i]
            for g in gens:
                p = self.mul(e, g)
                if p not in seen:
                    if len(elems) >= limit:
                        raise MemoryError(f"closure exceeds {limit} elements")
                    seen.add(p)
                    elems.append(p)
            i += 1

    def conjugacy_class(self, bytes x, list elems):
        cdef set out = set()
        cdef bytes c
        for c in elems:
            out.add(self.mul(self.mul(self.inv(c), x), c))
        return out

    def left_mul_all(self, bytes x, elems):
        cdef bytes e
        return [self.mul(x, e) for e in elems]
