# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation of integer polynomial systems over table rings."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef class PolyProgram:
    cdef int[::1] coef, term_ptr, fac_var, fac_exp, poly_ptr
    cdef int[:, ::1] add, mul, powtab
    cdef readonly int npolys
    cdef int nvars

    def __init__(self, coef, term_ptr, fac_var, fac_exp, poly_ptr, add, mul, powtab):
        self.coef = np.ascontiguousarray(coef, dtype=np.int32)
        self.term_ptr = np.ascontiguousarray(term_ptr, dtype=np.int32)
        self.fac_var = np.ascontiguousarray(fac_var, dtype=np.int32)
        self.fac_exp = np.ascontiguousarray(fac_exp, dtype=np.int32)
        self.poly_ptr = np.ascontiguousarray(poly_ptr, dtype=np.int32)
        self.add = np.ascontiguousarray(add, dtype=np.int32)
        self.mul = np.ascontiguousarray(mul, dtype=np.int32)
        self.powtab = np.ascontiguousarray(powtab, dtype=np.int32)
        self.npolys = len(poly_ptr) - 1
        self.nvars = int(np.max(fac_var)) + 1 if len(fac_var) else 0

    cdef void _eval(self, const int* point, int* out) nogil:
        cdef int i, t, j, v, acc
        for i in range(self.npolys):
            acc = 0
            for t in range(self.poly_ptr[i], self.poly_ptr[i + 1]):
                v = self.coef[t]
                for j in range(self.term_ptr[t], self.term_ptr[t + 1]):
                    v = self.mul[v, self.powtab[point[self.fac_var[j]], self.fac_exp[j]]]
                    if v == 0:
                        break
                if v != 0:
                    acc = self.add[acc, v]
            out[i] = acc

    def eval(self, point):
        cdef Py_ssize_t n = len(point)
        cdef int[::1] pt = np.empty(max(n, self.nvars, 1), dtype=np.int32)
        cdef int[::1] out = np.empty(max(self.npolys, 1), dtype=np.int32)
        cdef Py_ssize_t k
        for k in range(n):
            pt[k] = point[k]
        self._eval(&pt[0], &out[0])
        return tuple([out[k] for k in range(self.npolys)])

    def eval_many(self, points):
        cdef int[:, ::1] pts = np.ascontiguousarray(points, dtype=np.int32)
        cdef Py_ssize_t r, rows = pts.shape[0]
        result = np.empty((rows, self.npolys), dtype=np.int32)
        cdef int[:, ::1] out = result
        if rows == 0 or self.npolys == 0:
            return result
        with nogil:
            for r in range(rows):
                self._eval(&pts[r, 0], &out[r, 0])
        return result
