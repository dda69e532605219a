# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched kernel-matrix determinants/inverses and Horner."""
import numpy as np
from libc.stdlib cimport malloc, free
from libc.math cimport NAN

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)

NAME = "cython"


cdef inline void _fill(double complex* a, double complex t, const double complex[:] s,
                       const double complex[:] zk, const double complex[:, :] zr,
                       Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t k, l
    for k in range(m):
        for l in range(m):
            a[k * m + l] = zr[k, l] * cexp(zk[k] * t * s[l])


cdef double complex _lu_det(double complex* a, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t col, i, k, piv
    cdef double best, v
    cdef double complex det = 1.0, f, tmp
    for col in range(m):
        piv = col
        best = cabs(a[col * m + col])
        for i in range(col + 1, m):
            v = cabs(a[i * m + col])
            if v > best:
                best = v
                piv = i
        if best == 0.0:
            return 0.0
        if piv != col:
            for k in range(m):
                tmp = a[col * m + k]
                a[col * m + k] = a[piv * m + k]
                a[piv * m + k] = tmp
            det = -det
        det = det * a[col * m + col]
        for i in range(col + 1, m):
            f = a[i * m + col] / a[col * m + col]
            if f != 0:
                for k in range(col, m):
                    a[i * m + k] = a[i * m + k] - f * a[col * m + k]
    return det


def delta_batch(ts, s, zk, zr):
    cdef const double complex[:] tv = np.ascontiguousarray(ts, dtype=complex)
    cdef const double complex[:] sv = np.ascontiguousarray(s, dtype=complex)
    cdef const double complex[:] zkv = np.ascontiguousarray(zk, dtype=complex)
    cdef const double complex[:, :] zrv = np.ascontiguousarray(zr, dtype=complex)
    cdef Py_ssize_t m = sv.shape[0], n = tv.shape[0], i
    out = np.empty(n, dtype=complex)
    cdef double complex[:] ov = out
    cdef double complex* a = <double complex*> malloc(m * m * sizeof(double complex))
    if a == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                _fill(a, tv[i], sv, zkv, zrv, m)
                ov[i] = _lu_det(a, m)
    finally:
        free(a)
    return out


def inverse_batch(ts, s, zk, zr):
    cdef const double complex[:] tv = np.ascontiguousarray(ts, dtype=complex)
    cdef const double complex[:] sv = np.ascontiguousarray(s, dtype=complex)
    cdef const double complex[:] zkv = np.ascontiguousarray(zk, dtype=complex)
    cdef const double complex[:, :] zrv = np.ascontiguousarray(zr, dtype=complex)
    cdef Py_ssize_t m = sv.shape[0], n = tv.shape[0], i, col, r, k, piv
    dets = np.empty(n, dtype=complex)
    invs = np.empty((n, m, m), dtype=complex)
    cdef double complex[:] dv = dets
    cdef double complex[:, :, :] iv = invs
    cdef double complex* a = <double complex*> malloc(2 * m * m * sizeof(double complex))
    cdef double complex det, p, f, tmp
    cdef double best, v
    cdef Py_ssize_t w = 2 * m
    cdef bint singular
    if a == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                # augmented [M | I], Gauss-Jordan with partial pivoting
                for r in range(m):
                    for k in range(m):
                        a[r * w + k] = zrv[r, k] * cexp(zkv[r] * tv[i] * sv[k])
                        a[r * w + m + k] = 1.0 if r == k else 0.0
                det = 1.0
                singular = False
                for col in range(m):
                    piv = col
                    best = cabs(a[col * w + col])
                    for r in range(col + 1, m):
                        v = cabs(a[r * w + col])
                        if v > best:
                            best = v
                            piv = r
                    if best == 0.0:
                        singular = True
                        break
                    if piv != col:
                        for k in range(w):
                            tmp = a[col * w + k]
                            a[col * w + k] = a[piv * w + k]
                            a[piv * w + k] = tmp
                        det = -det
                    p = a[col * w + col]
                    det = det * p
                    for k in range(w):
                        a[col * w + k] = a[col * w + k] / p
                    for r in range(m):
                        if r != col:
                            f = a[r * w + col]
                            if f != 0:
                                for k in range(w):
                                    a[r * w + k] = a[r * w + k] - f * a[col * w + k]
                if singular:
                    dv[i] = 0.0
                    for r in range(m):
                        for k in range(m):
                            iv[i, r, k] = NAN
                else:
                    dv[i] = det
                    for r in range(m):
                        for k in range(m):
                            iv[i, r, k] = a[r * w + m + k]
    finally:
        free(a)
    return dets, invs


def horner_batch(coeffs, zs):
    cdef const double complex[:] cv = np.ascontiguousarray(coeffs, dtype=complex)
    zarr = np.ascontiguousarray(zs, dtype=complex)
    cdef const double[:] zre = np.ascontiguousarray(zarr.real)
    cdef const double[:] zim = np.ascontiguousarray(zarr.imag)
    cdef Py_ssize_t n = zre.shape[0], d = cv.shape[0], i, k
    are = np.zeros(n)
    aim = np.zeros(n)
    cdef double[:] ar = are
    cdef double[:] ai = aim
    cdef double cr, ci, tmp
    with nogil:
        # coefficient-outer order keeps the point loop free of dependencies
        for k in range(d - 1, -1, -1):
            cr = cv[k].real
            ci = cv[k].imag
            for i in range(n):
                tmp = ar[i] * zre[i] - ai[i] * zim[i] + cr
                ai[i] = ar[i] * zim[i] + ai[i] * zre[i] + ci
                ar[i] = tmp
    return are + 1j * aim
