# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the sweep kernels in ``sweeps_py``.

Accumulations run left to right exactly like the NumPy fallback, without
fast-math, so both lanes produce the same IEEE results up to the last ulp.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport hypot

cnp.import_array()


cdef Py_ssize_t _upper_bound(const double[::1] a, double q) nogil:
    # count of entries <= q, i.e. numpy searchsorted(a, q, side="right")
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] <= q:
            lo = mid + 1
        else:
            hi = mid
    return lo


def suffix_abs_max(const double[::1] cre, const double[::1] cim,
                   const long long[::1] starts):
    """Max modulus of suffix sums starting at each event start index."""
    cdef Py_ssize_t n = cre.shape[0], ne = starts.shape[0]
    if n == 0 or ne == 0:
        return 0.0, -1
    cdef double tot_re = 0.0, tot_im = 0.0
    cdef Py_ssize_t i, e, pos
    cdef double acc_re, acc_im, v, best
    cdef Py_ssize_t best_e
    with nogil:
        for i in range(n):
            tot_re = tot_re + cre[i]
            tot_im = tot_im + cim[i]
        best = -1.0
        best_e = -1
        acc_re = 0.0
        acc_im = 0.0
        pos = 0
        for e in range(ne):
            while pos < starts[e]:
                acc_re = acc_re + cre[pos]
                acc_im = acc_im + cim[pos]
                pos += 1
            v = hypot(tot_re - acc_re, tot_im - acc_im)
            if v > best:
                best = v
                best_e = e
    return float(best), int(best_e)


def prefix_ratio_max(const double[::1] num, const double[::1] den,
                     const long long[::1] ends):
    """Max over events of prefix(num)/prefix(den); skips zero-mass radii."""
    cdef Py_ssize_t ne = ends.shape[0]
    if ne == 0:
        return 0.0, -1
    cdef double pn = 0.0, pd = 0.0, v, best = 0.0
    cdef Py_ssize_t e, pos = 0, best_e = -1
    cdef bint found = 0
    with nogil:
        for e in range(ne):
            while pos <= ends[e]:
                pn = pn + num[pos]
                pd = pd + den[pos]
                pos += 1
            if pd > 0.0:
                v = pn / pd
                if (not found) or v > best:
                    best = v
                    best_e = e
                    found = 1
    if not found:
        return 0.0, -1
    return float(best), int(best_e)


def radial_ratio_max(const double[::1] num, const long long[::1] ends,
                     const double[::1] edist):
    """Max over positive event distances of prefix(num)/distance."""
    cdef Py_ssize_t ne = ends.shape[0]
    if ne == 0:
        return 0.0, -1
    cdef double pn = 0.0, v, best = 0.0
    cdef Py_ssize_t e, pos = 0, best_e = -1
    cdef bint found = 0
    with nogil:
        for e in range(ne):
            while pos <= ends[e]:
                pn = pn + num[pos]
                pos += 1
            if edist[e] > 0.0:
                v = pn / edist[e]
                if (not found) or v > best:
                    best = v
                    best_e = e
                    found = 1
    if not found:
        return 0.0, -1
    return float(best), int(best_e)


def restricted_ratio_max(const double[::1] num, const double[::1] den,
                         const double[::1] dist, const double[::1] edist):
    """Max prefix average over radii passing the 81-fold doubling test."""
    cdef Py_ssize_t ne = edist.shape[0], n = dist.shape[0]
    if ne == 0:
        return 0.0, -1.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pn_arr = np.empty(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pd_arr = np.empty(n + 1)
    cdef double[::1] pn = pn_arr, pd = pd_arr
    cdef Py_ssize_t i, ci, kc, k3
    cdef double c, mass, v, best = 0.0, best_c = -1.0
    cdef bint found = 0
    with nogil:
        pn[0] = 0.0
        pd[0] = 0.0
        for i in range(n):
            pn[i + 1] = pn[i] + num[i]
            pd[i + 1] = pd[i] + den[i]
        for ci in range(2 * ne):
            if ci < ne:
                c = edist[ci] / 3.0
            else:
                c = edist[ci - ne]
            kc = _upper_bound(dist, c)
            k3 = _upper_bound(dist, 3.0 * c)
            mass = pd[kc]
            if mass > 0.0 and pd[k3] <= 81.0 * mass:
                v = pn[kc] / mass
                if (not found) or v > best:
                    best = v
                    best_c = c
                    found = 1
    if not found:
        return 0.0, -1.0
    return float(best), float(best_c)


def greedy_event_take(const double[::1] avail, const long long[::1] ends,
                      double target):
    """Smallest event index whose running available mass reaches target."""
    cdef Py_ssize_t ne = ends.shape[0]
    if ne == 0:
        return -1, 0.0
    cdef double acc = 0.0
    cdef Py_ssize_t e, pos = 0
    with nogil:
        for e in range(ne):
            while pos <= ends[e]:
                acc = acc + avail[pos]
                pos += 1
            if acc >= target:
                break
        else:
            e = -1
    if e < 0:
        return -1, float(acc)
    return int(e), float(acc)


def batch_prefix_ratio_max(const double[:, ::1] num2d, const double[::1] den,
                           const long long[::1] ends):
    """prefix_ratio_max applied to each row of num2d against a shared den."""
    cdef Py_ssize_t b = num2d.shape[0], ne = ends.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(b)
    cdef double[::1] out = out_arr
    if ne == 0:
        return out_arr
    cdef double pn, pd, v, best
    cdef Py_ssize_t r, e, pos
    cdef bint found
    with nogil:
        for r in range(b):
            pn = 0.0
            pd = 0.0
            pos = 0
            best = 0.0
            found = 0
            for e in range(ne):
                while pos <= ends[e]:
                    pn = pn + num2d[r, pos]
                    pd = pd + den[pos]
                    pos += 1
                if pd > 0.0:
                    v = pn / pd
                    if (not found) or v > best:
                        best = v
                        found = 1
            out[r] = best if found else 0.0
    return out_arr


def batch_restricted_ratio_max(const double[:, ::1] num2d,
                               const double[::1] den,
                               const double[::1] dist,
                               const double[::1] edist):
    """restricted_ratio_max applied to each row of num2d."""
    cdef Py_ssize_t b = num2d.shape[0], ne = edist.shape[0], n = dist.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(b)
    cdef double[::1] out = out_arr
    if ne == 0:
        return out_arr
    # admissible candidate prefix counts are shared across all rows
    cdef cnp.ndarray[cnp.int64_t, ndim=1] keep_arr = np.empty(2 * ne, dtype=np.int64)
    cdef long long[::1] keep = keep_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pd_arr = np.empty(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rowpre_arr = np.empty(n + 1)
    cdef double[::1] pd = pd_arr
    cdef double[::1] rowpre = rowpre_arr
    cdef Py_ssize_t i, ci, kc, k3, nkeep = 0
    cdef double c, mass, v, best
    cdef Py_ssize_t r, j
    with nogil:
        pd[0] = 0.0
        for i in range(n):
            pd[i + 1] = pd[i] + den[i]
        for ci in range(2 * ne):
            if ci < ne:
                c = edist[ci] / 3.0
            else:
                c = edist[ci - ne]
            kc = _upper_bound(dist, c)
            k3 = _upper_bound(dist, 3.0 * c)
            mass = pd[kc]
            if mass > 0.0 and pd[k3] <= 81.0 * mass:
                keep[nkeep] = kc
                nkeep += 1
        if nkeep > 0:
            rowpre[0] = 0.0
            for r in range(b):
                for i in range(n):
                    rowpre[i + 1] = rowpre[i] + num2d[r, i]
                best = 0.0
                for j in range(nkeep):
                    v = rowpre[keep[j]] / pd[keep[j]]
                    if j == 0 or v > best:
                        best = v
                out[r] = best
    return out_arr
