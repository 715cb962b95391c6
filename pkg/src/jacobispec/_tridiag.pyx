# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tridiagonal eigensolver kernel.

Same algorithm as ``_tridiag_py`` (implicit-shift QL, Wilkinson shift,
first-row rotation accumulation); see that module for the documentation.
"""

from libc.math cimport fabs, hypot, copysign

import numpy as np

BACKEND = "cython"

cdef double _EPS = 2.220446049250313e-16


def tridiag_eigen(diag, offdiag, bint compute_weights=True, int max_sweeps=50):
    """Eigenvalues (ascending) and eigenvector first components."""
    d_arr = np.asarray(diag, dtype=np.float64).copy()
    cdef Py_ssize_t n = d_arr.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    e_arr = np.zeros(n, dtype=np.float64)
    if n > 1:
        e_arr[: n - 1] = offdiag
    z_arr = np.zeros(n, dtype=np.float64)
    z_arr[0] = 1.0

    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double[::1] z = z_arr

    cdef Py_ssize_t l, m, i
    cdef int sweeps
    cdef bint underflow
    cdef double dd, g, r, s, c, p, f, b

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError(
                    "tridiagonal QL: eigenvalue %d not converged in %d sweeps"
                    % (l, max_sweeps))
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if compute_weights:
                    f = z[i + 1]
                    z[i + 1] = s * z[i] + c * f
                    z[i] = c * z[i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d_arr, kind="stable")
    w = d_arr[order]
    fc = z_arr[order] if compute_weights else None
    return w, fc
