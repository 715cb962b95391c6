"""Pure-Python tridiagonal eigensolver kernel.

Implicit-shift QL with Wilkinson shift (the classic tql2/imtql lineage).
Alongside the eigenvalues it can accumulate the plane rotations on the
first coordinate row, which yields exactly the first components of the
orthonormal eigenvectors; their squares are the spectral weights of the
truncated operator.  Rotations preserve the row norm, so the squared
first components sum to 1 up to rounding, with no per-eigenvalue solve.

This module is the fallback twin of the compiled kernel in ``_tridiag``;
the two implement the same arithmetic and are interchangeable (see
``benchmarks/bench_backends.py`` for the speed gap).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_EPS = float(np.finfo(np.float64).eps)


def tridiag_eigen(diag, offdiag, compute_weights: bool = True,
                  max_sweeps: int = 50):
    """Eigenvalues (ascending) and eigenvector first components.

    Parameters
    ----------
    diag : (n,) float array, main diagonal.
    offdiag : (n-1,) float array, off-diagonal.
    compute_weights : accumulate first components when True.
    max_sweeps : QL sweep cap per eigenvalue; exceeding it raises
        RuntimeError (never returns silently wrong values).

    Returns
    -------
    (eigenvalues, first_components) with first_components None when not
    requested.
    """
    d = np.asarray(diag, dtype=np.float64).copy()
    n = d.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    e = np.zeros(n, dtype=np.float64)
    if n > 1:
        e[: n - 1] = offdiag
    z = None
    if compute_weights:
        z = np.zeros(n, dtype=np.float64)
        z[0] = 1.0

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError(
                    f"tridiagonal QL: eigenvalue {l} not converged in {max_sweeps} sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated early; drop the shift and retry
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
                if z is not None:
                    f = z[i + 1]
                    z[i + 1] = s * z[i] + c * f
                    z[i] = c * z[i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    w = d[order]
    fc = z[order] if z is not None else None
    return w, fc
