"""Three-term recurrence evaluation, ratio asymptotics, Christoffel sums.

Everything here iterates ``x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}``
with the orthonormal initial data ``p_{-1} = 0, p_0 = 1`` and, alongside it,
the second solution ``q_0 = 0, q_1 = 1`` (the numerator polynomials of the
contracted fraction, up to a constant factor).

Off the essential spectrum the recurrence grows geometrically, so all loops
carry a shared rescaling exponent: whenever the working magnitude exceeds
``RESCALE_THRESHOLD`` every carried value is multiplied by its inverse and
the log of the factor is accumulated in ``scale_log``.  Stored values times
``exp(scale_log)`` reconstruct true magnitudes (entries that are many orders
below the running maximum underflow to zero relative to it).
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoefficientSequence
from .errors import InputError

Scalar = float | complex

RESCALE_THRESHOLD = 1e150
RATIO_STABLE_STEPS = 5


@dataclass
class PolynomialTrace:
    """Values of the orthonormal and numerator solutions at one point."""

    x: Scalar
    values: np.ndarray        # p_0 .. p_N, at the common rescaled magnitude
    numerators: np.ndarray    # q_0 .. q_N, same rescaling
    scale_log: float          # log of the factor taken out of both arrays

    def csv_rows(self) -> list[tuple]:
        return [(k, self.values[k], self.numerators[k], self.scale_log)
                for k in range(len(self.values))]

    def write_csv(self, fileobj) -> None:
        w = csv.writer(fileobj)
        w.writerow(["k", "p_k", "numerator_k", "scale_log"])
        w.writerows(self.csv_rows())


def eval_polys(c: CoefficientSequence, x: Scalar, n: int) -> PolynomialTrace:
    """Evaluate p_0..p_n and q_0..q_n at x by the forward recurrence."""
    if n < 1:
        raise InputError("eval_polys needs n >= 1")
    is_complex = isinstance(x, complex)
    dtype = complex if is_complex else float
    p = np.zeros(n + 1, dtype=dtype)
    q = np.zeros(n + 1, dtype=dtype)
    p[0] = 1.0
    q[1] = 1.0
    p[1] = (x - c.diag(0)) / c.offdiag(1)
    scale_log = 0.0
    for k in range(1, n):
        ak, ak1, bk = c.offdiag(k), c.offdiag(k + 1), c.diag(k)
        p[k + 1] = ((x - bk) * p[k] - ak * p[k - 1]) / ak1
        q[k + 1] = ((x - bk) * q[k] - ak * q[k - 1]) / ak1
        m = max(abs(p[k + 1]), abs(q[k + 1]))
        if m > RESCALE_THRESHOLD:
            p[: k + 2] /= m
            q[: k + 2] /= m
            scale_log += math.log(m)
    return PolynomialTrace(x=x, values=p, numerators=q, scale_log=scale_log)


@dataclass(frozen=True)
class PoincareRoots:
    """Characteristic roots of the constant-coefficient comparison recurrence."""

    xi1: Scalar               # larger modulus first
    xi2: Scalar
    equal_modulus: bool       # x in [b-a, b+a] for real x
    boundary: bool            # double root at x = b +- a


def poincare_roots(a: float, b: float, x: Scalar) -> PoincareRoots:
    """Roots of ``2 x xi = a xi^2 + 2 b xi + a``, ordered by modulus.

    The two roots are ``((x-b) +- sqrt((x-b)^2 - a^2))/a`` and their product
    is exactly 1.  They have equal modulus iff (x-b)^2 <= a^2, i.e. x inside
    the closed interval [b-a, b+a]; the endpoints give a double root, where
    ratio asymptotics is not available.
    """
    if not a > 0:
        raise InputError("comparison coefficient a must be positive")
    w = x - b
    disc = w * w - a * a
    tol = 1e-13 * max(a * a, abs(w) ** 2, 1.0)
    boundary = abs(disc) <= tol
    if isinstance(disc, complex) or disc < 0:
        root = cmath.sqrt(disc)
    else:
        root = math.sqrt(disc)
    xi1 = (w + root) / a
    xi2 = (w - root) / a
    if abs(xi2) > abs(xi1):
        xi1, xi2 = xi2, xi1
    equal = boundary or abs(abs(xi1) - abs(xi2)) <= 1e-12 * max(1.0, abs(xi1))
    return PoincareRoots(xi1=xi1, xi2=xi2, equal_modulus=equal, boundary=boundary)


@dataclass
class RatioReport:
    """Consecutive-value ratios p_{k+1}/p_k and their stabilization status."""

    x: Scalar
    ratios: np.ndarray        # r_k for k = 1..n-1; nan where p_k vanished
    status: str               # "converged" | "boundary" | "none"
    limit: Scalar | None      # last ratio when converged
    char_root: Scalar | None  # dominant Poincare root, when limits are known
    residual: float | None    # |limit - char_root|


def ratio_sequence(c: CoefficientSequence, x: Scalar, n: int,
                   tol: float = 1e-10) -> RatioReport:
    """Ratios r_k = p_{k+1}(x)/p_k(x) for k = 1..n-1.

    Convergence is declared when the last ``RATIO_STABLE_STEPS`` consecutive
    differences |r_k - r_{k-1}| fall below tol.  When the sequence has
    declared limits, x at an endpoint of the limit interval is reported as
    "boundary" (double characteristic root, no asymptotic ratio), and the
    dominant root is attached for comparison when x lies outside.
    """
    if n < 2:
        raise InputError("ratio_sequence needs n >= 2")
    if tol <= 0:
        raise InputError("tol must be positive")
    dtype = complex if isinstance(x, complex) else float
    ratios = np.full(n - 1, np.nan, dtype=dtype)
    pm: Scalar = 1.0                       # p_0
    p: Scalar = (x - c.diag(0)) / c.offdiag(1)   # p_1
    for k in range(1, n):
        ak, ak1, bk = c.offdiag(k), c.offdiag(k + 1), c.diag(k)
        pn = ((x - bk) * p - ak * pm) / ak1
        ratios[k - 1] = pn / p if p != 0 else np.nan
        pm, p = p, pn
        m = abs(p)
        if m > RESCALE_THRESHOLD:
            pm /= m
            p /= m

    char_root = None
    residual = None
    status = "none"
    limits = c.declared_limits
    if limits is not None and limits[0] > 0:
        a_comp, b_comp = 2.0 * limits[0], limits[1]
        roots = poincare_roots(a_comp, b_comp, x)
        if roots.boundary:
            status = "boundary"
        elif not roots.equal_modulus:
            char_root = roots.xi1

    converged = False
    if status != "boundary" and n - 1 > RATIO_STABLE_STEPS:
        tail = ratios[-(RATIO_STABLE_STEPS + 1):]
        if not np.any(np.isnan(tail)):
            converged = bool(np.all(np.abs(np.diff(tail)) < tol))
    limit = None
    if converged:
        status = "converged"
        last = ratios[-1]
        limit = complex(last) if dtype is complex else float(last)
        if char_root is not None:
            residual = float(abs(limit - char_root))
    return RatioReport(x=x, ratios=ratios, status=status, limit=limit,
                       char_root=char_root, residual=residual)


@dataclass
class ChristoffelReport:
    """Partial sums S_N = sum_{k<=N} p_k(x)^2 and the point-mass estimates.

    ``log_sums[k] = log S_k`` is always finite; ``sums`` and
    ``mass_estimates = 1/S_k`` are the exponentiated views and may round to
    inf / 0 for strongly growing recurrences.
    """

    x: float
    log_sums: np.ndarray
    sums: np.ndarray
    mass_estimates: np.ndarray


def christoffel_mass(c: CoefficientSequence, x: float, n: int) -> ChristoffelReport:
    """Running Christoffel sums at a real point, overflow-safe.

    The reciprocal of S_N estimates the spectral-measure mass at x; it is
    nonincreasing in N and tends to 0 exactly when x carries no point mass.
    """
    if isinstance(x, complex):
        raise InputError("christoffel_mass requires a real evaluation point")
    if n < 0:
        raise InputError("n must be >= 0")
    log_sums = np.zeros(n + 1)
    pm, p = 0.0, 1.0       # p_{-1}, p_0
    s_scaled = 1.0
    scale_log = 0.0        # true S = s_scaled * exp(2*scale_log)
    for k in range(n):
        ak = c.offdiag(k) if k >= 1 else 0.0
        pn = ((x - c.diag(k)) * p - ak * pm) / c.offdiag(k + 1)
        pm, p = p, pn
        s_scaled += p * p
        log_sums[k + 1] = math.log(s_scaled) + 2.0 * scale_log
        m = abs(p)
        if m > RESCALE_THRESHOLD:
            pm /= m
            p /= m
            s_scaled /= m * m
            scale_log += math.log(m)
    with np.errstate(over="ignore"):
        sums = np.exp(log_sums)
    mass = np.exp(-log_sums)
    return ChristoffelReport(x=float(x), log_sums=log_sums, sums=sums, mass_estimates=mass)
