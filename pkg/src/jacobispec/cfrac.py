"""Convergents of S-fractions and J-fractions, and limit estimation.

Convergents are computed by the forward (Wallis) recurrences

    P_k = d_k P_{k-1} + n_k P_{k-2},   Q_k = d_k Q_{k-1} + n_k Q_{k-2},

with the numerator and denominator tracked separately so that separate
convergence of the two parts (the signature of a summable term sequence)
is observable, not just their ratio.  Both parts share one rescaling
exponent, which cancels exactly in the reported value.

A pole is declared when the rescaled denominator magnitude drops below
``POLE_THRESHOLD``; this separates genuine poles of the limit function
from slow convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .coeffs import JFraction, SFraction, s_to_j
from .errors import InputError

Scalar = float | complex

RESCALE_THRESHOLD = 1e150
POLE_THRESHOLD = 1e-300
POLE_VALUE_THRESHOLD = 1e12
STABLE_STEPS = 5


@dataclass
class ConvergentValue:
    """One convergent with separately tracked numerator and denominator.

    ``numerator * exp(scale_log)`` and ``denominator * exp(scale_log)``
    are the true polynomial values; ``value`` is their ratio, independent
    of the shared rescaling.  ``status`` is "ok" or "pole".
    """

    order: int
    value: Scalar | None
    numerator: Scalar
    denominator: Scalar
    scale_log: float
    status: str = "ok"


def _wallis(partials: Iterator[tuple[Scalar, Scalar]], upto: int) -> Iterator[ConvergentValue]:
    """Yield convergents 1..upto given the (numerator, denominator) partials."""
    pm, qm = 1.0, 0.0     # P_{-1}, Q_{-1}
    p, q = 0.0, 1.0       # P_0, Q_0
    scale_log = 0.0
    for k, (num, den) in enumerate(islice(partials, upto), start=1):
        pn = den * p + num * pm
        qn = den * q + num * qm
        pm, qm, p, q = p, q, pn, qn
        m = max(abs(p), abs(q))
        if m > RESCALE_THRESHOLD:
            inv = 1.0 / m
            pm *= inv
            qm *= inv
            p *= inv
            q *= inv
            scale_log += math.log(m)
        if abs(q) < POLE_THRESHOLD:
            yield ConvergentValue(order=k, value=None, numerator=p, denominator=q,
                                  scale_log=scale_log, status="pole")
        else:
            yield ConvergentValue(order=k, value=p / q, numerator=p, denominator=q,
                                  scale_log=scale_log)


def _s_partials(s: SFraction, t: Scalar) -> Iterator[tuple[Scalar, Scalar]]:
    # b_0/(1 + b_1 t/(1 + b_2 t/(1 + ...)))
    yield s.term(0), 1.0
    k = 2
    while True:
        yield s.term(k - 1) * t, 1.0
        k += 1


def _j_partials(j: JFraction, z: Scalar) -> Iterator[tuple[Scalar, Scalar]]:
    # lam0/(z + alpha_1 - lam_1/(z + alpha_2 - ...))
    yield j.lam0, z + j.alpha(1)
    k = 2
    while True:
        yield -j.lam(k - 1), z + j.alpha(k)
        k += 1


def s_convergent_sequence(s: SFraction, t: Scalar, n: int) -> list[ConvergentValue]:
    """Convergents 1..n of the S-fraction at t."""
    if n < 1:
        raise InputError("convergent order must be >= 1")
    return list(_wallis(_s_partials(s, t), n))


def s_convergent(s: SFraction, t: Scalar, n: int) -> ConvergentValue:
    """Order-n convergent of ``b_0/(1 + b_1 t/(1 + b_2 t/(1 + ...)))``.

    Order 1 is ``b_0``; order n uses the terms b_0 .. b_{n-1}.
    """
    return s_convergent_sequence(s, t, n)[-1]


def j_convergent_sequence(j: JFraction, z: Scalar, n: int) -> list[ConvergentValue]:
    """Convergents 1..n of the J-fraction at z."""
    if n < 1:
        raise InputError("convergent order must be >= 1")
    return list(_wallis(_j_partials(j, z), n))


def j_convergent(j: JFraction, z: Scalar, n: int) -> ConvergentValue:
    """Order-n convergent of ``lam0/(z+alpha_1 - lam_1/(z+alpha_2 - ...))``.

    Order 1 is ``lam0/(z + alpha_1)``.  Equals ``(lam0/a_1)`` times the
    numerator/denominator polynomial ratio of the recurrence at the same
    point (a_1 being the first off-diagonal coefficient).
    """
    return j_convergent_sequence(j, z, n)[-1]


def check_contraction(s: SFraction, z: Scalar, n: int) -> float:
    """Relative residual of the contraction identity at order n.

    Compares the order-2n convergent of the S-fraction at t = 1/z with the
    order-n convergent of the contracted J-fraction at z.  In the t-form
    normalization used by :func:`s_convergent` the identity reads
    ``S_{2n}(1/z) = z * J_n(z)`` exactly; the return value is the relative
    difference, rounding-level for any positive term sequence.

    A pole in either evaluation propagates as nan.
    """
    if z == 0:
        raise InputError("contraction check requires z != 0")
    sv = s_convergent(s, 1.0 / z, 2 * n)
    jv = j_convergent(s_to_j(s), z, n)
    if sv.status != "ok" or jv.status != "ok":
        return math.nan
    return abs(sv.value - z * jv.value) / max(abs(sv.value), POLE_THRESHOLD)


@dataclass
class LimitEstimate:
    """Outcome of iterating convergents until stabilization or the cap."""

    status: str               # "converged" | "pole" | "undetermined"
    value: Scalar | None
    order: int                # last order evaluated
    last_delta: float | None  # |C_n - C_{n-1}| at the end


def estimate_limit(fraction: SFraction | JFraction, point: Scalar,
                   tol: float = 1e-12, max_n: int = 100000,
                   stable_steps: int = STABLE_STEPS) -> LimitEstimate:
    """Estimate the continued-fraction limit at one point.

    The limit is reported once |C_{n+1} - C_n| < tol holds for
    ``stable_steps`` consecutive orders; a vanishing denominator reports a
    pole; hitting ``max_n`` first reports "undetermined".  A stabilized
    value of magnitude above ``POLE_VALUE_THRESHOLD`` is also reported as a
    pole: at double precision that only happens when the point sits within
    rounding distance of a pole of the limit function, where the convergents
    blow up through a near-zero denominator.  Complex terms and complex
    points are evaluated the same way (no claim is made about where the
    convergence region ends).
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if max_n < 2:
        raise InputError("max_n must be >= 2")
    if stable_steps < 1:
        raise InputError("stable_steps must be >= 1")
    if isinstance(fraction, SFraction):
        partials = _s_partials(fraction, point)
    elif isinstance(fraction, JFraction):
        partials = _j_partials(fraction, point)
    else:
        raise InputError("fraction must be an SFraction or a JFraction")

    prev = None
    streak = 0
    delta = None
    for cv in _wallis(partials, max_n):
        if cv.status == "pole":
            return LimitEstimate(status="pole", value=None, order=cv.order, last_delta=delta)
        if prev is not None:
            delta = abs(cv.value - prev)
            streak = streak + 1 if delta < tol else 0
            if streak >= stable_steps:
                if abs(cv.value) > POLE_VALUE_THRESHOLD:
                    return LimitEstimate(status="pole", value=None,
                                         order=cv.order, last_delta=delta)
                return LimitEstimate(status="converged", value=cv.value,
                                     order=cv.order, last_delta=delta)
        prev = cv.value
    return LimitEstimate(status="undetermined", value=None, order=max_n, last_delta=delta)
