"""Coefficient sequences of Stieltjes fractions and Jacobi operators.

Two coordinate systems are used throughout the package:

* S-fraction terms ``b_0, b_1, b_2, ...`` of
  ``b_0/(1 + b_1 t/(1 + b_2 t/(1 + ...)))``.
* Jacobi recurrence coefficients of
  ``x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}``,
  i.e. the diagonal ``b_n`` (n >= 0) and positive off-diagonal ``a_n``
  (n >= 1) of the infinite symmetric tridiagonal matrix.

The classical contraction identity connects the two: the order-n convergent
of the contracted fraction equals the order-2n convergent of the original
S-fraction.  ``s_to_j`` implements that contraction.

Sequences are defined by an index rule; stored prefixes are only a cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

Scalar = float | complex

_POSITIVE_REAL = "positive-real"
_COMPLEX = "complex"


class SFraction:
    """Term sequence ``b_0, b_1, ...`` of an S-fraction.

    Terms come either from a finite table or from an index rule.  In
    ``positive-real`` kind every term must be > 0; ``complex`` kind is
    unrestricted (used for Van Vleck-style evaluation).
    """

    def __init__(self, rule: Callable[[int], Scalar] | None = None,
                 table: Sequence[Scalar] | None = None,
                 kind: str = _POSITIVE_REAL):
        if (rule is None) == (table is None):
            raise InputError("exactly one of rule/table must be given")
        if kind not in (_POSITIVE_REAL, _COMPLEX):
            raise InputError(f"unknown S-fraction kind {kind!r}")
        self._rule = rule
        self._cache: list[Scalar] = list(table) if table is not None else []
        self._finite = rule is None
        self.kind = kind
        if self._finite:
            for k, b in enumerate(self._cache):
                self._check(k, b)

    @classmethod
    def from_table(cls, terms: Sequence[Scalar], kind: str = _POSITIVE_REAL) -> "SFraction":
        return cls(table=terms, kind=kind)

    @classmethod
    def from_rule(cls, rule: Callable[[int], Scalar], kind: str = _POSITIVE_REAL) -> "SFraction":
        return cls(rule=rule, kind=kind)

    def _check(self, k: int, b: Scalar) -> None:
        if isinstance(b, complex) and self.kind == _POSITIVE_REAL:
            raise InputError(f"term b_{k} is complex in a positive-real S-fraction")
        if self.kind == _POSITIVE_REAL and not b > 0:
            raise InputError(f"term b_{k} = {b} is not positive")
        if not math.isfinite(abs(b)):
            raise InputError(f"term b_{k} is not finite")

    @property
    def is_finite(self) -> bool:
        return self._finite

    @property
    def table_size(self) -> int | None:
        return len(self._cache) if self._finite else None

    def term(self, k: int) -> Scalar:
        if k < 0:
            raise InputError("term index must be >= 0")
        if self._finite:
            if k >= len(self._cache):
                raise InputError(f"S-fraction table has {len(self._cache)} terms, "
                                 f"index {k} unavailable")
            return self._cache[k]
        while len(self._cache) <= k:
            b = self._rule(len(self._cache))
            self._check(len(self._cache), b)
            self._cache.append(b)
        return self._cache[k]

    def terms_array(self, n: int) -> np.ndarray:
        vals = [self.term(k) for k in range(n)]
        return np.asarray(vals)


class CoefficientSequence:
    """Recurrence coefficients ``(b_n, a_n)`` of a Jacobi operator.

    ``diag(n)`` returns b_n for n >= 0, ``offdiag(n)`` returns a_n for
    n >= 1; a_n must be strictly positive.  ``declared_limits`` is an
    optional pair ``(a_limit, b_limit)`` of the known limits of a_n and
    b_n; when present, classification verdicts become exact.
    """

    def __init__(self,
                 diag_rule: Callable[[int], float] | None = None,
                 offdiag_rule: Callable[[int], float] | None = None,
                 diag_table: Sequence[float] | None = None,
                 offdiag_table: Sequence[float] | None = None,
                 declared_limits: tuple[float, float] | None = None,
                 family: str | None = None,
                 params: dict[str, float] | None = None):
        if (diag_rule is None) == (diag_table is None):
            raise InputError("exactly one of diag_rule/diag_table must be given")
        if (offdiag_rule is None) == (offdiag_table is None):
            raise InputError("exactly one of offdiag_rule/offdiag_table must be given")
        if (diag_rule is None) != (offdiag_rule is None):
            raise InputError("diag and offdiag must both be rules or both tables")
        self._diag_rule = diag_rule
        self._offdiag_rule = offdiag_rule
        self._diag: list[float] = list(map(float, diag_table)) if diag_table is not None else []
        self._offdiag: list[float] = (list(map(float, offdiag_table))
                                      if offdiag_table is not None else [])
        self._finite = diag_rule is None
        if self._finite:
            for i, a in enumerate(self._offdiag):
                self._check_offdiag(i + 1, a)
            for i, b in enumerate(self._diag):
                self._check_diag(i, b)
        if declared_limits is not None:
            a_lim, b_lim = float(declared_limits[0]), float(declared_limits[1])
            if not (math.isfinite(a_lim) and math.isfinite(b_lim)):
                raise InputError("declared limits must be finite")
            if a_lim < 0:
                raise InputError("declared off-diagonal limit must be >= 0")
            declared_limits = (a_lim, b_lim)
        self.declared_limits = declared_limits
        self.family = family
        self.params = dict(params) if params else None

    @classmethod
    def from_table(cls, diag: Sequence[float], offdiag: Sequence[float],
                   declared_limits: tuple[float, float] | None = None) -> "CoefficientSequence":
        return cls(diag_table=diag, offdiag_table=offdiag, declared_limits=declared_limits)

    @classmethod
    def from_rule(cls, diag: Callable[[int], float], offdiag: Callable[[int], float],
                  declared_limits: tuple[float, float] | None = None,
                  family: str | None = None,
                  params: dict[str, float] | None = None) -> "CoefficientSequence":
        return cls(diag_rule=diag, offdiag_rule=offdiag, declared_limits=declared_limits,
                   family=family, params=params)

    @staticmethod
    def _check_diag(n: int, b: float) -> None:
        if not math.isfinite(b):
            raise InputError(f"diagonal entry b_{n} is not finite")

    @staticmethod
    def _check_offdiag(n: int, a: float) -> None:
        if not (a > 0 and math.isfinite(a)):
            raise InputError(f"off-diagonal entry a_{n} = {a} must be positive and finite")

    @property
    def is_finite(self) -> bool:
        return self._finite

    @property
    def table_size(self) -> int | None:
        """Largest truncation order available, None for rule-backed sequences."""
        if not self._finite:
            return None
        return min(len(self._diag), len(self._offdiag) + 1)

    def diag(self, n: int) -> float:
        if n < 0:
            raise InputError("diagonal index must be >= 0")
        if self._finite:
            if n >= len(self._diag):
                raise InputError(f"diagonal table has {len(self._diag)} entries, "
                                 f"index {n} unavailable")
            return self._diag[n]
        while len(self._diag) <= n:
            b = float(self._diag_rule(len(self._diag)))
            self._check_diag(len(self._diag), b)
            self._diag.append(b)
        return self._diag[n]

    def offdiag(self, n: int) -> float:
        if n < 1:
            raise InputError("off-diagonal index must be >= 1")
        if self._finite:
            if n > len(self._offdiag):
                raise InputError(f"off-diagonal table has {len(self._offdiag)} entries, "
                                 f"index {n} unavailable")
            return self._offdiag[n - 1]
        while len(self._offdiag) < n:
            a = float(self._offdiag_rule(len(self._offdiag) + 1))
            self._check_offdiag(len(self._offdiag) + 1, a)
            self._offdiag.append(a)
        return self._offdiag[n - 1]

    def diag_array(self, count: int) -> np.ndarray:
        """b_0 .. b_{count-1} as a float array."""
        return np.array([self.diag(n) for n in range(count)], dtype=float)

    def offdiag_array(self, count: int) -> np.ndarray:
        """a_1 .. a_count as a float array."""
        return np.array([self.offdiag(n) for n in range(1, count + 1)], dtype=float)


@dataclass(frozen=True)
class TruncatedJacobi:
    """Leading N x N section of the Jacobi matrix: symmetric tridiagonal."""

    n: int
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise InputError("truncation order must be >= 1")
        if len(self.diag) != self.n or len(self.offdiag) != self.n - 1:
            raise InputError("truncation arrays have inconsistent lengths")
        if self.n > 1 and not np.all(self.offdiag > 0):
            raise InputError("off-diagonal entries of a truncation must be positive")


@dataclass(frozen=True)
class JFraction:
    """Contracted fraction ``lam0/(z+alpha_1 - lam_1/(z+alpha_2 - ...))``.

    Stored in recurrence coordinates: ``coeffs`` holds the Jacobi
    coefficients, with ``alpha_n = -diag(n-1)`` and ``lam_n = offdiag(n)**2``.
    ``lam0`` is the leading numerator (the total mass of the spectral
    measure for a probability normalization).
    """

    lam0: float
    coeffs: CoefficientSequence

    def alpha(self, n: int) -> float:
        """Shift alpha_n in the n-th partial denominator ``z + alpha_n``."""
        return -self.coeffs.diag(n - 1)

    def lam(self, n: int) -> float:
        """Partial numerator lam_n, n >= 1."""
        a = self.coeffs.offdiag(n)
        return a * a


@dataclass
class ClassificationReport:
    """Verdicts on a coefficient sequence with the evidence used.

    ``is_compact`` and ``is_trace_class`` take values in
    {"yes", "no", "undetermined"}.  ``mab`` is the limit-class label
    ``(a, b)`` with a_n -> a/2 and b_n -> b, when it could be determined.
    The trace-class verdict applies to the operator after subtracting the
    constant comparison operator built from the limits (for limits
    ``(0, b)`` that is J - b*I; for limits ``(0, 0)`` it is J itself).
    """

    is_compact: str
    is_trace_class: str
    mab: tuple[float, float] | None
    evidence: dict = field(default_factory=dict)


def s_to_j(s: SFraction) -> JFraction:
    """Contract an S-fraction into its equivalent J-fraction.

    For ``b_0/(1 + b_1 t/(1 + b_2 t/(1 + ...)))`` at ``t = 1/z`` the
    contraction has

        lam0 = b_0,  alpha_1 = b_1,  alpha_n = b_{2n-2} + b_{2n-1} (n >= 2),
        lam_n = b_{2n-1} b_{2n} (n >= 1),

    which makes the order-n convergent of the result identical to the
    order-2n convergent of the input (times z, in the t-form normalization).
    Derived by repeated use of ``z + a/(1 + b/c) = z + a - ab/(b + c)``;
    note the first shift is b_1 alone, which the usual two-term formula
    only reproduces from n = 2 on.

    Returns a :class:`JFraction` whose ``coeffs`` carry the recurrence view
    ``diag(n) = -alpha_{n+1}``, ``offdiag(n) = sqrt(lam_n)``.
    """
    if s.kind != _POSITIVE_REAL:
        raise InputError("contraction requires a positive-real S-fraction")

    def diag_rule(n: int) -> float:
        if n == 0:
            return -s.term(1)
        return -(s.term(2 * n) + s.term(2 * n + 1))

    def offdiag_rule(n: int) -> float:
        return math.sqrt(s.term(2 * n - 1) * s.term(2 * n))

    limits = None
    coeffs = CoefficientSequence.from_rule(diag_rule, offdiag_rule, declared_limits=limits)
    return JFraction(lam0=float(s.term(0)), coeffs=coeffs)


def truncate(c: CoefficientSequence, n: int) -> TruncatedJacobi:
    """Leading n x n section: diag[i] = b_i, offdiag[i] = a_{i+1}."""
    if n < 1:
        raise InputError("truncation order must be >= 1")
    if c.table_size is not None and n > c.table_size:
        raise InputError(f"sequence table supports truncation up to {c.table_size}, got {n}")
    return TruncatedJacobi(n=n, diag=c.diag_array(n), offdiag=c.offdiag_array(n - 1))


@dataclass(frozen=True)
class BlumenthalLimits:
    """Limit-class data derived from even/odd S-fraction term limits."""

    a: float
    b: float
    essential_interval: tuple[float, float]


def blumenthal_limits(l: float, l1: float) -> BlumenthalLimits:
    """Map S-fraction term limits ``b_{2n} -> l, b_{2n+1} -> l1`` to the
    limit class of the contracted recurrence coefficients.

    Gives ``b = -l - l1``, ``a = 2 sqrt(l*l1)`` and the interval
    ``[b - a, b + a]`` on which the zeros of the denominators become dense.
    """
    if l < 0 or l1 < 0:
        raise InputError("term limits must be nonnegative")
    a = 2.0 * math.sqrt(l * l1)
    b = -l - l1
    return BlumenthalLimits(a=a, b=b, essential_interval=(b - a, b + a))


def _split_sum_verdict(tail: np.ndarray, lo: int, tol: float) -> tuple[str, dict]:
    """Cauchy-style convergence verdict for ``sum tail[n]`` from a window.

    Splits the window at its geometric midpoint: a clearly non-vanishing
    second half relative to the first signals divergence, a negligible
    second half signals convergence, anything else is undetermined.  The
    divergence call is a heuristic on a finite window; the 0.7 ratio keeps
    slowly-convergent tails (e.g. 1/(n log^2 n)) out of the "no" bucket.
    """
    hi = lo + len(tail)
    mid = int(math.sqrt(lo * hi))
    mid = min(max(mid, lo + 1), hi - 1)
    s1 = float(np.sum(tail[: mid - lo]))
    s2 = float(np.sum(tail[mid - lo:]))
    ev = {"tail_first_half": s1, "tail_second_half": s2, "split_index": mid}
    if s2 < tol:
        return "yes", ev
    if s1 > 0 and s2 >= 0.7 * s1:
        return "no", ev
    return "undetermined", ev


def classify(c: CoefficientSequence, window: tuple[int, int],
             tol: float = 1e-8) -> ClassificationReport:
    """Classify a Jacobi operator by the tail behavior of its coefficients.

    ``window = (lo, hi)`` is the half-open index range inspected.  With
    declared limits the compactness and limit-class verdicts are exact:
    compact iff the limits are (0, 0), and ``mab = (2*a_limit, b_limit)``.
    Without declared limits the limits are estimated as window means and a
    verdict is only issued when the max deviation from the mean is below
    ``tol``; otherwise "undetermined" (a finite window can never refute
    convergence, so no heuristic "no" is emitted for compactness).

    The trace-class verdict always comes from a partial-sum convergence
    test of ``|b_n - b_lim| + |a_n - a_lim|`` over the window (the banded
    summability criterion, applied after subtracting the limits).
    """
    lo, hi = int(window[0]), int(window[1])
    if not (0 <= lo < hi):
        raise InputError("window must be a nonempty range (lo < hi, lo >= 0)")
    if tol <= 0:
        raise InputError("tol must be positive")
    if c.table_size is not None and hi > c.table_size:
        raise InputError(f"window end {hi} exceeds table size {c.table_size}")

    lo = max(lo, 1)  # a_0 does not exist; align both sequences
    if lo >= hi:
        raise InputError("window must contain an index >= 1")
    ns = np.arange(lo, hi)
    bvals = np.array([c.diag(int(n)) for n in ns])
    avals = np.array([c.offdiag(int(n)) for n in ns])

    evidence: dict = {"window": (lo, hi)}

    if c.declared_limits is not None:
        a_lim, b_lim = c.declared_limits
        mab: tuple[float, float] | None = (2.0 * a_lim, b_lim)
        compact = "yes" if (a_lim == 0.0 and b_lim == 0.0) else "no"
        evidence["limits"] = (a_lim, b_lim)
    else:
        a_hat = float(np.mean(avals))
        b_hat = float(np.mean(bvals))
        resid = float(max(np.max(np.abs(avals - a_hat)), np.max(np.abs(bvals - b_hat))))
        evidence["estimated_limits"] = (a_hat, b_hat)
        evidence["max_deviation"] = resid
        if resid < tol:
            a_lim, b_lim = a_hat, b_hat
            mab = (2.0 * a_hat, b_hat)
            compact = "yes" if max(abs(a_hat), abs(b_hat)) <= tol else "undetermined"
        else:
            a_lim = b_lim = None
            mab = None
            compact = "undetermined"

    if a_lim is None:
        trace = "undetermined"
    else:
        trace, ev = _split_sum_verdict(np.abs(bvals - b_lim) + np.abs(avals - a_lim), lo, tol)
        evidence.update(ev)
        if (trace == "yes" and compact == "undetermined"
                and abs(a_lim) <= tol and abs(b_lim) <= tol):
            # a summable centered tail implies a vanishing one
            compact = "yes"

    return ClassificationReport(is_compact=compact, is_trace_class=trace,
                                mab=mab, evidence=evidence)


# ---------------------------------------------------------------------------
# JSON coefficient-sequence documents
#
#   {"kind": "table", "diag": [...], "offdiag": [...], "limits": [a, b] | null}
#   {"kind": "rule", "family": "<name>", "params": {...}, "limits": ...}
# ---------------------------------------------------------------------------

def coeffs_to_json_dict(c: CoefficientSequence) -> dict:
    """Serialize a sequence.  Rule-backed sequences serialize only when they
    were built from a named family."""
    limits = list(c.declared_limits) if c.declared_limits is not None else None
    if c.family is not None:
        return {"kind": "rule", "family": c.family, "params": c.params or {},
                "limits": limits}
    if not c.is_finite:
        raise InputError("cannot serialize an anonymous rule-backed sequence")
    size = c.table_size
    return {"kind": "table",
            "diag": [c.diag(n) for n in range(size)],
            "offdiag": [c.offdiag(n) for n in range(1, size)],
            "limits": limits}


def coeffs_from_json_dict(doc: dict) -> CoefficientSequence:
    kind = doc.get("kind")
    limits = doc.get("limits")
    if limits is not None:
        limits = (float(limits[0]), float(limits[1]))
    if kind == "table":
        try:
            return CoefficientSequence.from_table(doc["diag"], doc["offdiag"],
                                                  declared_limits=limits)
        except KeyError as exc:
            raise InputError(f"table document missing field {exc}") from exc
    if kind == "rule":
        from .families import FamilySpec, make_family  # local import, families builds on coeffs

        try:
            spec = FamilySpec(name=doc["family"], params=dict(doc.get("params", {})))
        except KeyError as exc:
            raise InputError(f"rule document missing field {exc}") from exc
        c = make_family(spec)
        if limits is not None:
            c.declared_limits = limits
        return c
    raise InputError(f"unknown coefficient-sequence kind {kind!r}")
