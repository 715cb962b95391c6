"""Spectra of truncated Jacobi operators and accumulation-point detection.

The eigensolver is the implicit-shift QL kernel from ``_backend`` (compiled
when available).  With positive off-diagonals every truncation has simple
spectrum, the sorted eigenvalues of consecutive truncation orders strictly
interlace, and the squared first components of the orthonormal eigenvectors
are the spectral weights: the discrete measure sum_j w_j delta(x_j) has the
same first 2N-1 moments as the full operator's spectral measure, and
``w_j = 1 / sum_{k<N} p_k(x_j)^2`` ties it to the Christoffel sums of
:mod:`jacobispec.recurrence`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ._backend import BACKEND, tridiag_eigen as _kernel_eigen
from .coeffs import CoefficientSequence, TruncatedJacobi, truncate
from .errors import InputError, NumericalFailureError

__all__ = [
    "BACKEND",
    "eigen_tridiag",
    "eigenvalues_only",
    "ConvergedPoint",
    "SpectrumReport",
    "spectrum_sweep",
    "KreinPolynomial",
    "KreinDecayReport",
    "krein_gj_decay",
    "zero_gap_density",
]

QL_SWEEP_CAP = 50


def eigen_tridiag(t: TruncatedJacobi) -> tuple[np.ndarray, np.ndarray]:
    """All eigenvalues (ascending) and spectral weights of a truncation.

    Weights are the squared first components of the orthonormal
    eigenvectors, accumulated from the QL rotations; they are positive and
    sum to 1 up to rounding.  A truncation whose QL sweep cap is exceeded
    raises :class:`NumericalFailureError`.
    """
    try:
        w, fc = _kernel_eigen(t.diag, t.offdiag, compute_weights=True,
                              max_sweeps=QL_SWEEP_CAP)
    except RuntimeError as exc:
        raise NumericalFailureError(str(exc)) from exc
    return w, fc * fc


def eigenvalues_only(t: TruncatedJacobi) -> np.ndarray:
    """Eigenvalues of a truncation, skipping the weight accumulation."""
    try:
        w, _ = _kernel_eigen(t.diag, t.offdiag, compute_weights=False,
                             max_sweeps=QL_SWEEP_CAP)
    except RuntimeError as exc:
        raise NumericalFailureError(str(exc)) from exc
    return w


@dataclass(frozen=True)
class ConvergedPoint:
    """Eigenvalue/weight pair stable across the two largest truncations."""

    value: float
    weight: float
    residual: float


@dataclass
class SpectrumReport:
    """Eigenvalue data across truncation sizes with persistence analysis."""

    sizes: list[int]
    eigenvalues: list[np.ndarray]
    weights: list[np.ndarray]
    converged_points: list[ConvergedPoint]
    accumulation_estimates: list[float]
    essential_interval: tuple[float, float] | None
    tol: float
    cluster_radius: float = field(default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "eigenvalues": [list(map(float, e)) for e in self.eigenvalues],
            "weights": [list(map(float, w)) for w in self.weights],
            "converged_points": [
                {"value": p.value, "weight": p.weight, "residual": p.residual}
                for p in self.converged_points
            ],
            "accumulation_estimates": list(self.accumulation_estimates),
            "essential_interval": (list(self.essential_interval)
                                   if self.essential_interval is not None else None),
            "tol": self.tol,
            "cluster_radius": self.cluster_radius,
        }

    def write_csv(self, fileobj) -> None:
        """Eigenvalue/weight table: one row per (size, index)."""
        w = csv.writer(fileobj)
        w.writerow(["size", "index", "eigenvalue", "weight"])
        for size, evals, wts in zip(self.sizes, self.eigenvalues, self.weights):
            for i, (x, wt) in enumerate(zip(evals, wts)):
                w.writerow([size, i, repr(float(x)), repr(float(wt))])


def _nearest_distance(sorted_ref: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Distance from each value to the nearest entry of a sorted array."""
    idx = np.searchsorted(sorted_ref, values)
    left = np.clip(idx - 1, 0, len(sorted_ref) - 1)
    right = np.clip(idx, 0, len(sorted_ref) - 1)
    return np.minimum(np.abs(values - sorted_ref[left]),
                      np.abs(values - sorted_ref[right]))


def _single_linkage(points: np.ndarray, link: float) -> list[np.ndarray]:
    """Split a sorted 1-d point set where consecutive gaps exceed ``link``."""
    if len(points) == 0:
        return []
    cuts = np.where(np.diff(points) > link)[0]
    return np.split(points, cuts + 1)


def spectrum_sweep(c: CoefficientSequence, sizes: list[int],
                   tol: float = 1e-6) -> SpectrumReport:
    """Diagonalize increasing truncations and classify the eigenvalues.

    A point of the largest truncation is *converged* when some eigenvalue
    of the second-largest lies within ``tol`` of it.  The remaining
    (non-persistent) points are grouped by single-linkage clustering with
    linking distance ``10 * tol``; a cluster of at least 3 members whose
    surrounding window gained eigenvalues between the two largest sizes is
    reported as an accumulation estimate (its member mean).

    When declared limits ``(a_lim, b_lim)`` are present the essential
    interval ``[b - a, b + a]`` with ``a = 2 a_lim, b = b_lim`` is attached,
    and for ``a_lim > 0`` both converged points and accumulation estimates
    strictly inside the open interval are suppressed: the interval itself
    represents that part of the spectrum, where truncation eigenvalues are
    dense rather than individually convergent.
    """
    if len(sizes) < 2:
        raise InputError("spectrum_sweep needs at least two truncation sizes")
    if any(s2 <= s1 for s1, s2 in zip(sizes, sizes[1:])):
        raise InputError("truncation sizes must be strictly increasing")
    if tol <= 0:
        raise InputError("tol must be positive")

    evals: list[np.ndarray] = []
    wts: list[np.ndarray] = []
    for size in sizes:
        w, wt = eigen_tridiag(truncate(c, int(size)))
        evals.append(w)
        wts.append(wt)

    e1, e2 = evals[-2], evals[-1]
    w2 = wts[-1]
    dist = _nearest_distance(e1, e2)
    persistent = dist <= tol

    essential = None
    interior = None
    if c.declared_limits is not None:
        a_lim, b_lim = c.declared_limits
        a, b = 2.0 * a_lim, b_lim
        essential = (b - a, b + a)
        if a_lim > 0:
            interior = essential

    def inside(x: float) -> bool:
        return interior is not None and interior[0] < x < interior[1]

    converged = [ConvergedPoint(value=float(x), weight=float(wt), residual=float(r))
                 for x, wt, r in zip(e2[persistent], w2[persistent], dist[persistent])
                 if not inside(float(x))]

    eps = 10.0 * tol
    estimates: list[float] = []
    for cluster in _single_linkage(e2[~persistent], eps):
        if len(cluster) < 3:
            continue
        lo, hi = cluster[0] - eps, cluster[-1] + eps
        n1 = int(np.sum((e1 >= lo) & (e1 <= hi)))
        n2 = int(np.sum((e2 >= lo) & (e2 <= hi)))
        if n2 > n1 >= 1:
            center = float(np.mean(cluster))
            if not inside(center):
                estimates.append(center)

    return SpectrumReport(sizes=[int(s) for s in sizes], eigenvalues=evals,
                          weights=wts, converged_points=converged,
                          accumulation_estimates=estimates,
                          essential_interval=essential, tol=tol,
                          cluster_radius=eps)


@dataclass(frozen=True)
class KreinPolynomial:
    """Monic polynomial g(x) = (x - x_1)...(x - x_m) with distinct real roots."""

    roots: tuple[float, ...]

    def __post_init__(self):
        if len(self.roots) < 1:
            raise InputError("polynomial needs at least one root")
        if len(set(self.roots)) != len(self.roots):
            raise InputError("roots must be distinct")
        object.__setattr__(self, "roots", tuple(float(r) for r in self.roots))

    @property
    def degree(self) -> int:
        return len(self.roots)


def _band_mult(a: dict[int, np.ndarray], b: dict[int, np.ndarray],
               size: int) -> dict[int, np.ndarray]:
    """Product of two banded matrices stored as offset -> diagonal arrays.

    Convention: ``bands[o][i] = M[i, i + o]`` with zeros outside the valid
    index range, arrays of full length ``size``.
    """
    out: dict[int, np.ndarray] = {}
    for o1, arr1 in a.items():
        for o2, arr2 in b.items():
            o = o1 + o2
            lo = max(0, -o1, -o)
            hi = min(size, size - o1, size - o)
            if lo >= hi:
                continue
            acc = out.setdefault(o, np.zeros(size))
            acc[lo:hi] += arr1[lo:hi] * arr2[lo + o1: hi + o1]
    return out


@dataclass
class KreinDecayReport:
    """Band-entry decay of g(J) over a row window.

    ``profiles[o][i]`` is the maximum of ``|g(J)[r, r+o]|`` over rows
    ``r >= i`` (up to the window end); it is nonincreasing in i.  The
    operator is consistent with g(J) compact when every band profile has
    fallen below ``tol`` by ``settle_row``.
    """

    roots: tuple[float, ...]
    depth: int
    tol: float
    settle_row: int
    profiles: dict[int, np.ndarray]
    compact_consistent: bool


def krein_gj_decay(c: CoefficientSequence, g: KreinPolynomial, depth: int,
                   tol: float = 1e-3, settle_row: int | None = None) -> KreinDecayReport:
    """Band profiles of g(J) for the first ``depth`` rows.

    g(J) is banded with bandwidth 2m+1 for degree m; its entries are
    computed exactly by m successive banded multiplications on a window of
    ``depth + m`` rows (the extra rows absorb the truncation boundary and
    are discarded).  Eigenvalue accumulation exactly at the roots of g is
    equivalent to all 2m+1 band profiles decaying to zero.
    """
    m = g.degree
    if depth < m + 1:
        raise InputError(f"depth {depth} too small for polynomial degree {m}")
    if tol <= 0:
        raise InputError("tol must be positive")
    size = depth + m
    if c.table_size is not None and size > c.table_size:
        raise InputError(f"sequence table supports {c.table_size} rows, needs {size}")
    if settle_row is None:
        settle_row = depth // 2
    if not (0 <= settle_row < depth):
        raise InputError("settle_row must lie in [0, depth)")

    diag = c.diag_array(size)
    off = c.offdiag_array(size - 1)
    up = np.zeros(size)
    up[: size - 1] = off
    down = np.zeros(size)
    down[1:] = off
    prod: dict[int, np.ndarray] = {0: np.ones(size)}
    for r in g.roots:
        factor = {0: diag - r, 1: up, -1: down}
        prod = _band_mult(prod, factor, size)

    profiles: dict[int, np.ndarray] = {}
    ok = True
    for o in range(-m, m + 1):
        vals = np.abs(prod.get(o, np.zeros(size))[:depth])
        profiles[o] = np.maximum.accumulate(vals[::-1])[::-1]
        if profiles[o][settle_row] >= tol:
            ok = False
    return KreinDecayReport(roots=g.roots, depth=depth, tol=tol,
                            settle_row=settle_row, profiles=profiles,
                            compact_consistent=ok)


def zero_gap_density(c: CoefficientSequence, n: int,
                     inner_interval: tuple[float, float]) -> float:
    """Largest gap between consecutive truncation eigenvalues in an interval.

    For limit-class sequences the truncation eigenvalues become dense in
    the essential interval, so this gap tends to 0 as n grows.  The probe
    interval must lie strictly inside the essential interval (checked when
    declared limits are available), and the truncation must put at least
    two eigenvalues inside it.
    """
    lo, hi = float(inner_interval[0]), float(inner_interval[1])
    if not lo < hi:
        raise InputError("inner interval must have positive length")
    if c.declared_limits is not None:
        a_lim, b_lim = c.declared_limits
        a, b = 2.0 * a_lim, b_lim
        if not (b - a < lo and hi < b + a):
            raise InputError(
                f"interval [{lo}, {hi}] is not strictly inside the essential "
                f"interval [{b - a}, {b + a}]")
    w = eigenvalues_only(truncate(c, n))
    selected = w[(w >= lo) & (w <= hi)]
    if len(selected) < 2:
        raise InputError(
            f"truncation order {n} resolves {len(selected)} eigenvalues in "
            f"[{lo}, {hi}]; increase n")
    return float(np.max(np.diff(selected)))
