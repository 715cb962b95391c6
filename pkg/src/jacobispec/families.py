"""Reference coefficient families with known spectra, and a Bessel oracle.

Each family builds a :class:`~jacobispec.coeffs.CoefficientSequence` with
its declared limits filled in, so classification is exact and spectral
sweeps know the essential interval.  The Bessel-function zeros provide an
independent target for the Lommel spectrum: the operator's point spectrum
is ``{1/j_{k,nu-1} : k}``, computed here without touching the eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

from scipy import special
from scipy.optimize import brentq

from .coeffs import CoefficientSequence, SFraction
from .errors import InputError, UnsupportedRangeError

BESSEL_NU_MAX = 5.0
BESSEL_X_MAX = 100.0


@dataclass(frozen=True)
class _FamilyDef:
    params: tuple[str, ...]
    domains: dict[str, str]
    provenance: str
    description: str


_REGISTRY: dict[str, _FamilyDef] = {
    "chebyshev": _FamilyDef(
        params=("a", "b"),
        domains={"a": "a > 0", "b": "any real"},
        provenance="Chebyshev polynomials of the second kind (affine form)",
        description="Constant coefficients: diag b, offdiag a/2; measure "
                    "semicircular on [b-a, b+a].",
    ),
    "lommel": _FamilyDef(
        params=("nu",),
        domains={"nu": "nu > 0"},
        provenance="Lommel polynomials; Dickinson, Pollak & Wannier; Goldberg",
        description="diag 0, offdiag_n = 1/(2 sqrt((n+nu)(n+nu-1))); point "
                    "spectrum 1/j_{k,nu-1} accumulating at 0.",
    ),
    "tricomi_carlitz": _FamilyDef(
        params=("alpha",),
        domains={"alpha": "alpha > 0"},
        provenance="Tricomi-Carlitz (Carlitz-Karlin-McGregor) polynomials",
        description="diag 0, offdiag_n = sqrt(n/((n+alpha)(n+alpha-1))); "
                    "mass points at +-1/sqrt(k+alpha).",
    ),
    "natvig": _FamilyDef(
        params=("lam", "mu"),
        domains={"lam": "lam > 0", "mu": "mu > 0"},
        provenance="Natvig queueing model, spectral form due to van Doorn",
        description="Birth rates lam/(n+1), death rate mu: mass points "
                    "accumulate at mu, which carries no mass.",
    ),
    "chihara_ismail": _FamilyDef(
        params=("a", "lam", "mu"),
        domains={"a": "a > 0", "lam": "lam > 0", "mu": "mu > 0"},
        provenance="Chihara & Ismail birth-death rates",
        description="Rates lam/(n+a) and mu(n+1)/(n+a); a=1 reduces to the "
                    "Natvig model.",
    ),
    "rogers_ramanujan": _FamilyDef(
        params=("a", "b", "q"),
        domains={"a": "a >= 0", "b": "b > 0", "q": "0 < q < 1"},
        provenance="Polynomials of the Rogers-Ramanujan continued fraction "
                   "(Al-Salam & Ismail)",
        description="Symmetrized recurrence U_{n+1} = x(1+a q^n)U_n "
                    "- b q^{n-1} U_{n-1}: diag 0, geometric offdiag decay; "
                    "trace class.",
    ),
}


@dataclass
class FamilySpec:
    """A family name plus its numeric parameters."""

    name: str
    params: dict[str, float]
    provenance: str = dataclass_field(init=False, default="")

    def __post_init__(self):
        if self.name not in _REGISTRY:
            raise InputError(f"unknown family {self.name!r}; known: "
                             f"{', '.join(sorted(_REGISTRY))}")
        fam = _REGISTRY[self.name]
        missing = [p for p in fam.params if p not in self.params]
        if missing:
            raise InputError(f"family {self.name!r} missing parameters: "
                             f"{', '.join(missing)}")
        unknown = [p for p in self.params if p not in fam.params]
        if unknown:
            raise InputError(f"family {self.name!r} got unknown parameters: "
                             f"{', '.join(unknown)}")
        self.params = {k: float(v) for k, v in self.params.items()}
        self.provenance = fam.provenance


def list_families() -> list[str]:
    return sorted(_REGISTRY)


def family_metadata(name: str) -> dict:
    if name not in _REGISTRY:
        raise InputError(f"unknown family {name!r}")
    fam = _REGISTRY[name]
    return {"name": name, "params": list(fam.params), "domains": dict(fam.domains),
            "provenance": fam.provenance, "description": fam.description}


def _require(cond: bool, constraint: str) -> None:
    if not cond:
        raise InputError(f"parameter constraint violated: {constraint}")


def make_family(spec: FamilySpec) -> CoefficientSequence:
    """Build the coefficient sequence of a named family.

    Declared limits: chebyshev (a/2, b); lommel, tricomi_carlitz and
    rogers_ramanujan (0, 0); natvig and chihara_ismail (0, mu).
    """
    p = spec.params
    name = spec.name
    if name == "chebyshev":
        a, b = p["a"], p["b"]
        _require(a > 0, "a > 0")
        return CoefficientSequence.from_rule(
            lambda n: b, lambda n: a / 2.0,
            declared_limits=(a / 2.0, b), family=name, params=p)
    if name == "lommel":
        nu = p["nu"]
        _require(nu > 0, "nu > 0")
        return CoefficientSequence.from_rule(
            lambda n: 0.0,
            lambda n: 0.5 / math.sqrt((n + nu) * (n + nu - 1.0)),
            declared_limits=(0.0, 0.0), family=name, params=p)
    if name == "tricomi_carlitz":
        alpha = p["alpha"]
        _require(alpha > 0, "alpha > 0")
        return CoefficientSequence.from_rule(
            lambda n: 0.0,
            lambda n: math.sqrt(n / ((n + alpha) * (n + alpha - 1.0))),
            declared_limits=(0.0, 0.0), family=name, params=p)
    if name == "natvig":
        lam, mu = p["lam"], p["mu"]
        _require(lam > 0, "lam > 0")
        _require(mu > 0, "mu > 0")
        # birth lam_n = lam/(n+1), death mu_0 = 0, mu_n = mu
        return CoefficientSequence.from_rule(
            lambda n: lam / (n + 1.0) + (mu if n >= 1 else 0.0),
            lambda n: math.sqrt(lam / n * mu),
            declared_limits=(0.0, mu), family=name, params=p)
    if name == "chihara_ismail":
        a, lam, mu = p["a"], p["lam"], p["mu"]
        _require(a > 0, "a > 0")
        _require(lam > 0, "lam > 0")
        _require(mu > 0, "mu > 0")
        # birth lam_n = lam/(n+a), death mu_n = mu*n/(n+a-1) (mu_0 = 0)
        return CoefficientSequence.from_rule(
            lambda n: lam / (n + a) + (mu * n / (n + a - 1.0) if n >= 1 else 0.0),
            lambda n: math.sqrt(lam * mu * n) / (n + a - 1.0),
            declared_limits=(0.0, mu), family=name, params=p)
    if name == "rogers_ramanujan":
        a, b, q = p["a"], p["b"], p["q"]
        _require(a >= 0, "a >= 0")
        _require(b > 0, "b > 0")
        _require(0 < q < 1, "0 < q < 1")
        # orthonormal form of U_{n+1} = x(1+a q^n) U_n - b q^{n-1} U_{n-1}:
        # scale U_n so the recurrence symmetrizes; diag stays 0 and
        # offdiag_n = sqrt(b q^{n-1}) / sqrt((1+a q^{n-1})(1+a q^n)),
        # written as q^((n-1)/2) so entries stay nonzero to twice the depth
        # before double-precision underflow
        return CoefficientSequence.from_rule(
            lambda n: 0.0,
            lambda n: math.sqrt(b) * q ** ((n - 1.0) / 2.0)
            / math.sqrt((1.0 + a * q ** (n - 1.0)) * (1.0 + a * q ** n)),
            declared_limits=(0.0, 0.0), family=name, params=p)
    raise InputError(f"unknown family {name!r}")


def rogers_ramanujan_sfraction(b: float, q: float) -> SFraction:
    """S-fraction whose contraction matches the a=0 recurrence family.

    A zero-diagonal J-fraction with partial numerators lam_n maps to the
    S-fraction terms (1, lam_1, lam_2, ...) under t = -1/z^2, which here
    gives the geometric sequence (1, b, b q, b q^2, ...).  Its term sum is
    finite, so numerators and denominators of the convergents converge
    separately on the whole plane.
    """
    _require(b > 0, "b > 0")
    _require(0 < q < 1, "0 < q < 1")
    return SFraction.from_rule(lambda k: 1.0 if k == 0 else b * q ** (k - 1.0))


# ---------------------------------------------------------------------------
# Bessel oracle
# ---------------------------------------------------------------------------

_zero_cache: dict[float, list[float]] = {}


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind, validated for nu in [0, 5] and
    x in [0, 100]."""
    if not 0.0 <= nu <= BESSEL_NU_MAX:
        raise UnsupportedRangeError(f"order nu = {nu} outside supported [0, {BESSEL_NU_MAX}]")
    if not 0.0 <= x <= BESSEL_X_MAX:
        raise UnsupportedRangeError(f"argument x = {x} outside supported [0, {BESSEL_X_MAX}]")
    return float(special.jv(nu, x))


def bessel_zero(nu: float, k: int) -> float:
    """k-th positive zero of J_nu, accurate to ~1e-12 relative.

    Zeros are located by marching a sign-change scan (consecutive zeros of
    J_nu are more than 2.9 apart for nu <= 5, so a 0.5 step cannot skip
    one) and refined with a bracketed root solve.  Results are cached per
    order, so sequential k access costs one scan total.
    """
    if not 0.0 <= nu <= BESSEL_NU_MAX:
        raise UnsupportedRangeError(f"order nu = {nu} outside supported [0, {BESSEL_NU_MAX}]")
    if k < 1 or int(k) != k:
        raise InputError("zero index k must be an integer >= 1")
    k = int(k)
    zeros = _zero_cache.setdefault(float(nu), [])
    step = 0.5
    x = zeros[-1] + 1e-9 if zeros else max(nu, 1e-6)
    fx = special.jv(nu, x)
    while len(zeros) < k:
        x2 = x + step
        fx2 = special.jv(nu, x2)
        if fx == 0.0:
            x += 1e-12
            fx = special.jv(nu, x)
            continue
        if fx * fx2 < 0:
            root = brentq(lambda t: special.jv(nu, t), x, x2,
                          xtol=1e-300, rtol=4 * 2.220446049250313e-16)
            zeros.append(float(root))
            x, fx = root + 1e-9, special.jv(nu, root + 1e-9)
        else:
            x, fx = x2, fx2
    return zeros[k - 1]
