"""Numerical toolkit for infinite tridiagonal (Jacobi) operators.

Evaluate S- and J-fraction convergents, classify operators as compact,
trace class or limit-class M(a,b) from their recurrence coefficients,
compute truncated spectra with accumulation-point detection, and validate
against polynomial families whose spectra are known independently.
"""

from ._backend import BACKEND
from .cfrac import (ConvergentValue, LimitEstimate, check_contraction, estimate_limit,
                    j_convergent, j_convergent_sequence, s_convergent,
                    s_convergent_sequence)
from .coeffs import (BlumenthalLimits, ClassificationReport, CoefficientSequence,
                     JFraction, SFraction, TruncatedJacobi, blumenthal_limits,
                     classify, coeffs_from_json_dict, coeffs_to_json_dict, s_to_j,
                     truncate)
from .eigenspec import (ConvergedPoint, KreinDecayReport, KreinPolynomial,
                        SpectrumReport, eigen_tridiag, eigenvalues_only,
                        krein_gj_decay, spectrum_sweep, zero_gap_density)
from .errors import InputError, NumericalFailureError, UnsupportedRangeError
from .families import (FamilySpec, bessel_j, bessel_zero, family_metadata,
                       list_families, make_family, rogers_ramanujan_sfraction)
from .recurrence import (ChristoffelReport, PoincareRoots, PolynomialTrace,
                         RatioReport, christoffel_mass, eval_polys, poincare_roots,
                         ratio_sequence)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # coeffs
    "SFraction", "CoefficientSequence", "TruncatedJacobi", "JFraction",
    "ClassificationReport", "BlumenthalLimits",
    "s_to_j", "truncate", "classify", "blumenthal_limits",
    "coeffs_to_json_dict", "coeffs_from_json_dict",
    # recurrence
    "PolynomialTrace", "PoincareRoots", "RatioReport", "ChristoffelReport",
    "eval_polys", "poincare_roots", "ratio_sequence", "christoffel_mass",
    # cfrac
    "ConvergentValue", "LimitEstimate",
    "s_convergent", "s_convergent_sequence", "j_convergent",
    "j_convergent_sequence", "check_contraction", "estimate_limit",
    # eigenspec
    "ConvergedPoint", "SpectrumReport", "KreinPolynomial", "KreinDecayReport",
    "eigen_tridiag", "eigenvalues_only", "spectrum_sweep", "krein_gj_decay",
    "zero_gap_density",
    # families
    "FamilySpec", "make_family", "list_families", "family_metadata",
    "bessel_j", "bessel_zero", "rogers_ramanujan_sfraction",
    # errors
    "InputError", "UnsupportedRangeError", "NumericalFailureError",
]
