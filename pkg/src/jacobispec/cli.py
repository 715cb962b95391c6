"""Command-line front end.

Every run is deterministic for a fixed configuration and build: JSON output
carries a schema_version and echoes the resolved configuration (including
defaulted values), CSV output is headered, and nothing is randomized or
timestamped.

Exit codes:
    0  success
    2  bad usage (unknown flags, invalid or missing parameter values)
    3  bad input file (unreadable, malformed JSON, wrong schema)
    4  numerical failure (iteration did not converge within its cap)
    5  unsupported range (e.g. Bessel order outside the validated window)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from ._backend import BACKEND
from .cfrac import check_contraction, estimate_limit, j_convergent, s_convergent
from .coeffs import (CoefficientSequence, SFraction, JFraction, classify,
                     coeffs_from_json_dict, coeffs_to_json_dict)
from .eigenspec import spectrum_sweep
from .errors import InputError, NumericalFailureError, UnsupportedRangeError
from .families import FamilySpec, family_metadata, list_families, make_family
from .recurrence import christoffel_mass, ratio_sequence

SCHEMA_VERSION = 1

DEFAULT_TOL = 1e-12
DEFAULT_SIZES = "200,400"
DEFAULT_MAX_N = 100000
DEFAULT_WINDOW = "100:2000"

_FAMILY_FLAGS = ("a", "b", "nu", "alpha", "lam", "mu", "q")


class _FileError(Exception):
    pass


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="built-in family name (see `family list`)")
    for flag in _FAMILY_FLAGS:
        p.add_argument(f"--{flag}", type=float, default=None,
                       help=f"family parameter {flag}")
    p.add_argument("--coeffs-file", help="JSON coefficient-sequence document")


def _resolve_coeffs(args) -> tuple[CoefficientSequence, dict]:
    """Build the coefficient sequence from --family flags or a JSON file."""
    if (args.family is None) == (args.coeffs_file is None):
        raise InputError("exactly one of --family or --coeffs-file is required")
    if args.family is not None:
        params = {f: getattr(args, f) for f in _FAMILY_FLAGS
                  if getattr(args, f) is not None}
        spec = FamilySpec(name=args.family, params=params)
        return make_family(spec), {"family": args.family, "params": spec.params}
    doc = _load_json(args.coeffs_file)
    try:
        c = coeffs_from_json_dict(doc)
    except InputError as exc:
        raise _FileError(f"{args.coeffs_file}: {exc}") from exc
    return c, {"coeffs_file": args.coeffs_file}


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _FileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _FileError(f"{path} is not valid JSON: {exc}") from exc


def _load_sfraction(path: str) -> SFraction:
    doc = _load_json(path)
    terms = doc.get("terms")
    if not isinstance(terms, list) or not terms:
        raise _FileError(f"{path}: expected a nonempty \"terms\" array")
    parsed = []
    kind = "positive-real"
    for t in terms:
        if isinstance(t, (int, float)):
            parsed.append(float(t))
        elif isinstance(t, list) and len(t) == 2:
            parsed.append(complex(t[0], t[1]))
            kind = "complex"
        else:
            raise _FileError(f"{path}: term {t!r} is neither a number nor [re, im]")
    if kind == "positive-real" and any(t <= 0 for t in parsed):
        kind = "complex"
    try:
        return SFraction.from_table(parsed, kind=kind)
    except InputError as exc:
        raise _FileError(f"{path}: {exc}") from exc


def _parse_scalar(text: str):
    try:
        z = complex(text.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"cannot parse scalar {text!r}") from exc
    return z.real if z.imag == 0 else z


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s]
    except ValueError as exc:
        raise InputError(f"cannot parse sizes {text!r}") from exc
    if len(sizes) < 2:
        raise InputError("need at least two truncation sizes")
    return sizes


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError as exc:
        raise InputError(f"cannot parse window {text!r}, expected LO:HI") from exc
    return lo, hi


def _parse_grid(text: str) -> list[float]:
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise InputError(f"cannot parse grid {text!r}, expected START:STOP:COUNT") from exc
    if count < 1:
        raise InputError("grid count must be >= 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def _jsonable(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _emit_json(args, command: str, config: dict, result: dict) -> int:
    doc = {"schema_version": SCHEMA_VERSION, "command": command,
           "backend": BACKEND, "config": config, "result": result}
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _write(args, text)
    return 0


def _emit_csv(args, header: list[str], rows: list[tuple]) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(args, buf.getvalue())
    return 0


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    c, src = _resolve_coeffs(args)
    window = _parse_window(args.window)
    report = classify(c, window, tol=args.tol)
    config = {**src, "window": list(window), "tol": args.tol}
    result = {
        "is_compact": report.is_compact,
        "is_trace_class": report.is_trace_class,
        "mab": list(report.mab) if report.mab is not None else None,
        "evidence": {k: (list(v) if isinstance(v, tuple) else v)
                     for k, v in report.evidence.items()},
    }
    return _emit_json(args, "classify", config, result)


def _cmd_spectrum(args) -> int:
    c, src = _resolve_coeffs(args)
    sizes = _parse_sizes(args.sizes)
    report = spectrum_sweep(c, sizes, tol=args.tol)
    config = {**src, "sizes": sizes, "tol": args.tol}
    if args.format == "csv":
        buf = io.StringIO()
        report.write_csv(buf)
        _write(args, buf.getvalue())
        return 0
    return _emit_json(args, "spectrum", config, report.to_json_dict())


def _cmd_cf(args) -> int:
    point = None
    if args.sfrac_file is not None:
        frac: SFraction | JFraction = _load_sfraction(args.sfrac_file)
        src = {"sfrac_file": args.sfrac_file}
        if args.t is not None:
            point = _parse_scalar(args.t)
        elif args.grid_re is None:
            raise InputError("--t is required with --sfrac-file")
    else:
        c, src = _resolve_coeffs(args)
        frac = JFraction(lam0=args.lam0, coeffs=c)
        src = {**src, "lam0": args.lam0}
        if args.z is not None:
            point = _parse_scalar(args.z)
        elif args.grid_re is None:
            raise InputError("--z is required with --family/--coeffs-file")

    config = {**src, "n": args.n, "tol": args.tol, "max_n": args.max_n,
              "stable_steps": args.stable_steps, "estimate": bool(args.estimate)}

    if args.grid_re is not None:
        res = _parse_grid(args.grid_re)
        ims = _parse_grid(args.grid_im) if args.grid_im else [0.0]
        rows = []
        for re in res:
            for im in ims:
                pt = complex(re, im) if im != 0 else re
                est = estimate_limit(frac, pt, tol=args.tol, max_n=args.max_n,
                                     stable_steps=args.stable_steps)
                val = est.value if est.value is not None else float("nan")
                rows.append((repr(float(re)), repr(float(im)), est.order,
                             repr(float(complex(val).real)), repr(float(complex(val).imag)),
                             est.status))
        return _emit_csv(args, ["re_point", "im_point", "order", "re_value",
                                "im_value", "status"], rows)

    if args.estimate:
        est = estimate_limit(frac, point, tol=args.tol, max_n=args.max_n,
                             stable_steps=args.stable_steps)
        result = {"status": est.status, "value": _jsonable(est.value),
                  "order": est.order, "last_delta": est.last_delta}
        return _emit_json(args, "cf", config, result)

    if isinstance(frac, SFraction):
        cv = s_convergent(frac, point, args.n)
    else:
        cv = j_convergent(frac, point, args.n)
    result = {"order": cv.order, "status": cv.status, "value": _jsonable(cv.value),
              "numerator": _jsonable(cv.numerator),
              "denominator": _jsonable(cv.denominator), "scale_log": cv.scale_log}
    return _emit_json(args, "cf", config, result)


def _cmd_ratio(args) -> int:
    c, src = _resolve_coeffs(args)
    x = _parse_scalar(args.x)
    report = ratio_sequence(c, x, args.n, tol=args.tol)
    config = {**src, "x": _jsonable(x), "n": args.n, "tol": args.tol}
    if args.format == "csv":
        rows = [(k + 1, repr(complex(r).real), repr(complex(r).imag))
                for k, r in enumerate(report.ratios)]
        return _emit_csv(args, ["k", "re_ratio", "im_ratio"], rows)
    result = {"status": report.status, "limit": _jsonable(report.limit),
              "char_root": _jsonable(report.char_root),
              "residual": report.residual,
              "last_ratios": [_jsonable(complex(r) if isinstance(x, complex) else float(r))
                              for r in report.ratios[-5:]]}
    return _emit_json(args, "ratio", config, result)


def _cmd_mass(args) -> int:
    c, src = _resolve_coeffs(args)
    x = _parse_scalar(args.x)
    if isinstance(x, complex):
        raise InputError("--x must be real for mass estimation")
    report = christoffel_mass(c, x, args.n)
    config = {**src, "x": x, "n": args.n}
    if args.format == "csv":
        rows = [(k, repr(float(report.log_sums[k])), repr(float(report.mass_estimates[k])))
                for k in range(len(report.log_sums))]
        return _emit_csv(args, ["k", "log_sum", "mass_estimate"], rows)
    result = {"log_sum": float(report.log_sums[-1]),
              "sum": float(report.sums[-1]),
              "mass_estimate": float(report.mass_estimates[-1])}
    return _emit_json(args, "mass", config, result)


def _cmd_family(args) -> int:
    if args.action == "list":
        return _emit_json(args, "family", {"action": "list"},
                          {"families": list_families()})
    if args.name is None:
        raise InputError("family info requires a family name")
    meta = family_metadata(args.name)
    params = {f: getattr(args, f) for f in _FAMILY_FLAGS
              if getattr(args, f) is not None}
    result: dict = {"metadata": meta}
    if params:
        c = make_family(FamilySpec(name=args.name, params=params))
        result["coefficients"] = coeffs_to_json_dict(c)
        result["leading"] = {
            "diag": [c.diag(n) for n in range(8)],
            "offdiag": [c.offdiag(n) for n in range(1, 8)],
        }
    return _emit_json(args, "family", {"action": "info", "name": args.name,
                                       "params": params}, result)


def _cmd_contract_check(args) -> int:
    s = _load_sfraction(args.sfrac_file)
    z = _parse_scalar(args.z)
    needed = 2 * args.n
    if s.table_size is not None and s.table_size < needed:
        raise InputError(f"contract-check at n={args.n} needs {needed} terms, "
                         f"file has {s.table_size}")
    residual = check_contraction(s, z, args.n)
    config = {"sfrac_file": args.sfrac_file, "n": args.n, "z": _jsonable(z)}
    return _emit_json(args, "contract-check", config, {"relative_residual": residual})


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobispec",
        description="Spectral analysis of Jacobi operators given by "
                    "recurrence-coefficient sequences.",
        epilog="Exit codes: 0 success, 2 bad usage, 3 bad input file, "
               "4 numerical failure, 5 unsupported range.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--output", help="write to this path instead of stdout")
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("classify", help="compact/trace-class/M(a,b) verdicts")
    _add_family_flags(p)
    p.add_argument("--window", default=DEFAULT_WINDOW, help="tail index range LO:HI")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("spectrum", help="truncated spectra across sizes")
    _add_family_flags(p)
    p.add_argument("--sizes", default=DEFAULT_SIZES, help="comma-separated truncation sizes")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("cf", help="continued-fraction convergents and limits")
    _add_family_flags(p)
    p.add_argument("--sfrac-file", help="JSON file {\"terms\": [...]}")
    p.add_argument("--lam0", type=float, default=1.0,
                   help="leading numerator of the J-fraction (family input)")
    p.add_argument("--t", help="S-fraction evaluation point (complex ok)")
    p.add_argument("--z", help="J-fraction evaluation point (complex ok)")
    p.add_argument("--n", type=int, default=30, help="convergent order")
    p.add_argument("--estimate", action="store_true",
                   help="iterate until stabilization instead of fixed order")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--stable-steps", type=int, default=5,
                   help="consecutive below-tol differences required")
    p.add_argument("--grid-re", help="real grid START:STOP:COUNT (CSV output)")
    p.add_argument("--grid-im", help="imaginary grid START:STOP:COUNT")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_cf)

    p = sub.add_parser("ratio", help="consecutive polynomial ratios at a point")
    _add_family_flags(p)
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common(p)
    p.set_defaults(func=_cmd_ratio)

    p = sub.add_parser("mass", help="Christoffel sums and point-mass estimate")
    _add_family_flags(p)
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, default=1000)
    common(p)
    p.set_defaults(func=_cmd_mass)

    p = sub.add_parser("family", help="query the family catalog")
    p.add_argument("action", choices=["list", "info"])
    p.add_argument("name", nargs="?", help="family name for info")
    for flag in _FAMILY_FLAGS:
        p.add_argument(f"--{flag}", type=float, default=None)
    common(p, fmt=False)
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("contract-check",
                       help="residual of the S-to-J contraction identity")
    p.add_argument("--sfrac-file", required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--z", default="2")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_contract_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _FileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except UnsupportedRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
