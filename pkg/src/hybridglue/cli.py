"""Command-line front end: batch verification runs that emit JSON or CSV reports.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from . import dehn, gluing, hitchin_numeric as hn, liealg, models
from .errors import (
    BranchError,
    DegenerateCusp,
    GluingIncompatibility,
    InvalidParameter,
    NoSolution,
    NumericError,
)
from .exact import ComplexMatrix, GaussQ

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (InvalidParameter, GluingIncompatibility, BranchError, DegenerateCusp)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- serialization ------------------------------------------------------------

def to_jsonable(obj):
    """Recursively convert results into JSON types; rationals become [num, den]."""
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, GaussQ):
        return obj.to_json()
    if isinstance(obj, ComplexMatrix):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    else:
        out.append((prefix, json.dumps(obj, sort_keys=True, ensure_ascii=False)))


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # excel dialect: RFC 4180 quoting, CRLF rows
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- argument types -----------------------------------------------------------

def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from exc


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return v


# -- subcommands --------------------------------------------------------------

def cmd_lie_verify(args) -> dict:
    p = args.p
    triple = liealg.principal_sl2(p)
    relations = {name: d.is_zero() for name, d in triple.defects().items()}
    dims = [d for d, _ in liealg.adx_decomposition(p)]
    order = liealg.regular_nilpotent_order(p)
    mismatches = liealg.lowering_display_mismatches(p)
    checks = dict(relations)
    checks["adx_dims_are_4i-1"] = dims == [4 * i - 1 for i in range(1, p + 1)]
    checks["adx_dims_sum_to_dim_so"] = sum(dims) == 2 * p * p + p
    checks["x_e_etilde_in_so"] = all(
        liealg.check_membership(p, m) for m in (triple.x, triple.e, triple.etilde))
    checks["e_regular_nilpotent"] = order == 2 * p + 1
    results = {
        "x_diagonal": [int(v.re) for v in triple.x.diagonal()],
        "etilde": triple.etilde,
        "adx_strings": [{"dim": d, "weights": w} for d, w in liealg.adx_decomposition(p)],
        "nilpotency_order": order,
        "block_display_mismatches": mismatches,
    }
    return {"inputs": {"p": p}, "results": results, "checks": checks}


def _build_model(args) -> models.HiggsModel:
    if args.family == "bag":
        return models.bag_model(args.g, args.s)
    if args.family == "hitchin":
        return models.hitchin_model(args.p, args.g, args.s)
    return models.psi_model(args.p, args.g, args.s, args.k)


def cmd_models_stability(args) -> dict:
    m = _build_model(args)
    report = models.stability_report(m)
    nonneg = models.nonnegative_invariant_subbundles(m)
    results = report.to_json()
    results["bundle"] = m.bundle.to_json()
    results["coordinate_check"] = {
        "listed_sets_are_invariant": models.listed_sets_are_invariant(m),
        "unlisted_nonnegative_invariant_subbundles": [d for d in nonneg if not d["listed"]],
    }
    checks = {
        "total_pardeg_zero": report.total_pardeg == 0,
        "listed_subbundles_negative": report.stable,
        "listed_sets_are_invariant": models.listed_sets_are_invariant(m),
    }
    inputs = {"family": args.family, "p": args.p, "g": args.g, "s": args.s, "k": args.k}
    return {"inputs": inputs, "results": results, "checks": checks}


def cmd_glue_classify(args) -> dict:
    cls = gluing.classify_component(args.p, args.g, args.d)
    return {"inputs": {"p": args.p, "g": args.g, "d": args.d},
            "results": cls.to_json(), "checks": {}}


def cmd_glue_exhaust(args) -> dict:
    rep = gluing.exhaust(args.p, args.g)
    checks = {"witnesses_exceptional": all(
        gluing.classify_component(args.p, args.g, d).tag == gluing.EXCEPTIONAL
        for d in rep.witnesses)}
    stable = True
    for w in rep.witnesses.values():
        stable &= models.stability_report(models.hitchin_model(w.p, w.g1, w.s)).stable
        stable &= models.stability_report(models.psi_model(w.p, w.g2, w.s, w.k)).stable
    checks["witness_models_stable"] = stable
    checks["genus_matches"] = all(w.genus == args.g for w in rep.witnesses.values())
    return {"inputs": {"p": args.p, "g": args.g}, "results": rep.to_json(), "checks": checks}


def cmd_dehn_coeffs(args) -> dict:
    tol = args.tol if args.tol is not None else 1e-12
    coeffs = dehn.filling_coefficients(args.u, args.tau)
    results = {"coefficients": coeffs.to_json()}
    checks = {}
    if args.u != 0:
        v = dehn.v_of_u(args.u, args.tau)
        defect = dehn.commutator_defect(args.u, v, args.tau)
        residual = abs(coeffs.p * args.u + coeffs.q * v - 2j * math.pi)
        results.update({"v": v, "commutator_defect": defect, "equation_residual": residual})
        checks["commutator_defect_below_tol"] = defect < tol
        checks["filling_equation_below_tol"] = residual < max(tol, 1e-9)
    inputs = {"u": args.u, "tau": args.tau}
    return {"inputs": inputs, "results": results, "checks": checks, "tol": tol}


def cmd_dehn_slope(args) -> dict:
    tol = args.tol if args.tol is not None else 1e-9
    u = dehn.u_for_slope(args.p, args.q, args.tau)
    results = {"u": u}
    checks = {}
    if u != 0 and args.q != 0:
        coeffs = dehn.filling_coefficients(u, args.tau)
        err = math.hypot(coeffs.p - args.p, coeffs.q - args.q)
        results.update({"v": dehn.v_of_u(u, args.tau), "recovered": coeffs.to_json(),
                        "round_trip_error": err})
        checks["round_trip_below_tol"] = err < tol
    inputs = {"p": args.p, "q": args.q, "tau": args.tau}
    return {"inputs": inputs, "results": results, "checks": checks, "tol": tol}


def _grid(args) -> hn.PolarGrid:
    return hn.PolarGrid.aligned(args.nr, args.ntheta)


def _node_rows(grid: hn.PolarGrid, norms: np.ndarray):
    for i, r in enumerate(grid.r):
        for j, th in enumerate(grid.theta):
            yield (repr(float(r)), repr(float(th)), repr(float(norms[i, j])))


def cmd_hitchin_residual(args) -> dict:
    tol = args.tol if args.tol is not None else 1e-12
    grid = _grid(args)
    A, Phi = hn.model_solution(args.p, args.C, grid, args.family)
    rep = hn.residual(A, Phi)
    results = {"grid": {"r_min": grid.r_min, "r_max": grid.r_max, "n_r": grid.n_r,
                        "n_theta": grid.n_theta},
               "sup_norm": rep.sup_norm, "l2_norm": rep.l2_norm}
    return {"inputs": {"p": args.p, "C": args.C, "family": args.family, "nr": args.nr,
                       "ntheta": args.ntheta},
            "results": results, "checks": {"sup_norm_below_tol": rep.sup_norm < tol},
            "tol": tol, "_nodes": (grid, rep.field.pointwise_norm())}


def cmd_hitchin_glue(args) -> dict:
    tol = args.tol if args.tol is not None else 1e-10
    grid = _grid(args)
    base = hn.model_solution(args.p, args.C, grid, 1)
    x = np.diag(hn.model_diagonal(args.p, 1))
    gamma = hn.PolarField.constant(grid, args.gamma_scale * x / np.linalg.norm(x))
    chi = hn.cutoff(args.R)
    A2, Phi2 = hn.approximate_glue(base, gamma, chi)
    rep = hn.residual(A2, Phi2)
    norms = rep.field.pointwise_norm()
    mask = hn.annulus_mask(chi, grid)
    outside = float(norms[~mask].max()) if np.any(~mask) else 0.0
    inside = float(norms[mask].max()) if np.any(mask) else 0.0
    k = hn.growth_constant(chi, grid)
    gnorm = gamma.sup_norm()
    results = {
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "n_r": grid.n_r,
                 "n_theta": grid.n_theta},
        "growth_constant": k,
        "gamma_sup_norm": gnorm,
        "outside_annulus_sup": outside,
        "annulus_sup": inside,
        "annulus_sup_over_k_gamma": inside / (k * gnorm) if gnorm else 0.0,
        "l2_norm": rep.l2_norm,
    }
    return {"inputs": {"R": args.R, "gamma_scale": args.gamma_scale, "p": args.p,
                       "C": args.C, "nr": args.nr, "ntheta": args.ntheta},
            "results": results, "checks": {"outside_annulus_below_tol": outside < tol},
            "tol": tol, "_nodes": (grid, norms)}


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="override the numeric tolerance of the run")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--timestamp", action="store_true",
                        help="record the wall-clock time (reports are then not reproducible)")

    parser = _Parser(prog="hybridglue", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hybridglue {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group_parser, name: str, func: Callable, help_text: str):
        sp = group_parser.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func, command=None)
        return sp

    lie = groups.add_parser("lie").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = sub(lie, "verify", cmd_lie_verify, "principal sl(2) identities and ad x strings")
    sp.add_argument("--p", type=int, required=True)

    mod = groups.add_parser("models").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = sub(mod, "stability", cmd_models_stability, "stability report of a model family")
    sp.add_argument("--family", choices=("bag", "hitchin", "psi"), required=True)
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)

    glue = groups.add_parser("glue").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = sub(glue, "classify", cmd_glue_classify, "classify a degree d")
    for flag in ("--p", "--g", "--d"):
        sp.add_argument(flag, type=int, required=True)
    sp = sub(glue, "exhaust", cmd_glue_exhaust, "enumerate glued exceptional degrees")
    for flag in ("--p", "--g"):
        sp.add_argument(flag, type=int, required=True)

    dh = groups.add_parser("dehn").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = sub(dh, "coeffs", cmd_dehn_coeffs, "filling coefficients of a cusp parameter u")
    sp.add_argument("--u", type=_complex_arg, required=True)
    sp.add_argument("--tau", type=_complex_arg, required=True)
    sp = sub(dh, "slope", cmd_dehn_slope, "cusp parameter u for a slope (p, q)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--tau", type=_complex_arg, required=True)

    hi = groups.add_parser("hitchin").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = sub(hi, "residual", cmd_hitchin_residual, "residual of a model solution")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--family", type=int, choices=(1, 2), default=1)
    sp.add_argument("--nr", type=int, default=128)
    sp.add_argument("--ntheta", type=int, default=64)
    sp = sub(hi, "glue", cmd_hitchin_glue, "residual of a cutoff-gauged model pair")
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--gamma-scale", type=float, required=True)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--C", type=float, default=1.0)
    sp.add_argument("--nr", type=int, default=128)
    sp.add_argument("--ntheta", type=int, default=64)
    return parser


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        body = args.func(args)
    except USAGE_ERRORS as exc:
        print(f"hybridglue: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoSolution, NumericError) as exc:
        print(f"hybridglue: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL

    nodes = body.pop("_nodes", None)
    passed = all(body["checks"].values())
    report = {
        "tool": "hybridglue",
        "version": __version__,
        "command": f"{args.group} {args.action}",
        "inputs": body["inputs"],
        "results": body["results"],
        "checks": body["checks"],
        "tol": body.get("tol"),
        "passed": passed,
        "timestamp": datetime.now(timezone.utc).isoformat() if args.timestamp else None,
    }
    summary = _dump(report)
    if args.format == "json":
        _write(summary, args.out)
    elif nodes is not None:
        grid, norms = nodes
        _write(_csv_text(("r", "theta", "residual_norm"), _node_rows(grid, norms)), args.out)
        if args.out is None:
            sys.stderr.write(summary)
        else:
            _write(summary, args.out + ".summary.json")
    else:
        rows: list = []
        _flatten("", to_jsonable(report), rows)
        _write(_csv_text(("field", "value"), rows), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
