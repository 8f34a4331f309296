"""Command-line front end.

Subcommands: spectrum, certify, scan, zeta, verify.

Output schemas
--------------
spectrum (json)  {"alpha", "beta", "tol", "eigs": [{"value", "parity", "residual"}],
                  "L": {"even", "odd"}}
spectrum (csv)   index,value,parity,residual
certify          {"theorem", "alpha", "beta", "hypotheses": [{"name", "holds", "slack"}],
                  "verdict", "margin", "details"}
scan             CSV alpha,beta,verdict,margin; UTF-8, LF, one row per grid point in
                 row-major (alpha, beta) order; verdict is one of certified,
                 hypothesis_failed, condition_failed; margin "nan" where undefined
zeta             {"s", "n_terms", "partial", "tail_low", "tail_high", "low", "high"}
verify           one JSON object per line: {"check", "params", "margin", "pass"}

Floats are printed in shortest round-trip form; non-finite values become
null in JSON.

Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 verification failed
(or --assert-certified on a non-certified verdict), 5 output not writable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .certificates import (
    ESource,
    Kind,
    Lambda2Source,
    RhoVariant,
    Verdict,
    certify,
    scan_region,
    th2_certificate,
)
from .diagnostics import SUITES, run_suite, zeta_partial
from .eigensolve import DEFAULT_L_INIT, DEFAULT_L_MAX, DEFAULT_TOL, converged_spectrum
from .errors import DomainError, OracleError, SolverError
from .operator import Params, Parity, assemble_sector

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4
EXIT_IO = 5


class OutputError(Exception):
    pass


def _clean(obj):
    """Plain Python types for json; NaN/inf become None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), allow_nan=False)


def fmt(x: float) -> str:
    """Shortest round-trip decimal (repr), '.' separator."""
    return repr(float(x))


def parse_range(text: str) -> np.ndarray:
    """'start:stop:count' -> count evenly spaced points, endpoints included."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected start:stop:count")
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    if count == 1:
        if start != stop:
            raise argparse.ArgumentTypeError(f"count 1 needs start == stop in {text!r}")
        return np.array([start])
    if not stop > start:
        raise argparse.ArgumentTypeError(f"range {text!r} must increase")
    return np.linspace(start, stop, count)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("NCHO_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"NCHO_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise DomainError("NCHO_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


def _params(args) -> Params:
    beta = args.alpha if getattr(args, "beta", None) is None else args.beta
    return Params(args.alpha, beta)


def _open_out(path):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}")


# --- subcommands --------------------------------------------------------------


def cmd_spectrum(args, out=None) -> int:
    out = out or sys.stdout
    params = _params(args)
    spec = converged_spectrum(params, args.k, args.tol, args.L_init, args.L_max)
    if args.dump_matrix:
        for parity in Parity:
            path = f"{args.dump_matrix}.{parity.name.lower()}.txt"
            try:
                assemble_sector(params, parity, spec.L_used[parity]).write_triplets(path)
            except OSError as exc:
                raise OutputError(f"cannot write {path}: {exc.strerror or exc}")
    eigs = [
        {"value": float(v), "parity": p.name.lower(), "residual": float(r)}
        for v, p, r in zip(spec.eigenvalues, spec.parities, spec.residuals)
    ]
    if args.format == "csv":
        out.write("index,value,parity,residual\n")
        for i, e in enumerate(eigs):
            out.write(f"{i + 1},{fmt(e['value'])},{e['parity']},{fmt(e['residual'])}\n")
        return EXIT_OK
    report = {
        "alpha": params.alpha,
        "beta": params.beta,
        "tol": args.tol,
        "eigs": eigs,
        "L": {p.name.lower(): spec.L_used[p] for p in Parity},
    }
    out.write(dumps(report) + "\n")
    return EXIT_OK


def _numeric_levels(params, tol):
    spec = converged_spectrum(params, 2, tol)
    return float(spec.eigenvalues[0]), float(spec.eigenvalues[1])


def _certificate(params, theorem, args):
    source = Lambda2Source(args.lambda2)
    variant = RhoVariant(args.rho)
    if theorem == "th1":
        return certify(params, Kind.TH1_MULTIPLICITY)
    if theorem == "th3":
        lam2 = None
        if source is Lambda2Source.NUMERIC:
            lam2 = _numeric_levels(params, args.tol)[1]
        return certify(params, Kind.TH3_GAP, lambda2_source=source, lambda2=lam2)
    if theorem == "co13":
        return certify(params, Kind.CO13_SIMPLE, variant=variant)
    E, _ = _numeric_levels(params, args.tol)
    return th2_certificate(params, ESource.NUMERIC, E=E)


def cmd_certify(args, out=None) -> int:
    out = out or sys.stdout
    params = _params(args)
    if args.theorem == "auto":
        # first certified verdict wins; otherwise report the last attempt
        for theorem in ("th1", "th3", "co13", "th2"):
            cert = _certificate(params, theorem, args)
            if cert.verdict is Verdict.CERTIFIED:
                break
    else:
        cert = _certificate(params, args.theorem, args)
    out.write(dumps(cert.to_dict()) + "\n")
    if args.assert_certified and cert.verdict is not Verdict.CERTIFIED:
        return EXIT_VERIFY
    return EXIT_OK


def write_scan_csv(grid, fh) -> None:
    fh.write("alpha,beta,verdict,margin\n")
    for a, b, v, m in grid.rows():
        fh.write(f"{fmt(a)},{fmt(b)},{v.value},{fmt(m)}\n")


def cmd_scan(args, out=None) -> int:
    out = out or sys.stdout
    kind = Kind(args.certificate)
    workers = _threads(args)
    options = {}
    if kind is Kind.CO13_SIMPLE:
        options["variant"] = RhoVariant(args.rho)
    if kind is Kind.TH3_GAP:
        options["lambda2_source"] = Lambda2Source(args.lambda2)
        if options["lambda2_source"] is Lambda2Source.NUMERIC:
            options.update(numeric=True, tol=args.tol)
    if kind is Kind.TH2_SIMPLE:
        options.update(numeric=True, tol=args.tol)
    # open outputs before computing so a bad path fails fast
    fh = _open_out(args.out) if args.out else None
    if args.svg:
        _open_out(args.svg).close()
    try:
        grid = scan_region(args.alpha_range, args.beta_range, kind, options, workers)
        write_scan_csv(grid, fh or out)
    finally:
        if fh:
            fh.close()
    if args.svg:
        from .plotting import render_svg

        try:
            render_svg(grid, args.svg)
        except OSError as exc:
            raise OutputError(f"cannot write {args.svg}: {exc}")
    return EXIT_OK


def cmd_zeta(args, out=None) -> int:
    out = out or sys.stdout
    params = _params(args)
    if not args.s > 1:
        raise DomainError("zeta requires s>1")
    bracket = zeta_partial(params, args.s, args.terms, args.tol)
    record = bracket.to_dict()
    record.update(alpha=params.alpha, beta=params.beta)
    out.write(dumps(record) + "\n")
    return EXIT_OK


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    params = _params(args)
    names = SUITES if args.suite == "all" else (args.suite,)
    failed = False
    for name in names:
        for rec in run_suite(name, params, args.tol):
            out.write(dumps(rec) + "\n")
            if rec["pass"] is not None and not rec["pass"]:
                failed = True
    return EXIT_VERIFY if failed else EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncho",
        description="Spectra, certificates and zeta brackets for Q(alpha, beta).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def point(p, beta_default_alpha=False):
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument(
            "--beta",
            type=float,
            required=not beta_default_alpha,
            default=None,
            help="defaults to alpha" if beta_default_alpha else None,
        )
        p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)

    sp = sub.add_parser("spectrum", help="lowest eigenvalues with parity tags")
    point(sp)
    sp.add_argument("--k", type=_positive_int, default=10)
    sp.add_argument("--L-init", dest="L_init", type=_positive_int, default=DEFAULT_L_INIT)
    sp.add_argument("--L-max", dest="L_max", type=_positive_int, default=DEFAULT_L_MAX)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument(
        "--dump-matrix",
        metavar="PREFIX",
        help="write the final sector matrices as 'row col value' triplets",
    )
    sp.set_defaults(func=cmd_spectrum)

    sc = sub.add_parser("certify", help="evaluate a simplicity or gap certificate")
    point(sc)
    sc.add_argument("--theorem", choices=("auto", "th1", "th2", "co13", "th3"), default="auto")
    sc.add_argument("--lambda2", choices=[s.value for s in Lambda2Source], default="iw")
    sc.add_argument("--rho", choices=[v.value for v in RhoVariant], default="half-angle")
    sc.add_argument("--assert-certified", action="store_true")
    sc.set_defaults(func=cmd_certify)

    ss = sub.add_parser("scan", help="certificate verdicts over a parameter grid")
    ss.add_argument("--certificate", choices=[k.value for k in Kind], required=True)
    ss.add_argument("--alpha-range", type=parse_range, required=True, metavar="START:STOP:COUNT")
    ss.add_argument("--beta-range", type=parse_range, required=True, metavar="START:STOP:COUNT")
    ss.add_argument("--out", help="CSV path (stdout if omitted)")
    ss.add_argument("--svg", help="optional heatmap path")
    ss.add_argument("--threads", type=_positive_int, default=None, help="overrides NCHO_THREADS")
    ss.add_argument("--lambda2", choices=[s.value for s in Lambda2Source], default="iw")
    ss.add_argument("--rho", choices=[v.value for v in RhoVariant], default="half-angle")
    ss.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    ss.set_defaults(func=cmd_scan)

    sz = sub.add_parser("zeta", help="bracket for the spectral zeta function")
    point(sz)
    sz.add_argument("--s", type=float, default=2.0)
    sz.add_argument("--terms", type=_positive_int, default=200)
    sz.set_defaults(func=cmd_zeta)

    sv = sub.add_parser("verify", help="run numerical check suites")
    point(sv, beta_default_alpha=True)
    sv.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    sv.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on bad flags
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SolverError, OracleError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
