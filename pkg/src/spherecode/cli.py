"""spherecode command line: reproducible reports for codes, certificates and stability.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .codes import SphericalCode, UnknownCodeError, census, census_csv, generate, read_code, write_code
from .exactmath import as_fraction, rat_str
from .lpbound import (
    CertificateRejected,
    catalog_certificate,
    load_certificate,
    save_certificate,
    tightness_report,
    verify_certificate,
    weak_stability_constants,
)

HEAVY_N = 50000


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(_jsonable(k)) if not isinstance(k, str) else k: _jsonable(v) for k, v in x.items()}
    return x


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(_jsonable(obj), indent=2, sort_keys=True))


def _load_code(args, spec: str) -> SphericalCode:
    try:
        c = read_code(spec) if Path(spec).is_file() else generate(spec)
    except UnknownCodeError as exc:
        raise UsageError(str(exc)) from exc
    if getattr(args, "exact", False) and not c.is_exact:
        raise UsageError(f"--exact requested but {c.label or spec} has no exact model")
    return c


def _needs_heavy(args, c: SphericalCode, what: str) -> None:
    if c.N > HEAVY_N and not args.heavy:
        raise UsageError(f"{what} on {c.N} points is a long computation; pass --heavy to run it")


def _load_cert(args):
    s = as_fraction(args.s) if getattr(args, "s", None) else None
    if args.cert:
        return load_certificate(args.cert, s)
    if args.catalog:
        cert = catalog_certificate(args.catalog)
        return verify_certificate(cert.dim, cert.expansion, s) if s is not None else cert
    raise UsageError("give --cert FILE or --catalog NAME")


# subcommands


def cmd_gen(args) -> int:
    c = _load_code(args, args.name)
    if args.output:
        write_code(args.output, c, exact=True if args.exact else None)
    info = {"label": c.label, "dim": c.dim, "N": c.N, "exact": c.is_exact,
            "threshold": c.threshold, "reference_values": list(c.reference_values or ())}
    sys.stdout.write(json.dumps(_jsonable(info), sort_keys=True) + "\n")
    return 0


def cmd_bound(args) -> int:
    cert = _load_cert(args)
    if args.write_cert:
        save_certificate(args.write_cert, cert, args.normalization)
    report = {"dim": cert.dim, "s": cert.s, "bound": cert.bound, "f0": cert.f0, "m": cert.m,
              "coeffs": list(cert.expansion.coeffs), "roots": [[r, k] for r, k in cert.roots.as_pairs()]}
    if args.output:
        _emit_json(args, report)
    sys.stdout.write(f"bound = {rat_str(cert.bound) if cert.bound.denominator != 1 else cert.bound.numerator}\n")
    return 0


def cmd_verify_tight(args) -> int:
    c = _load_code(args, args.code)
    _needs_heavy(args, c, "verify-tight")
    cert = _load_cert(args)
    rep = tightness_report(c, cert, threads=args.threads)
    if not rep.applicable:
        sys.stderr.write(f"inapplicable: {rep.reason}\n")
        return 1
    zeros = all(x == 0 for x in rep.component_sums)
    sums_txt = f"0×{len(rep.component_sums)}" if zeros else ", ".join(_fmt(x) for x in rep.component_sums)
    sys.stdout.write(f"tight: {'true' if rep.is_tight else 'false'}; component sums: {sums_txt}\n")
    if args.output:
        _emit_json(args, {"code": c.label, "N": c.N, "bound": rep.bound, "lp_slack": rep.lp_slack,
                          "component_sums": list(rep.component_sums), "is_tight": rep.is_tight,
                          "exact": rep.exact, "max_offdiag": rep.max_offdiag})
    return 0 if rep.is_tight else 1


def _fmt(x) -> str:
    return rat_str(x) if isinstance(x, Fraction) else repr(float(x))


def cmd_census(args) -> int:
    c = _load_code(args, args.code)
    _needs_heavy(args, c, "census")
    refs = [as_fraction(r) if c.is_exact else float(as_fraction(r)) for r in args.refs] if args.refs else None
    if refs is None and not c.is_exact and not c.reference_values:
        raise UsageError("float code without reference values: pass --refs")
    cen = census(c, refs, tol=args.tol, threads=args.threads)
    if args.csv:
        _emit(args, census_csv(cen))
    else:
        _emit_json(args, {"code": c.label, "N": c.N, "exact": cen.exact,
                          "reference_values": list(cen.reference_values), "counts": list(cen.counts),
                          "catch_all": cen.catch_all, "row_uniform": cen.row_uniform,
                          # per-point counts in ascending order of inner product, ending with <x, x> = 1
                          "per_point": list(cen.per_point) + [1] if cen.per_point else None,
                          "max_deviation": list(cen.max_deviation), "stray_pair": cen.stray_pair})
    return 0 if cen.catch_all == 0 else 1


def cmd_constants(args) -> int:
    cert = _load_cert(args)
    w = weak_stability_constants(cert, as_fraction(args.N) if args.N else None)
    body = w.as_dict()
    body.update({"bound": cert.bound, "M_exact": w.M_enclosure.exact, "Mprime_exact": w.Mprime_enclosure.exact,
                 "slope_exact": w.slope_exact})
    _emit_json(args, body)
    return 0


def _read_matrix(path: str) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def cmd_sqrt_stability(args) -> int:
    from .perturb import perturb_code
    from .specstab import RefusedError, aligned_sqrt_pair

    if args.B and args.A:
        A, B = _read_matrix(args.A), _read_matrix(args.B)
    elif args.code:
        c = _load_code(args, args.code)
        if c.N > 2000:
            raise UsageError("sqrt-stability builds dense N x N matrices; use a code with N <= 2000")
        B = c.gram()
        A = perturb_code(c, args.eps, "tangent_noise", args.seed).gram()
    else:
        raise UsageError("give --A and --B matrix files, or --code")
    try:
        res = aligned_sqrt_pair(A, B, strict=not args.no_strict)
    except RefusedError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 1
    _emit_json(args, res.as_dict())
    return 0 if res.bound_satisfied else 1


def cmd_sweep(args) -> int:
    from .perturb import stability_sweep, sweep_csv, sweep_json, sweep_plot_data

    c = _load_code(args, args.code)
    cert = _load_cert(args) if (args.cert or args.catalog) else None
    eps = [float(e) for e in args.eps]
    rep = stability_sweep(c, cert, eps, args.trials, args.seed, args.strategy, args.threads)
    _emit(args, sweep_csv(rep) if args.csv else sweep_json(rep))
    if args.plot:
        Path(args.plot).write_text(sweep_plot_data(rep))
    return 0 if rep.all_within_bounds else 1


def cmd_almost_perp(args) -> int:
    from .specstab import almost_perp

    x = np.array([float(v) for v in args.x.split(",")])
    Z = _read_matrix(args.Z)
    res = almost_perp(x, Z, args.delta)
    _emit_json(args, {"z_perp": res.z_perp, "bound": res.bound, "actual_angle": res.actual_angle,
                      "lambda1": res.lambda1, "holds": res.actual_angle <= res.bound})
    return 0 if res.actual_angle <= res.bound else 1


# parser


def _common(p: argparse.ArgumentParser, cert: bool = False, code: bool = False) -> None:
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--threads", type=int, default=1, help="worker threads for census and sweeps")
    p.add_argument("--heavy", action="store_true", help="allow Leech-scale (196560 point) passes")
    if cert:
        p.add_argument("--cert", help="certificate JSON {dim, s, coeffs[, normalization]}")
        p.add_argument("--catalog", help="use a built-in certificate (e8_roots, leech_minimal, ...)")
        p.add_argument("--s", help="override the threshold s (p/q)")
    if code:
        p.add_argument("--exact", action="store_true", help="require rational arithmetic")


def _sub(sub, name: str, text: str) -> argparse.ArgumentParser:
    return sub.add_parser(name, help=text, description=text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spherecode", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = _sub(sub, "gen", "generate a catalog spherical code (E8 roots, Leech minimal vectors, ...)")
    p.add_argument("name", help="catalog name such as e8_roots or cross_polytope(3)")
    _common(p, code=True)
    p.set_defaults(fn=cmd_gen)

    p = _sub(sub, "bound", "verify a Delsarte LP certificate and print N = f(1)/f0")
    _common(p, cert=True)
    p.add_argument("--write-cert", help="save the verified certificate as JSON")
    p.add_argument("--normalization", choices=("unit", "jacobi"), default="unit",
                   help="coefficient scaling used by --write-cert")
    p.set_defaults(fn=cmd_bound)

    p = _sub(sub, "verify-tight", "LP slack and Gegenbauer component sums of a code")
    p.add_argument("--code", required=True, help="catalog name or code file")
    _common(p, cert=True, code=True)
    p.set_defaults(fn=cmd_verify_tight)

    p = _sub(sub, "census", "inner-product census: histogram of pairwise inner products against reference values")
    p.add_argument("--code", required=True)
    p.add_argument("--refs", nargs="*", help="reference values (p/q); defaults to the code's own")
    p.add_argument("--tol", type=float, default=0.1, help="float-mode bucket radius")
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    _common(p, code=True)
    p.set_defaults(fn=cmd_census)

    p = _sub(sub, "constants", "weak-stability constants r, M, M', K and eps thresholds")
    _common(p, cert=True)
    p.add_argument("--N", help="code size (defaults to the certificate bound)")
    p.set_defaults(fn=cmd_constants)

    p = _sub(sub, "sqrt-stability", "aligned square roots P, Q of close Gram matrices and the K delta bound")
    p.add_argument("--A", help="CSV matrix A")
    p.add_argument("--B", help="CSV matrix B (PSD)")
    p.add_argument("--code", help="use Gram(code) as B and a perturbed Gram as A")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-strict", action="store_true", help="report instead of refusing when delta >= delta_0")
    _common(p, code=True)
    p.set_defaults(fn=cmd_sqrt_stability)

    p = _sub(sub, "sweep", "perturbation sweep: Gram closeness and aligned angles versus eps, "
                           "checked against the weak and strong stability bounds")
    p.add_argument("--code", required=True)
    p.add_argument("--eps", nargs="+", default=["1e-6", "1e-5", "1e-4", "1e-3"])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--strategy", choices=("tangent_noise", "pair_stretch"), default="tangent_noise")
    p.add_argument("--csv", action="store_true", help="per-trial CSV instead of the JSON report")
    p.add_argument("--plot", help="also write gnuplot-ready median data here")
    _common(p, cert=True, code=True)
    p.set_defaults(fn=cmd_sweep)

    p = _sub(sub, "almost-perp", "angle from x to the normal of span(Z) and its sqrt((d-1)/lambda_1) bound")
    p.add_argument("--x", required=True, help="comma-separated unit vector")
    p.add_argument("--Z", required=True, help="CSV with d - 1 rows")
    p.add_argument("--delta", type=float, required=True)
    _common(p)
    p.set_defaults(fn=cmd_almost_perp)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CertificateRejected as exc:
        sys.stderr.write(f"certificate rejected: {exc}\n")
        return 1
    except (UsageError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
