"""Command-line front end: build matrices, compute truncated spectra,
and run the verification suites, emitting deterministic JSON or CSV.

Exit codes: 0 all requested checks passed, 1 a check failed, 2 invalid
configuration, 3 numerically inconclusive (tail/quadrature flags).
JSON payloads carry a top-level ``"schema": "1"`` and are byte-identical
for identical configurations (sorted keys, shortest round-trip floats).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import acceptance, identities as idn, operators as ops, spectral as sp
from .operators import H1Spec, H2Spec, H3Spec, H4Spec
from .spectral import InconclusiveError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_INCONCLUSIVE = 3

_DEFAULT_TOL = {
    "verify-commutation": 1e-12,
    "verify-functional": 1e-8,
    "verify-identities": 1e-6,
}


class ConfigError(Exception):
    pass


def _add_family_options(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True, choices=("h1", "h2", "h3", "h4"))
    p.add_argument("--k", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--lam", type=float, help="parameter of the h2 family")
    p.add_argument("--N", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--block", choices=("full", "even", "odd"), default="full")


def _add_output_options(p: argparse.ArgumentParser):
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="path for the machine-readable report (default: stdout)")


def _add_tol_options(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, help="tolerance override (loosen only)")
    p.add_argument(
        "--strict", action="store_true", help="allow tightening the tolerance below the default"
    )


def build_spec(args) -> ops.FamilySpec:
    def need(**kw):
        missing = [f"--{k}" for k, v in kw.items() if v is None]
        if missing:
            raise ConfigError(f"family {args.family} requires {', '.join(missing)}")

    try:
        if args.family == "h1":
            need(k=args.k, alpha=args.alpha)
            return H1Spec(k=args.k, alpha=args.alpha, block=args.block)
        if args.family == "h2":
            need(lam=args.lam)
            return H2Spec(lam=args.lam, block=args.block)
        if args.family == "h3":
            return H3Spec(block=args.block)
        need(N=args.N, gamma=args.gamma, delta=args.delta)
        return H4Spec(N=args.N, gamma=args.gamma, delta=args.delta, block=args.block)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_tol(args, command: str) -> float:
    default = _DEFAULT_TOL[command]
    if args.tol is None:
        return default
    if args.tol < default and not args.strict:
        raise ConfigError(
            f"--tol {args.tol} is tighter than the default {default}; pass --strict to allow"
        )
    return args.tol


def _emit(args, payload, summary: str):
    """Machine-readable payload to --output (or stdout), summary for humans."""
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(summary)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        if summary:
            print(summary, file=sys.stderr)


def cmd_build(args) -> int:
    spec = build_spec(args)
    matrix = ops.materialize(spec, args.size, strip_signs=args.strip_signs)
    if args.out == "csv":
        _emit(args, ops.matrix_csv(matrix), f"{args.family} {args.size}x{args.size} matrix")
    else:
        payload = {"schema": "1", **ops.matrix_json_envelope(spec, matrix)}
        if args.strip_signs:
            payload["sign_stripped"] = True
        _emit(args, payload, f"{args.family} {args.size}x{args.size} matrix")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = build_spec(args)
    if args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
    elif isinstance(spec, H4Spec):
        sizes = [spec.N + 1]
    else:
        sizes = [64, 256, 1024]
    report = sp.truncated_spectrum_report(spec, sizes, strip_signs=args.strip_signs)
    if args.density_grid:
        lo, hi, count = args.density_grid.split(":")
        rep = sp.spectral_rep(spec)
        if not isinstance(rep.measure, sp.ACMeasure):
            raise ConfigError("--density-grid applies to absolutely continuous families")
        xs = np.linspace(float(lo), float(hi), int(count))
        lines = [f"{x:.17g},{float(rep.measure.density(x)):.17g}" for x in xs]
        _emit(args, "\n".join(lines) + "\n", "density samples")
        return EXIT_OK
    if args.out == "csv":
        ev = report.eigenvalues[-1]
        lines = [f"{i},{v:.17g}" for i, v in enumerate(ev)]
        _emit(args, "\n".join(lines) + "\n", f"eigenvalues of the size-{sizes[-1]} truncation")
    else:
        payload = {"schema": "1", **report.to_dict()}
        _emit(
            args,
            payload,
            f"lambda_max={report.lambda_max[-1]:.12g} enclosure_ok={report.enclosure_ok}",
        )
    return EXIT_OK if (report.enclosure_ok and report.lambda_max_monotone) else EXIT_CHECK_FAILED


def cmd_verify_commutation(args) -> int:
    spec = build_spec(args)
    tol = resolve_tol(args, "verify-commutation")
    residual = ops.max_commutation_residual(spec, args.max_index)
    ok = residual <= tol
    payload = {
        "schema": "1",
        "command": "verify-commutation",
        "family": args.family,
        "params": ops.spec_params(spec),
        "max_index": args.max_index,
        "max_residual": residual,
        "tolerance": tol,
        "pass": ok,
    }
    _emit(args, payload, f"commutation residual {residual:.3e} (tol {tol:g}): {'ok' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_verify_functional(args) -> int:
    spec = build_spec(args)
    tol = resolve_tol(args, "verify-functional")
    if isinstance(spec, H4Spec):
        trunc = spec.N
    elif args.trunc is not None:
        trunc = args.trunc
    else:
        trunc = {"h1": 500, "h2": 100_000, "h3": 240}[args.family]
    xs = sp.default_sample_points(spec, args.samples)
    batch = sp.functional_equation_batch(spec, args.m_max, xs, trunc)
    worst = float(batch.residuals.max())
    ok = worst <= tol and batch.tail_estimate <= tol
    payload = {
        "schema": "1",
        "command": "verify-functional",
        "family": args.family,
        "params": ops.spec_params(spec),
        "m_max": args.m_max,
        "sample_points": [float(x) for x in xs],
        "trunc": trunc,
        "max_residual": worst,
        "tail_estimate": batch.tail_estimate,
        "tolerance": tol,
        "pass": ok,
    }
    _emit(
        args,
        payload,
        f"functional equation residual {worst:.3e}, tail {batch.tail_estimate:.1e} (tol {tol:g}): "
        f"{'ok' if ok else 'FAIL'}",
    )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _identity_grid():
    """(label, params, tolerance, callable) for the CLI identity suite."""
    cases = []
    for alpha in (0.0, 1.5):
        for m, n in ((0, 0), (1, 2), (3, 4)):
            cases.append(
                (
                    "laguerre-integral",
                    {"m": m, "n": n, "alpha": alpha},
                    1e-10,
                    lambda m=m, n=n, a=alpha: idn.laguerre_integral_identity(m, n, a),
                )
            )
    for m, n in ((0, 0), (1, 1), (2, 4), (1, 2)):
        cases.append(
            ("hermite-integral", {"m": m, "n": n}, 1e-10, lambda m=m, n=n: idn.hermite_integral_identity(m, n))
        )
    for m, n in ((0, 0), (1, 2)):
        cases.append(
            (
                "meixner-sum",
                {"m": m, "n": n, "beta": 1.0, "c": 0.5},
                1e-9,
                lambda m=m, n=n: idn.meixner_sum_identity(m, n, 1.0, 0.5),
            )
        )
    for m, n in ((0, 0), (1, 2)):
        cases.append(
            (
                "mp-weighted-integral",
                {"m": m, "n": n, "lam": 1.0, "phi": round(math.pi / 4, 12)},
                1e-6,
                lambda m=m, n=n: idn.mp_integral_identity(m, n, 1.0, math.pi / 4),
            )
        )
    for m, n in ((0, 0), (1, 1)):
        cases.append(
            (
                "mp-gamma4-integral",
                {"m": m, "n": n, "lam": 1.0},
                1e-6,
                lambda m=m, n=n: idn.mp_gamma4_integral_identity(m, n, 1.0),
            )
        )
    for m, n in ((0, 3), (2, 5)):
        cases.append(
            (
                "dual-hahn-sum",
                {"m": m, "n": n, "N": 6, "gamma": 0.3, "delta": 1.2},
                1e-10,
                lambda m=m, n=n: idn.dual_hahn_sum_identity(m, n, 6, 0.3, 1.2),
            )
        )
    for N, g, d in ((4, 0.0, 0.0), (6, -1.5, 0.7)):
        cases.append(
            (
                "hankel-determinant",
                {"N": N, "gamma": g, "delta": d},
                1e-8,
                lambda N=N, g=g, d=d: idn.determinant_identity(N, g, d),
            )
        )
    return cases


def cmd_verify_identities(args) -> int:
    tol_scale = resolve_tol(args, "verify-identities") / _DEFAULT_TOL["verify-identities"]
    reports = []
    all_ok = True
    inconclusive = False
    for label, params, tol, fn in _identity_grid():
        tol = tol * max(tol_scale, 1.0)
        try:
            rep = fn()
        except InconclusiveError as exc:
            inconclusive = True
            reports.append({"identity": label, "params": params, "inconclusive": str(exc)})
            continue
        ok = rep.rel_err <= tol or (rep.rhs == 0.0 and abs(rep.lhs) <= tol)
        all_ok &= ok
        reports.append(
            {
                "identity": label,
                "params": params,
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "rel_err": rep.rel_err,
                "method": rep.method,
                "tail_bound": rep.tail_bound,
                "tolerance": tol,
                "pass": ok,
            }
        )
    payload = {"schema": "1", "command": "verify-identities", "reports": reports, "pass": all_ok}
    n_fail = sum(1 for r in reports if not r.get("pass", False))
    _emit(args, payload, f"{len(reports) - n_fail}/{len(reports)} identity checks passed")
    if not all_ok:
        return EXIT_CHECK_FAILED
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def cmd_properness(args) -> int:
    spec = build_spec(args)
    check = sp.properness_integral(spec, args.eps)
    payload = {
        "schema": "1",
        "command": "properness",
        "family": args.family,
        "params": ops.spec_params(spec),
        "eps": args.eps,
        "flag": check.flag,
        "value": check.value,
        "tail_bound": None if not math.isfinite(check.tail_bound) else check.tail_bound,
    }
    _emit(args, payload, f"properness integral: {check.flag}" + (f" ({check.value:.6g})" if check.value is not None else ""))
    if check.flag == "finite":
        return EXIT_OK
    return EXIT_CHECK_FAILED if check.flag == "divergent" else EXIT_INCONCLUSIVE


def cmd_report(args) -> int:
    results = []
    for key in acceptance.CRITERIA:
        try:
            res = acceptance.run_criterion(key)
        except InconclusiveError as exc:
            res = acceptance.CriterionResult(
                key, "", False, 0.0, {"inconclusive": True}, [f"inconclusive: {exc}"]
            )
        results.append(res)
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.key:28s} {res.runtime_s:7.2f}s")
        for f in res.failures:
            print(f"      {f}")
    payload = {
        "schema": "1",
        "command": "report",
        "criteria": [r.to_dict() for r in results],
        "pass": all(r.passed for r in results),
    }
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} acceptance criteria passed")
    if all(r.passed for r in results):
        return EXIT_OK
    if any(r.details.get("inconclusive") for r in results if not r.passed) and all(
        r.passed or r.details.get("inconclusive") for r in results
    ):
        return EXIT_INCONCLUSIVE
    return EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hankel-spectra",
        description="weighted Hankel matrices with tridiagonal commutants: builders and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="materialize a truncation and export it")
    _add_family_options(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--strip-signs", action="store_true")
    _add_output_options(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues of truncations with enclosure diagnostics")
    _add_family_options(p)
    p.add_argument("--sizes", help="comma-separated truncation sizes")
    p.add_argument("--strip-signs", action="store_true")
    p.add_argument("--density-grid", help="lo:hi:count, emit (x, density) CSV instead")
    _add_output_options(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("verify-commutation", help="entrywise commutation residuals")
    _add_family_options(p)
    p.add_argument("--max-index", type=int, default=200)
    _add_tol_options(p)
    _add_output_options(p)
    p.set_defaults(fn=cmd_verify_commutation)

    p = sub.add_parser("verify-functional", help="spectral functional-equation residuals")
    _add_family_options(p)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--trunc", type=int)
    _add_tol_options(p)
    _add_output_options(p)
    p.set_defaults(fn=cmd_verify_functional)

    p = sub.add_parser("verify-identities", help="closed-form identity suite")
    _add_tol_options(p)
    _add_output_options(p)
    p.set_defaults(fn=cmd_verify_identities)

    p = sub.add_parser("properness", help="determinacy integral with tail bound")
    _add_family_options(p)
    p.add_argument("--eps", type=float, required=True)
    _add_output_options(p)
    p.set_defaults(fn=cmd_properness)

    p = sub.add_parser("report", help="run the full acceptance suite")
    p.add_argument("--output", help="path for the JSON report")
    p.set_defaults(fn=cmd_report)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the contract
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
