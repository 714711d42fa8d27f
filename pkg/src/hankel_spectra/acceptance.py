"""End-to-end verification suite: one runner per acceptance criterion.

Each criterion function returns a :class:`CriterionResult` with the
worst observed deviations, so the same runners back both the test suite
and the ``report`` CLI command.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import identities as idn
from . import operators as ops
from . import spectral as sp
from .operators import H1Spec, H2Spec, H3Spec, H4Spec
from .special import binomial_general, gamma_abs_sq

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "thread_budget"]


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    runtime_s: float
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "passed": bool(self.passed),
            "runtime_s": round(self.runtime_s, 3),
            "details": self.details,
            "failures": self.failures,
        }


_GRID5 = (-0.5, 0.0, 0.3, 2.0, 5.0)
_GRID7 = _GRID5 + (-1.5, -2.5)


def _h4_eigen_spectrum() -> CriterionResult:
    worst = 0.0
    failures = []
    t0 = time.perf_counter()
    for N in range(16):
        for g in _GRID5:
            for d in _GRID5:
                spec = H4Spec(N=N, gamma=g, delta=d)
                # the small eigenvalues carry a componentwise relative
                # condition ~1e9 at the grid corner: double-rounded entries
                # alone shift them by ~1e-7, so both the assembly and the
                # rotations run in extended precision
                ev = sp.jacobi_eigvalsh_accurate(ops.h4_extended_matrix(spec, N + 1))
                expect = np.sort(
                    [binomial_general(2.0 * N + g + d + 1.0, N - x) for x in range(N + 1)]
                )
                rel = float(np.max(np.abs(ev - expect) / expect))
                worst = max(worst, rel)
                if rel > 1e-9:
                    failures.append(f"N={N} gamma={g} delta={d}: rel={rel:.3e}")
    dt = time.perf_counter() - t0
    if dt >= 10.0:
        failures.append(f"runtime {dt:.1f}s exceeds 10s")
    return CriterionResult(
        "h4-exact-spectrum",
        "finite family eigenvalues match the binomial values (rel <= 1e-9)",
        not failures,
        dt,
        {"worst_rel": worst, "grid": "N in 0..15, gamma/delta in {-0.5,0,0.3,2,5}"},
        failures,
    )


def _determinant_formula() -> CriterionResult:
    worst = 0.0
    failures = []
    t0 = time.perf_counter()
    for N in range(16):
        for g in _GRID7:
            for d in _GRID7:
                rel = idn.determinant_identity(N, g, d).rel_err
                worst = max(worst, rel)
                if rel > 1e-8:
                    failures.append(f"N={N} gamma={g} delta={d}: rel={rel:.3e}")
    dt = time.perf_counter() - t0
    if dt >= 5.0:
        failures.append(f"runtime {dt:.1f}s exceeds 5s")
    return CriterionResult(
        "determinant-formula",
        "Hankel determinant matches the closed product (rel <= 1e-8)",
        not failures,
        dt,
        {"worst_rel": worst, "grid": "N in 0..15, gamma/delta incl. {-1.5,-2.5}"},
        failures,
    )


def _commutation_specs():
    specs = [H1Spec(k=k, alpha=a) for k in (0.1, 0.5, 0.8) for a in (0.5, 1.0, 3.0)]
    specs += [H2Spec(lam=l) for l in (0.5, 1.0, 2.5)]
    specs += [H3Spec()]
    specs += [
        H4Spec(N=N, gamma=g, delta=d)
        for N in (2, 6, 12)
        for g in (-0.5, 0.3, 2.0)
        for d in (-0.5, 0.3, 2.0)
    ]
    return specs


def _commutation_identity() -> CriterionResult:
    worst = 0.0
    failures = []
    t0 = time.perf_counter()
    for spec in _commutation_specs():
        r = ops.max_commutation_residual(spec, 200)
        worst = max(worst, r)
        if r > 1e-12:
            failures.append(f"{ops.family_tag(spec)} {ops.spec_params(spec)}: {r:.3e}")
    dt = time.perf_counter() - t0
    if dt >= 30.0:
        failures.append(f"runtime {dt:.1f}s exceeds 30s")
    return CriterionResult(
        "commutation-identity",
        "entrywise commutation residual <= 1e-12 for 0 <= m < n <= 200",
        not failures,
        dt,
        {"worst_residual": worst, "n_specs": len(_commutation_specs())},
        failures,
    )


def _functional_equation() -> CriterionResult:
    # the unbounded-regime representative is k=0.75: at k=0.8 the m=10
    # series cancels through a ~1e8 peak-to-sum ratio, an inherent double
    # precision floor of ~1e-8 on the residual itself
    cases = [
        (H1Spec(k=0.75, alpha=1.0), 500, 1e-8),
        (H1Spec(k=0.5, alpha=1.5), 400, 1e-8),
        (H1Spec(k=0.3, alpha=1.0), 400, 1e-8),
        (H3Spec(), 240, 1e-8),
        (H2Spec(lam=2.5), 100_000, 1e-8),
        (H4Spec(N=12, gamma=0.3, delta=1.7), 12, 1e-10),
    ]
    failures = []
    details = {}
    t0 = time.perf_counter()
    for spec, trunc, tol in cases:
        xs = sp.default_sample_points(spec, 10)
        batch = sp.functional_equation_batch(spec, 10, xs, trunc)
        worst = float(batch.residuals.max())
        tag = f"{ops.family_tag(spec)}{ops.spec_params(spec)}"
        details[tag] = {"worst_residual": worst, "tail_estimate": batch.tail_estimate, "trunc": trunc}
        if worst > tol:
            failures.append(f"{tag}: residual {worst:.3e} > {tol}")
        if not math.isfinite(batch.tail_estimate) or batch.tail_estimate > tol:
            failures.append(f"{tag}: tail estimate {batch.tail_estimate:.3e} above {tol}")
    dt = time.perf_counter() - t0
    return CriterionResult(
        "functional-equation",
        "sum_n H[m,n] P_n(x) = h(x) P_m(x) at 10 points per family, m <= 10",
        not failures,
        dt,
        details,
        failures,
    )


def _norm_enclosures() -> CriterionResult:
    cases = [H2Spec(lam=l) for l in (0.5, 1.0, 2.5)]
    cases += [H3Spec()]
    cases += [H1Spec(k=0.5, alpha=a) for a in (0.5, 1.0, 3.0)]
    failures = []
    details = {}
    t0 = time.perf_counter()
    for spec in cases:
        rep = sp.truncated_spectrum_report(spec, [64, 256, 1024])
        tag = f"{ops.family_tag(spec)}{ops.spec_params(spec)}"
        # the norm values of the three bounded AC families
        if isinstance(spec, H2Spec):
            sup_expected = math.exp(
                0.5 * math.log(math.pi) + gammaln(spec.lam) - gammaln(spec.lam + 0.5)
            )
        elif isinstance(spec, H3Spec):
            sup_expected = math.sqrt(2.0 * math.pi)
        else:
            sup_expected = 2.0**spec.alpha
        details[tag] = {"lambda_max": rep.lambda_max, "sup_h": rep.sup_multiplier}
        if abs(rep.sup_multiplier - sup_expected) > 1e-12 * sup_expected:
            failures.append(f"{tag}: sup h {rep.sup_multiplier} != {sup_expected}")
        if not rep.enclosure_ok:
            failures.append(f"{tag}: eigenvalues leave [0, sup h] + 1e-9")
        if not rep.lambda_max_monotone:
            failures.append(f"{tag}: lambda_max not nondecreasing")
    dt = time.perf_counter() - t0
    return CriterionResult(
        "norm-enclosures",
        "truncated spectra stay in [0, sup h]+1e-9 with nondecreasing lambda_max",
        not failures,
        dt,
        details,
        failures,
    )


def _point_spectrum() -> CriterionResult:
    failures = []
    worst = 0.0
    t0 = time.perf_counter()
    for k in (0.1, 0.3):
        for a in (0.5, 1.0, 2.5):
            spec = H1Spec(k=k, alpha=a)
            ev = sp.dense_sym_eigen(ops.materialize(spec, 400))[::-1][:5]
            _, A, c = sp.h1_point_params(spec)
            expect = A**a * c ** np.arange(5)
            rel = float(np.max(np.abs(ev / expect - 1.0)))
            worst = max(worst, rel)
            if rel > 1e-6:
                failures.append(f"k={k} alpha={a}: rel={rel:.3e}")
    dt = time.perf_counter() - t0
    if dt >= 20.0:
        failures.append(f"runtime {dt:.1f}s exceeds 20s")
    return CriterionResult(
        "point-spectrum",
        "top-5 eigenvalues of the 400-truncation match the geometric spectrum (rel <= 1e-6)",
        not failures,
        dt,
        {"worst_rel": worst},
        failures,
    )


def _trace_checks() -> CriterionResult:
    failures = []
    details = {}
    t0 = time.perf_counter()
    for k, a, tol in ((0.1, 1.0, 1e-9), (0.3, 2.5, 1e-9), (0.45, 0.5, 1e-8)):
        tr, hs = idn.h1_trace_class_checks(k, a)
        details[f"h1 k={k} alpha={a}"] = {"trace_rel": tr.rel_err, "hs_rel": hs.rel_err}
        if tr.rel_err > tol or hs.rel_err > tol:
            failures.append(f"k={k} alpha={a}: trace {tr.rel_err:.2e}, hs {hs.rel_err:.2e} > {tol}")
    worst = 0.0
    for N in range(13):
        for g, d in ((-0.5, 0.3), (0.0, 0.0), (2.0, 5.0), (5.0, -0.5)):
            tr, hs = idn.trace_identities(N, g, d)
            worst = max(worst, tr.rel_err, hs.rel_err)
            if max(tr.rel_err, hs.rel_err) > 1e-10:
                failures.append(f"h4 N={N} gamma={g} delta={d}: {max(tr.rel_err, hs.rel_err):.2e}")
    details["h4_trace_worst_rel"] = worst
    dt = time.perf_counter() - t0
    return CriterionResult(
        "trace-identities",
        "trace-class sums and finite binomial trace identities",
        not failures,
        dt,
        details,
        failures,
    )


def _identity_suite() -> CriterionResult:
    failures = []
    details = {}
    t0 = time.perf_counter()
    worst = 0.0
    for alpha in (0.0, 1.5, -0.5):
        for m in range(9):
            for n in range(m, 9):
                r = idn.laguerre_integral_identity(m, n, alpha)
                worst = max(worst, r.rel_err)
                if r.rel_err > 1e-10:
                    failures.append(f"laguerre m={m} n={n} alpha={alpha}: {r.rel_err:.2e}")
    details["laguerre_worst"] = worst

    worst = worst_odd = 0.0
    for m in range(9):
        for n in range(m, 9):
            r = idn.hermite_integral_identity(m, n)
            if (m + n) % 2 == 0:
                worst = max(worst, r.rel_err)
                if r.rel_err > 1e-10:
                    failures.append(f"hermite m={m} n={n}: {r.rel_err:.2e}")
            else:
                worst_odd = max(worst_odd, abs(r.lhs))
                if abs(r.lhs) > 1e-10:
                    failures.append(f"hermite odd m={m} n={n}: |lhs|={abs(r.lhs):.2e}")
    details["hermite_worst"] = worst
    details["hermite_odd_worst_abs"] = worst_odd

    worst = 0.0
    for beta, c in ((0.7, 0.6), (2.0, 0.3), (1.0, 0.5)):
        for m in range(4):
            for n in range(m, 4):
                r = idn.meixner_sum_identity(m, n, beta, c)
                worst = max(worst, r.rel_err)
                if r.rel_err > 1e-9:
                    failures.append(f"meixner m={m} n={n} beta={beta} c={c}: {r.rel_err:.2e}")
    details["meixner_worst"] = worst

    worst = 0.0
    for lam in (0.5, 1.0):
        for phi in (math.pi / 4.0, math.pi / 3.0):
            for m, n in ((0, 0), (1, 2), (3, 3)):
                r = idn.mp_integral_identity(m, n, lam, phi)
                worst = max(worst, r.rel_err)
                if r.rel_err > 1e-6:
                    failures.append(f"mp-weighted m={m} n={n} lam={lam} phi={phi:.3f}: {r.rel_err:.2e}")
    details["mp_weighted_worst"] = worst

    worst = worst_odd = 0.0
    for lam in (0.5, 1.0):
        for m, n in ((0, 0), (1, 1), (2, 4)):
            r = idn.mp_gamma4_integral_identity(m, n, lam)
            worst = max(worst, r.rel_err)
            if r.rel_err > 1e-6:
                failures.append(f"mp-gamma4 m={m} n={n} lam={lam}: {r.rel_err:.2e}")
        for m, n in ((0, 1), (2, 3)):
            r = idn.mp_gamma4_integral_identity(m, n, lam)
            worst_odd = max(worst_odd, abs(r.lhs))
            if abs(r.lhs) > 1e-10:
                failures.append(f"mp-gamma4 odd m={m} n={n} lam={lam}: |lhs|={abs(r.lhs):.2e}")
    details["mp_gamma4_worst"] = worst
    details["mp_gamma4_odd_worst_abs"] = worst_odd

    worst = 0.0
    for N, g, d in ((5, 0.3, 1.2), (8, -0.5, 2.0), (12, 1.0, 0.0)):
        for m in range(0, N + 1, max(1, N // 3)):
            for n in range(m, N + 1, max(1, N // 3)):
                r = idn.dual_hahn_sum_identity(m, n, N, g, d)
                worst = max(worst, r.rel_err)
                if r.rel_err > 1e-10:
                    failures.append(f"dual-hahn m={m} n={n} N={N}: {r.rel_err:.2e}")
    details["dual_hahn_worst"] = worst

    dt = time.perf_counter() - t0
    return CriterionResult(
        "integral-identity-suite",
        "product-integral and lattice-sum identities against closed forms",
        not failures,
        dt,
        details,
        failures,
    )


def _kernel_checks() -> CriterionResult:
    failures = []
    details = {}
    t0 = time.perf_counter()
    z = np.linspace(0.1, 50.0, 120)
    dup = np.abs(
        np.exp(gammaln(2 * z) - ((2 * z - 1) * math.log(2.0) - 0.5 * math.log(math.pi) + gammaln(z) + gammaln(z + 0.5)))
        - 1.0
    )
    details["duplication_worst"] = float(dup.max())
    if dup.max() > 1e-11:
        failures.append(f"duplication formula deviation {dup.max():.2e}")

    worst = 0.0
    for a in (0.5, 1.0, 2.5):
        for y in (50.0, 100.0, 200.0):
            ratio = gamma_abs_sq(a, y) / (
                2.0 * math.pi * y ** (2.0 * a - 1.0) * math.exp(-math.pi * y)
            )
            worst = max(worst, abs(ratio - 1.0))
            if not 0.99 <= ratio <= 1.01:
                failures.append(f"|Gamma|^2 asymptotic a={a} y={y}: ratio={ratio}")
    details["asymptotic_worst_dev"] = worst

    worst = 0.0
    for lam in (0.3, 0.5, 1.0, 2.5):
        c_h = (2.0 * lam - 1.0) * math.log(2.0) - gammaln(2.0 * lam)
        for x in np.linspace(-3.0, 3.0, 7):
            closed = math.exp(c_h) * gamma_abs_sq(lam, x)
            integral = sp.multiplier_cosh_integral(lam, float(x))
            rel = abs(integral - closed) / closed
            worst = max(worst, rel)
            if rel > 1e-8:
                failures.append(f"cosh-integral lam={lam} x={x:.2f}: rel={rel:.2e}")
    details["cosh_integral_worst"] = worst
    dt = time.perf_counter() - t0
    return CriterionResult(
        "special-function-kernel",
        "duplication, |Gamma|^2 asymptotics, and the cosh-integral multiplier form",
        not failures,
        dt,
        details,
        failures,
    )


def _hilbert_touchstone() -> CriterionResult:
    failures = []
    t0 = time.perf_counter()
    spec = H2Spec(lam=0.5, block="even")
    M = ops.materialize(spec, 1024, strip_signs=True)
    idx = np.arange(1024)
    target = 1.0 / (idx[:, None] + idx[None, :] + 0.5)
    dev = float(np.max(np.abs(M - target)))
    if dev > 1e-13:
        failures.append(f"entrywise deviation from 1/(m+n+1/2): {dev:.3e}")
    lam_max = float(np.linalg.eigvalsh(M)[-1])
    if not 2.5 < lam_max < math.pi:
        failures.append(f"lambda_max(1024) = {lam_max} outside (2.5, pi)")
    dt = time.perf_counter() - t0
    return CriterionResult(
        "hilbert-touchstone",
        "sign-stripped even block at lam=1/2 is 1/(m+n+1/2); lambda_max in (2.5, pi)",
        not failures,
        dt,
        {"entry_dev": dev, "lambda_max_1024": lam_max},
        failures,
    )


CRITERIA = {
    "h4-exact-spectrum": _h4_eigen_spectrum,
    "determinant-formula": _determinant_formula,
    "commutation-identity": _commutation_identity,
    "functional-equation": _functional_equation,
    "norm-enclosures": _norm_enclosures,
    "point-spectrum": _point_spectrum,
    "trace-identities": _trace_checks,
    "integral-identity-suite": _identity_suite,
    "special-function-kernel": _kernel_checks,
    "hilbert-touchstone": _hilbert_touchstone,
}


def run_criterion(key: str) -> CriterionResult:
    return CRITERIA[key]()


def thread_budget() -> int:
    raw = os.environ.get("HANKEL_SPECTRA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_all(threads: int | None = None) -> list[CriterionResult]:
    """Run every criterion; results come back in the fixed CRITERIA order
    regardless of the worker count."""
    if threads is None:
        threads = thread_budget()
    keys = list(CRITERIA)
    if threads <= 1:
        return [CRITERIA[k]() for k in keys]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {k: pool.submit(CRITERIA[k]) for k in keys}
        return [futures[k].result() for k in keys]
