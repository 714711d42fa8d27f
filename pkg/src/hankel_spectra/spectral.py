"""Spectral data for the four families: orthogonality measures, the
multiplier function h realizing each operator as multiplication by h,
eigen/quadrature plumbing, and the numerical verifiers (functional
equation, properness integral, truncated-spectrum enclosures).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from . import operators as ops
from .operators import FamilySpec, H1Spec, H2Spec, H3Spec, H4Spec, JacobiParams
from .orthopoly import (
    eval_orthonormal_sequence,
    h1_point_params,
    h1_regime,
    recurrence_variable,
    spectral_jacobi,
)
from .special import binomial_general, log_gamma_abs_sq, log_pochhammer

__all__ = [
    "InconclusiveError",
    "ACMeasure",
    "DiscreteMeasure",
    "SpectralRep",
    "dual_hahn_masses",
    "spectral_rep",
    "sym_tridiag_eigen",
    "dense_sym_eigen",
    "gauss_quadrature",
    "default_sample_points",
    "FunctionalEquationBatch",
    "FunctionalEquationCheck",
    "functional_equation_batch",
    "functional_equation_residual",
    "PropernessCheck",
    "properness_integral",
    "SpectrumReport",
    "truncated_spectrum_report",
    "multiplier_cosh_integral",
    "measure_total_mass",
    "measure_moment",
]


class InconclusiveError(RuntimeError):
    """A tail bound or quadrature did not converge; the check is neither
    passed nor failed."""


@dataclass(frozen=True)
class ACMeasure:
    """Absolutely continuous probability measure given by a density."""

    density: Callable
    log_density: Callable
    support: tuple

    def __contains__(self, x):
        return self.support[0] <= x <= self.support[1]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many stored atoms; ``tail_mass`` bounds what was cut off."""

    locations: np.ndarray
    masses: np.ndarray
    tail_mass: float = 0.0


@dataclass(frozen=True)
class SpectralRep:
    """Measure, multiplier and orthonormal-polynomial evaluator of one family.

    ``multiplier`` takes the spectral variable x for AC measures and the
    atom index for discrete ones (``multiplier_kind`` says which).
    ``polys(x, n_max)`` evaluates the orthonormal basis functions.
    """

    spec: FamilySpec
    measure: ACMeasure | DiscreteMeasure
    multiplier: Callable
    log_multiplier: Callable
    multiplier_kind: str
    sup_multiplier: Optional[float]
    polys: Callable


def dual_hahn_masses(N: int, gamma: float, delta: float) -> np.ndarray:
    """Atom masses of the finite family's measure at x = 0..N.

    The raw formula has a removable 0/0 at x = 0 when gamma+delta = -1
    (the leading factors of numerator and denominator coincide there);
    the shared factor is cancelled before evaluation.
    """
    x = np.arange(N + 1, dtype=float)
    g, d = float(gamma), float(delta)
    # (1+x+g+d)_{N+1} = (1+x+g+d) * (2+x+g+d)_N, and 1+x+g+d equals the
    # numerator factor 2x+g+d+1 at x = 0.
    ratio = np.ones(N + 1)
    ratio[1:] = (2.0 * x[1:] + g + d + 1.0) / (1.0 + x[1:] + g + d)
    logs = (
        float(log_pochhammer(1.0 + d, N))
        + gammaln(N + 1.0)
        + log_pochhammer(1.0 + g, x)
        - np.array([float(log_pochhammer(2.0 + xi + g + d, N)) for xi in x])
        - log_pochhammer(1.0 + d, x)
        - gammaln(N - x + 1.0)
        - gammaln(x + 1.0)
    )
    return ratio * np.exp(logs)


def _h1_discrete_measure(spec: H1Spec) -> DiscreteMeasure:
    s, _, c = h1_point_params(spec)
    al = spec.alpha
    size = 128
    while True:
        j = np.arange(size, dtype=float)
        logm = al * math.log1p(-c) + log_pochhammer(al, j) - gammaln(j + 1.0) + j * math.log(c)
        if logm[-1] < -46.0 or size >= 200_000:
            break
        size *= 2
    masses = np.exp(logm)
    r = masses[-1] / masses[-2]
    tail = masses[-1] * r / (1.0 - r) if r < 1.0 else math.inf
    return DiscreteMeasure(locations=s * j, masses=masses, tail_mass=float(tail))


def spectral_rep(spec: FamilySpec) -> SpectralRep:
    """The (measure, multiplier, orthonormal basis) triple of a family.

    For h1, values of k within 1e-12 of 1/2 are treated as the boundary
    case exactly (the other two regimes degenerate there); a warning is
    attached since that is a silent parameter adjustment.
    """
    if spec.block != "full":
        base = replace(spec, block="full")
        full = spectral_rep(base)
        off = 0 if spec.block == "even" else 1
        dens, logdens = full.measure.density, full.measure.log_density
        half = ACMeasure(
            density=lambda x: 2.0 * dens(x),
            log_density=lambda x: math.log(2.0) + logdens(x),
            support=(0.0, math.inf),
        )

        def block_polys(x, n_max, _off=off, _base=base):
            seq = eval_orthonormal_sequence(_base, x, 2 * n_max + _off)
            return math.sqrt(2.0) * seq[_off::2]

        return SpectralRep(
            spec=spec,
            measure=half,
            multiplier=full.multiplier,
            log_multiplier=full.log_multiplier,
            multiplier_kind="x",
            sup_multiplier=full.sup_multiplier,
            polys=block_polys,
        )

    polys = partial(eval_orthonormal_sequence, spec)
    if isinstance(spec, H1Spec):
        k, al = spec.k, spec.alpha
        regime = h1_regime(spec)
        if regime == "ac_half_line":
            if spec.k != 0.5:
                warnings.warn(
                    f"k={spec.k!r} is within 1e-12 of 1/2; using the boundary-case formulas",
                    stacklevel=2,
                )
            log_h = lambda x: al * math.log(2.0) - 2.0 * np.asarray(x, dtype=float)
            log_rho = lambda x: (
                al * math.log(2.0)
                - gammaln(al)
                + (al - 1.0) * np.log(x)
                - 2.0 * np.asarray(x, dtype=float)
            )
            measure = ACMeasure(
                density=lambda x: np.exp(log_rho(x)),
                log_density=log_rho,
                support=(0.0, math.inf),
            )
            return SpectralRep(
                spec, measure, lambda x: np.exp(log_h(x)), log_h, "x", 2.0**al, polys
            )
        if regime == "ac_full_line":
            s = math.sqrt(4.0 * k * k - 1.0)
            tilt = 2.0 * math.asin(1.0 / (2.0 * k)) / s
            rate = 2.0 * math.acos(1.0 / (2.0 * k)) / s
            c0 = (
                0.5 * (al - 1.0) * math.log(4.0 * k * k - 1.0)
                - math.log(2.0 * math.pi)
                - al * math.log(k)
                - gammaln(al)
            )
            log_rho = lambda x: c0 - tilt * np.asarray(x, dtype=float) + log_gamma_abs_sq(
                al / 2.0, np.asarray(x, dtype=float) / s
            )
            log_h = lambda x: -al * math.log(k) + rate * np.asarray(x, dtype=float)
            measure = ACMeasure(
                density=lambda x: np.exp(log_rho(x)),
                log_density=log_rho,
                support=(-math.inf, math.inf),
            )
            return SpectralRep(
                spec, measure, lambda x: np.exp(log_h(x)), log_h, "x", None, polys
            )
        s, A, c = h1_point_params(spec)
        measure = _h1_discrete_measure(spec)
        log_h = lambda j: al * math.log(A) + np.asarray(j, dtype=float) * math.log(c)
        return SpectralRep(
            spec, measure, lambda j: np.exp(log_h(j)), log_h, "atom", A**al, polys
        )
    if isinstance(spec, H2Spec):
        lam = spec.lam
        c_h = (2.0 * lam - 1.0) * math.log(2.0) - gammaln(2.0 * lam)
        log_h = lambda x: c_h + log_gamma_abs_sq(lam, x)
        log_rho = lambda x: log_h(x) - math.log(math.pi)
        measure = ACMeasure(
            density=lambda x: np.exp(log_rho(x)),
            log_density=log_rho,
            support=(-math.inf, math.inf),
        )
        sup = math.exp(0.5 * math.log(math.pi) + gammaln(lam) - gammaln(lam + 0.5))
        return SpectralRep(spec, measure, lambda x: np.exp(log_h(x)), log_h, "x", sup, polys)
    if isinstance(spec, H3Spec):
        log_h = lambda x: 0.5 * math.log(2.0 * math.pi) - np.asarray(x, dtype=float) ** 2
        log_rho = lambda x: -np.asarray(x, dtype=float) ** 2 - 0.5 * math.log(math.pi)
        measure = ACMeasure(
            density=lambda x: np.exp(log_rho(x)),
            log_density=log_rho,
            support=(-math.inf, math.inf),
        )
        return SpectralRep(
            spec,
            measure,
            lambda x: np.exp(log_h(x)),
            log_h,
            "x",
            math.sqrt(2.0 * math.pi),
            polys,
        )
    N, g, d = spec.N, spec.gamma, spec.delta
    measure = DiscreteMeasure(
        locations=np.arange(N + 1, dtype=float), masses=dual_hahn_masses(N, g, d)
    )
    values = np.array(
        [binomial_general(2.0 * N + g + d + 1.0, N - x) for x in range(N + 1)]
    )

    def mult(j):
        return values[np.asarray(j, dtype=int)]

    log_mult = lambda j: np.log(mult(j))
    return SpectralRep(spec, measure, mult, log_mult, "atom", float(values.max()), polys)


def multiplier_at(rep: SpectralRep, x):
    """Multiplier evaluated at spectral points x (snapping to atom indices
    for discrete measures; x must then sit on the atom lattice)."""
    x = np.asarray(x, dtype=float)
    if rep.multiplier_kind == "x":
        return rep.multiplier(x)
    if isinstance(rep.spec, H4Spec):
        spacing = 1.0
    else:
        spacing, _, _ = h1_point_params(rep.spec)
    j = np.rint(x / spacing)
    if np.any(np.abs(x - j * spacing) > 1e-9 * np.maximum(1.0, np.abs(x))):
        raise ValueError("x does not lie on the discrete spectrum's atom lattice")
    return rep.multiplier(j)


# ---------------------------------------------------------------------------
# eigen / quadrature plumbing
# ---------------------------------------------------------------------------


def sym_tridiag_eigen(params: JacobiParams, size: int) -> np.ndarray:
    """Ascending eigenvalues of the size x size tridiagonal truncation."""
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    d = params.diagonal(size)
    e = params.offdiagonal(size - 1) if size > 1 else np.empty(0)
    return eigh_tridiagonal(d, e, eigvals_only=True)


def dense_sym_eigen(M: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a dense symmetric matrix."""
    M = np.asarray(M, dtype=float)
    scale = np.max(np.abs(M)) or 1.0
    if np.max(np.abs(M - M.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigvalsh(M)


def jacobi_eigvalsh_accurate(M: np.ndarray, sweeps: int = 60) -> np.ndarray:
    """Ascending eigenvalues by cyclic two-sided Jacobi rotations, carried
    out in the dtype of ``M`` (pass ``np.longdouble`` input for extended
    precision).

    For positive definite graded matrices this reaches high *relative*
    accuracy on the small eigenvalues, where a QR-type solver only
    guarantees absolute accuracy eps * lambda_max.  Intended for small
    dimensions (the finite family); cost is O(sweeps * n^3) in Python.
    """
    A = np.array(M, copy=True)
    n = A.shape[0]
    eps = np.finfo(A.dtype).eps
    one = A.dtype.type(1.0)
    for _ in range(sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 4.0 * eps * np.sqrt(abs(A[p, p] * A[q, q])):
                    continue
                rotated = True
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else one
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
        if not rotated:
            return np.sort(np.diagonal(A).astype(float))
    raise InconclusiveError(f"Jacobi rotations did not converge in {sweeps} sweeps")


def gauss_quadrature(params: JacobiParams, n_points: int):
    """Gauss rule of the measure attached to tridiagonal coefficients:
    nodes are eigenvalues of the truncation, weights the squared first
    eigenvector components (total mass normalized to 1)."""
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    d = params.diagonal(n_points)
    e = params.offdiagonal(n_points - 1) if n_points > 1 else np.empty(0)
    nodes, vecs = eigh_tridiagonal(d, e)
    return nodes, vecs[0, :] ** 2


def default_sample_points(spec: FamilySpec, count: int = 10) -> np.ndarray:
    """Sample points in the bulk of the family's spectral measure."""
    if isinstance(spec, H4Spec):
        return np.arange(min(count, spec.N + 1), dtype=float)
    if isinstance(spec, H1Spec):
        regime = h1_regime(spec)
        if regime == "ac_half_line":
            return np.linspace(0.05, spec.alpha / 2.0 + 3.0, count)
        if regime == "ac_full_line":
            s = math.sqrt(4.0 * spec.k**2 - 1.0)
            return s * np.linspace(-2.2, 2.8, count)
        s, _, _ = h1_point_params(spec)
        return s * np.arange(count, dtype=float)
    if isinstance(spec, H2Spec):
        return np.linspace(-3.0, 3.4, count)
    return np.linspace(-2.8, 2.9, count)


# ---------------------------------------------------------------------------
# functional equation  sum_n H[m,n] P_n(x) = h(x) P_m(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalEquationBatch:
    residuals: np.ndarray  # (m_max+1, n_x)
    tail_estimate: float
    series: np.ndarray  # partial sums, same shape
    reference: np.ndarray  # h(x) P_m(x)


@dataclass(frozen=True)
class FunctionalEquationCheck:
    residual: float
    tail_estimate: float
    lhs: float
    rhs: float


def functional_equation_batch(
    spec: FamilySpec, m_max: int, xs, trunc: int
) -> FunctionalEquationBatch:
    """Residuals |sum_{n<=trunc} H[m,n] P_n(x) - h(x) P_m(x)| (relative to
    max(|h P_m|, 1)) for all m <= m_max and all supplied x, in one forward
    pass of the recurrence.

    The tail estimate is geometric for the families with geometric column
    decay and a power-law envelope bound for h2, whose terms only decay
    like n^(-lam-1).
    """
    if spec.block != "full":
        raise ValueError("the functional equation is stated for the full families")
    if isinstance(spec, H4Spec):
        trunc = spec.N
        m_max = min(m_max, spec.N)
    if trunc < m_max:
        raise ValueError("trunc must be at least m_max")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    rep = spectral_rep(spec)

    if isinstance(spec, H4Spec):
        # heavy sign cancellation against an O(1) result: assemble the
        # finite sums in extended precision from exact products
        ld = np.longdouble
        N, g, d = spec.N, ld(spec.gamma), ld(spec.delta)
        coef = ops.h4_extended_matrix(spec, N + 1)[: m_max + 1, :]
        j = np.arange(trunc + 1, dtype=ld)
        b = j * (d + N + 1.0 - j) + (N - j) * (j + g + 1.0)
        ji = np.arange(trunc, dtype=ld)
        a = -np.sqrt((ji + 1.0) * (ji + 1.0 + g) * (N - ji) * (N - ji + d))
        xl = xs.astype(ld)
        v = xl * (xl + g + d + 1.0)
    else:
        sw, lw = ops.weight_log_seq(spec, trunc)
        sh, lh = ops.symbol_log_seq(spec, trunc + m_max)
        m_idx = np.arange(m_max + 1)
        coef = (
            sw[m_idx][:, None]
            * sw[None, :]
            * sh[m_idx[:, None] + np.arange(trunc + 1)[None, :]]
            * np.exp(lw[m_idx][:, None] + lw[None, :] + lh[m_idx[:, None] + np.arange(trunc + 1)[None, :]])
        )
        params = spectral_jacobi(spec)
        b = params.diagonal(trunc + 1)
        a = params.offdiagonal(trunc) if trunc > 0 else np.empty(0)
        v = recurrence_variable(spec, xs)

    S = np.zeros((m_max + 1, xs.size), dtype=v.dtype)
    Pm = np.zeros((m_max + 1, xs.size), dtype=v.dtype)
    term_mag = np.zeros(trunc + 1)
    prev = np.zeros_like(v)
    cur = np.ones_like(v)
    for n in range(trunc + 1):
        if n <= m_max:
            Pm[n] = cur
        cn = coef[:, n]
        S += cn[:, None] * cur[None, :]
        term_mag[n] = float(np.max(np.abs(cn)) * np.max(np.abs(cur)))
        if n < trunc:
            nxt = ((v - b[n]) * cur - (a[n - 1] * prev if n > 0 else 0.0)) / a[n]
            prev, cur = cur, nxt

    ref = multiplier_at(rep, xs)[None, :] * Pm
    residuals = (np.abs(S - ref) / np.maximum(np.abs(ref), 1.0)).astype(float)
    tail = _series_tail_estimate(spec, term_mag)
    return FunctionalEquationBatch(residuals, tail, S.astype(float), ref.astype(float))


def _series_tail_estimate(spec: FamilySpec, term_mag: np.ndarray) -> float:
    if isinstance(spec, H4Spec):
        return 0.0
    n_idx = np.nonzero(term_mag)[0]
    if n_idx.size < 16:
        return 0.0
    mags = term_mag[n_idx]
    if isinstance(spec, H2Spec):
        # |term_n| <= C n^(-lam-1): bound C on the last decade, integrate
        lam = spec.lam
        window = n_idx >= 0.9 * n_idx[-1]
        c_pow = np.max(mags[window] * n_idx[window].astype(float) ** (lam + 1.0))
        return float(c_pow * n_idx[-1] ** (-lam) / lam)
    span = min(24, n_idx.size - 1)
    r = (mags[-1] / mags[-1 - span]) ** (1.0 / span)
    if not np.isfinite(r) or r >= 0.999:
        raise InconclusiveError(
            "functional-equation tail is not decaying; increase trunc or move x into the bulk"
        )
    return float(mags[-1] * r / (1.0 - r))


def functional_equation_residual(
    spec: FamilySpec, m: int, x: float, trunc: int
) -> FunctionalEquationCheck:
    """Single-entry wrapper around :func:`functional_equation_batch`."""
    batch = functional_equation_batch(spec, m, [x], trunc)
    return FunctionalEquationCheck(
        residual=float(batch.residuals[m, 0]),
        tail_estimate=batch.tail_estimate,
        lhs=float(batch.series[m, 0]),
        rhs=float(batch.reference[m, 0]),
    )


# ---------------------------------------------------------------------------
# properness integral  int e^(eps|x|) (h+1)^2 dmu
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropernessCheck:
    flag: str  # 'finite' | 'divergent' | 'inconclusive'
    value: Optional[float]
    tail_bound: float

    @property
    def finite(self) -> bool:
        return self.flag == "finite"


def properness_integral(spec: FamilySpec, eps: float) -> PropernessCheck:
    """Adaptive evaluation of the determinacy integral with an explicit
    tail bound, or a divergence/inconclusive flag from the log-envelope
    at the sampled frontier."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    rep = spectral_rep(spec)
    if isinstance(rep.measure, DiscreteMeasure):
        loc, masses = rep.measure.locations, rep.measure.masses
        j = np.arange(loc.size)
        logt = (
            eps * np.abs(loc)
            + 2.0 * np.logaddexp(0.0, rep.log_multiplier(j))
            + np.log(masses)
        )
        if loc.size <= 2:
            return PropernessCheck("finite", float(np.sum(np.exp(logt))), 0.0)
        deltas = np.diff(logt[-12:])
        slope = float(np.mean(deltas))
        if slope >= -1e-8:
            flag = "divergent" if slope > 1e-8 else "inconclusive"
            return PropernessCheck(flag, None, math.inf)
        tail = math.exp(logt[-1] + slope) / -math.expm1(slope)
        return PropernessCheck("finite", float(np.sum(np.exp(logt))) + tail, float(tail))

    log_h = rep.log_multiplier
    log_rho = rep.measure.log_density

    def logf(x):
        return (
            eps * np.abs(x)
            + 2.0 * np.logaddexp(0.0, log_h(np.asarray(x, dtype=float)))
            + log_rho(np.asarray(x, dtype=float))
        )

    lo, hi = rep.measure.support
    sides = []
    if hi == math.inf:
        sides.append(+1.0)
    if lo == -math.inf:
        sides.append(-1.0)
    peak = float(logf(0.5 if lo == 0.0 else 0.0))
    radii, values = [], []
    cut = {}
    for sgn in sides:
        grew = 0
        prev = peak
        r = 1.0
        for _ in range(26):
            g = float(logf(sgn * r))
            radii.append(sgn * r)
            values.append(g)
            if g > prev + 1e-9:
                grew += 1
                if grew >= 3 and g > peak:
                    return PropernessCheck("divergent", None, math.inf)
            else:
                grew = 0
            if g < peak - 70.0 and g < prev:
                rate = max((prev - g) / (r / 2.0), 1e-3)
                cut[sgn] = (r, math.exp(g) / rate)
                break
            prev = g
            r *= 2.0
        else:
            return PropernessCheck("inconclusive", None, math.inf)
    a = lo if lo != -math.inf else -cut[-1.0][0]
    b = hi if hi != math.inf else cut[+1.0][0]
    f = lambda x: float(np.exp(logf(x)))
    pts = [0.0] if a < 0.0 < b else None
    val, _ = quad(f, a, b, points=pts, limit=500)
    tail = sum(t for _, t in cut.values())
    return PropernessCheck("finite", float(val) + tail, float(tail))


# ---------------------------------------------------------------------------
# truncated spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    spec: FamilySpec
    sizes: list
    eigenvalues: list
    lambda_max: list
    sup_multiplier: Optional[float]
    enclosure_ok: bool
    lambda_max_monotone: bool

    def to_dict(self) -> dict:
        return {
            "spec": {"family": ops.family_tag(self.spec), "params": ops.spec_params(self.spec)},
            "sizes": [int(s) for s in self.sizes],
            "eigenvalues": {str(int(s)): [float(v) for v in ev] for s, ev in zip(self.sizes, self.eigenvalues)},
            "enclosure_ok": bool(self.enclosure_ok),
            "lambda_max_monotone": bool(self.lambda_max_monotone),
        }


def truncated_spectrum_report(
    spec: FamilySpec, sizes, strip_signs: bool = False, slack: float = 1e-9
) -> SpectrumReport:
    """Eigenvalues of nested truncations with enclosure diagnostics.

    Every eigenvalue must lie in [0, sup h] within ``slack`` (only the
    lower bound is checked for the unbounded regime), and the largest
    eigenvalue must be nondecreasing in the truncation size.
    """
    sizes = sorted(int(s) for s in sizes)
    rep = spectral_rep(spec)
    evs, lmax = [], []
    ok = True
    for s in sizes:
        ev = dense_sym_eigen(ops.materialize(spec, s, strip_signs=strip_signs))
        evs.append(ev)
        lmax.append(float(ev[-1]))
        if ev[0] < -slack:
            ok = False
        if rep.sup_multiplier is not None and ev[-1] > rep.sup_multiplier + slack:
            ok = False
    monotone = all(b >= a - 1e-10 for a, b in zip(lmax, lmax[1:]))
    return SpectrumReport(spec, sizes, evs, lmax, rep.sup_multiplier, ok, monotone)


# ---------------------------------------------------------------------------
# independent integral form of the h2 multiplier, and measure utilities
# ---------------------------------------------------------------------------


def multiplier_cosh_integral(lam: float, x: float) -> float:
    """2 * int_0^inf cos(2xt) / cosh(t)^(2 lam) dt via an oscillatory rule.

    Independent route to the h2 multiplier, used to cross-check the
    |Gamma|^2 closed form.
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    T = max(40.0, 60.0 / lam)

    def f(t):
        # cosh(t)^(-2lam) without overflowing cosh
        return math.exp(-2.0 * lam * (abs(t) + math.log1p(math.exp(-2.0 * abs(t))) - math.log(2.0)))

    if x == 0.0:
        val, _ = quad(f, 0.0, T, limit=500)
    else:
        val, _ = quad(f, 0.0, T, weight="cos", wvar=2.0 * x, limit=500)
    return 2.0 * val


def _ac_radius(log_rho, support, extra=None):
    """Truncation radius where the log-density (plus optional envelope)
    has dropped 70 nats below its peak."""
    g = log_rho if extra is None else (lambda x: log_rho(x) + extra(x))
    x0 = 0.5 if support[0] == 0.0 else 0.0
    peak = float(g(x0))
    r = 1.0
    for _ in range(40):
        vals = [float(g(r))] + ([float(g(-r))] if support[0] == -math.inf else [])
        peak = max(peak, *vals)
        if max(vals) < peak - 70.0:
            return r
        r *= 2.0
    return r


def measure_total_mass(rep: SpectralRep) -> float:
    """Numerical total mass of the measure (should be 1)."""
    if isinstance(rep.measure, DiscreteMeasure):
        return float(np.sum(rep.measure.masses))
    lo, hi = rep.measure.support
    r = _ac_radius(rep.measure.log_density, rep.measure.support)
    a, b = max(lo, -r), min(hi, r)
    f = lambda x: float(rep.measure.density(x))
    val, _ = quad(f, a, b, points=([0.0] if a < 0 < b else None), limit=500)
    return float(val)


def measure_moment(rep: SpectralRep, j: int) -> float:
    """j-th moment of the measure by adaptive quadrature of the density
    (independent of the recurrence/eigenvalue route)."""
    if isinstance(rep.measure, DiscreteMeasure):
        return float(np.sum(rep.measure.masses * rep.measure.locations**j))
    lo, hi = rep.measure.support
    grow = lambda x: j * np.log(np.maximum(np.abs(x), 1e-12))
    r = _ac_radius(rep.measure.log_density, rep.measure.support, extra=grow)
    a, b = max(lo, -r), min(hi, r)
    f = lambda x: float(x**j * rep.measure.density(x))
    val, _ = quad(f, a, b, points=([0.0] if a < 0 < b else None), limit=500)
    return float(val)
