"""Evaluation of the five polynomial families behind the spectral
representations: by defining hypergeometric series (the cross-check
oracle) and by three-term recurrence in the orthonormal normalization
(the production path).

``eval_orthonormal_sequence`` works in the spectral variable of each
family's representation; the affine change of variable between that
variable and the commuting tridiagonal matrix (sign flips and diagonal
shifts) is owned by :func:`spectral_jacobi`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy.special import gammaln

from .operators import (
    FamilySpec,
    H1Spec,
    H2Spec,
    H3Spec,
    H4Spec,
    JacobiParams,
)
from .special import hyp_terminating, log_pochhammer

__all__ = [
    "MeixnerPollaczek",
    "Laguerre",
    "Meixner",
    "Hermite",
    "DualHahn",
    "PolyFamily",
    "eval_classical",
    "h1_regime",
    "h1_point_params",
    "classical_family",
    "orthonormal_from_classical",
    "spectral_jacobi",
    "recurrence_variable",
    "eval_orthonormal_sequence",
    "orthonormality_check",
]


@dataclass(frozen=True)
class MeixnerPollaczek:
    lam: float
    phi: float

    def __post_init__(self):
        if self.lam <= 0 or not 0.0 < self.phi < math.pi:
            raise ValueError(f"need lam > 0 and phi in (0,pi), got {self.lam}, {self.phi}")


@dataclass(frozen=True)
class Laguerre:
    a: float

    def __post_init__(self):
        if self.a <= -1:
            raise ValueError(f"need a > -1, got {self.a}")


@dataclass(frozen=True)
class Meixner:
    beta: float
    c: float

    def __post_init__(self):
        if self.beta <= 0 or not 0.0 < self.c < 1.0:
            raise ValueError(f"need beta > 0 and c in (0,1), got {self.beta}, {self.c}")


@dataclass(frozen=True)
class Hermite:
    pass


@dataclass(frozen=True)
class DualHahn:
    gamma: float
    delta: float
    N: int

    def __post_init__(self):
        if self.gamma <= -1 or self.delta <= -1 or self.N < 0:
            raise ValueError("need gamma, delta > -1 and N >= 0")


PolyFamily = MeixnerPollaczek | Laguerre | Meixner | Hermite | DualHahn

# beyond this degree the defining series cancel through factors up to ~3^n,
# so the oracle switches to arbitrary precision with degree-scaled digits
_SERIES_FLOAT_DEGREE = 12


def _hyp_series(numerator, denominator, z, dps: int):
    """Terminating sum of a hypergeometric series at ``dps`` digits."""
    with mp.workdps(dps):
        num = [mp.mpc(p) for p in numerator]
        den = [mp.mpc(q) for q in denominator]
        zz = mp.mpc(z)
        n_stop = min(
            int(-p.real) for p in num if p.imag == 0 and p.real <= 0 and p.real == int(p.real)
        )
        term = total = mp.mpc(1)
        for j in range(n_stop):
            factor = zz / (j + 1)
            for p in num:
                factor *= p + j
            for q in den:
                factor /= q + j
            term *= factor
            if term == 0:
                break
            total += term
        return complex(total)


def eval_classical(family: PolyFamily, n: int, x: float) -> float:
    """Value of the classical polynomial from its defining series.

    This is the slow oracle path (the recurrence is the production one);
    dual Hahn takes the integer lattice point x, the quadratic eigenvalue
    map being applied internally.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    dps = 25 + n

    def series(numerator, denominator, z):
        if n <= _SERIES_FLOAT_DEGREE:
            res = hyp_terminating(numerator, denominator, z)
            if not res.reduced_precision:
                return res.value
        return _hyp_series(numerator, denominator, z, dps)

    if isinstance(family, MeixnerPollaczek):
        lam, phi = family.lam, family.phi
        pref = math.exp(float(log_pochhammer(2.0 * lam, n)) - gammaln(n + 1.0))
        val = series([-float(n), lam + 1j * x], [2.0 * lam], 1.0 - np.exp(-2j * phi))
        return float(np.real(pref * np.exp(1j * n * phi) * val))
    if isinstance(family, Laguerre):
        pref = math.exp(float(log_pochhammer(family.a + 1.0, n)) - gammaln(n + 1.0))
        return pref * float(np.real(series([-float(n)], [family.a + 1.0], x)))
    if isinstance(family, Meixner):
        return float(
            np.real(series([-float(n), -float(x)], [family.beta], 1.0 - 1.0 / family.c))
        )
    if isinstance(family, Hermite):
        if x == 0.0:
            if n % 2 == 1:
                return 0.0
            half = n // 2
            return (-1.0) ** half * math.exp(gammaln(n + 1.0) - gammaln(half + 1.0))
        val = float(np.real(series([-n / 2.0, -(n - 1) / 2.0], [], -1.0 / (x * x))))
        return (2.0 * x) ** n * val
    if n > family.N:
        raise IndexError(f"dual Hahn degree {n} exceeds N={family.N}")
    g, d = family.gamma, family.delta
    return float(
        np.real(
            series([-float(n), -float(x), x + g + d + 1.0], [g + 1.0, -float(family.N)], 1.0)
        )
    )


# ---------------------------------------------------------------------------
# family dispatch
# ---------------------------------------------------------------------------

_BOUNDARY_TOL = 1e-12


def h1_regime(spec: H1Spec) -> str:
    """Spectral regime of h1: 'ac_full_line' (k > 1/2), 'ac_half_line'
    (k = 1/2 within 1e-12), or 'discrete' (k < 1/2)."""
    if abs(spec.k - 0.5) <= _BOUNDARY_TOL:
        return "ac_half_line"
    return "ac_full_line" if spec.k > 0.5 else "discrete"


def h1_point_params(spec: H1Spec):
    """(s, A, c) for the discrete regime: atom spacing s = sqrt(1-4k^2),
    top eigenvalue A^alpha, eigenvalue ratio c."""
    k = spec.k
    s = math.sqrt(1.0 - 4.0 * k * k)
    A = (1.0 - s) / (2.0 * k * k)
    c = (1.0 - 2.0 * k * k - s) / (2.0 * k * k)
    return s, A, c


def classical_family(spec: FamilySpec):
    """(classical family, map from spectral variable to classical argument)."""
    if isinstance(spec, H1Spec):
        regime = h1_regime(spec)
        if regime == "ac_full_line":
            s = math.sqrt(4.0 * spec.k**2 - 1.0)
            return (
                MeixnerPollaczek(spec.alpha / 2.0, math.acos(1.0 / (2.0 * spec.k))),
                lambda x: x / s,
            )
        if regime == "ac_half_line":
            return Laguerre(spec.alpha - 1.0), lambda x: 2.0 * x
        s, _, c = h1_point_params(spec)
        return Meixner(spec.alpha, c), lambda x: x / s
    if isinstance(spec, H2Spec):
        return MeixnerPollaczek(spec.lam, math.pi / 2.0), lambda x: x
    if isinstance(spec, H3Spec):
        return Hermite(), lambda x: x
    return DualHahn(spec.gamma, spec.delta, spec.N), lambda x: x


def _log_norm(spec: FamilySpec, n: int) -> float:
    """ln of the orthonormalization factor multiplying the classical value."""
    if isinstance(spec, H1Spec):
        al = spec.alpha
        base = 0.5 * (gammaln(al) + gammaln(n + 1.0) - gammaln(n + al))
        if h1_regime(spec) != "discrete":
            return base
        _, _, c = h1_point_params(spec)
        return 0.5 * n * math.log(c) - base
    if isinstance(spec, H2Spec):
        lam = spec.lam
        return 0.5 * (gammaln(2.0 * lam) + gammaln(n + 1.0) - gammaln(n + 2.0 * lam))
    if isinstance(spec, H3Spec):
        return -0.5 * (n * math.log(2.0) + gammaln(n + 1.0))
    N, g, d = spec.N, spec.gamma, spec.delta
    return 0.5 * (
        gammaln(N + 1.0)
        + float(log_pochhammer(1.0 + g, n))
        + float(log_pochhammer(1.0 + d, N - n))
        - gammaln(n + 1.0)
        - gammaln(N - n + 1.0)
        - float(log_pochhammer(1.0 + d, N))
    )


def orthonormal_from_classical(spec: FamilySpec, n: int, x: float) -> float:
    """Orthonormal value built from the classical series (oracle route)."""
    family, arg = classical_family(spec)
    return math.exp(_log_norm(spec, n)) * eval_classical(family, n, arg(x))


def spectral_jacobi(spec: FamilySpec) -> JacobiParams:
    """Tridiagonal coefficients of the three-term recurrence satisfied by
    the orthonormal family in its spectral variable.

    These differ from :func:`~hankel_spectra.operators.jacobi_params` by
    the affine change of variable of each representation (for h1: overall
    sign and a shift of the diagonal by alpha-dependent constants)."""
    if spec.block != "full":
        raise ValueError("spectral recurrences are defined for the full families")
    if isinstance(spec, H1Spec):
        k, al = spec.k, spec.alpha
        regime = h1_regime(spec)
        if regime == "ac_full_line":
            return JacobiParams(
                b=lambda n: -np.asarray(n, dtype=float) - al / 2.0,
                a=lambda n: k * np.sqrt((n + 1.0) * (n + al)),
            )
        if regime == "ac_half_line":
            return JacobiParams(
                b=lambda n: np.asarray(n, dtype=float) + al / 2.0,
                a=lambda n: -0.5 * np.sqrt((n + 1.0) * (n + al)),
            )
        _, _, c = h1_point_params(spec)
        shift = c * al / (1.0 + c)
        return JacobiParams(
            b=lambda n: np.asarray(n, dtype=float) + shift,
            a=lambda n: -k * np.sqrt((n + 1.0) * (n + al)),
        )
    from .operators import jacobi_params

    return jacobi_params(spec)


def recurrence_variable(spec: FamilySpec, x):
    """Eigenvalue variable fed to the recurrence: x itself, except the
    finite family where the spectral points are x(x+gamma+delta+1)."""
    x = np.asarray(x, dtype=float)
    if isinstance(spec, H4Spec):
        return x * (x + spec.gamma + spec.delta + 1.0)
    return x


def eval_orthonormal_sequence(spec: FamilySpec, x, n_max: int):
    """[P0(x), ..., P_{n_max}(x)] by forward recurrence.

    ``x`` may be a scalar or 1-d array; the result has shape
    (n_max+1,) or (n_max+1, len(x)).
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if isinstance(spec, H4Spec) and n_max > spec.N:
        raise ValueError(f"n_max={n_max} exceeds N={spec.N}")
    scalar = np.ndim(x) == 0
    v = np.atleast_1d(recurrence_variable(spec, x))
    params = spectral_jacobi(spec)
    b = params.diagonal(n_max + 1)
    a = params.offdiagonal(n_max) if n_max > 0 else np.empty(0)
    out = np.empty((n_max + 1, v.size))
    out[0] = 1.0
    prev = np.zeros_like(v)
    cur = np.ones_like(v)
    for k in range(n_max):
        nxt = ((v - b[k]) * cur - (a[k - 1] * prev if k > 0 else 0.0)) / a[k]
        prev, cur = cur, nxt
        out[k + 1] = cur
    return out[:, 0] if scalar else out


def orthonormality_check(spec: FamilySpec, n_max: int) -> float:
    """max |<P_m, P_n> - delta_mn| for m, n <= n_max, integrating against
    the family's orthogonality measure (exact atom sums for the discrete
    families, a Gauss rule of exact polynomial degree otherwise)."""
    from . import spectral  # deferred: spectral builds on this module

    if spec.block != "full":
        # sub-block functions are the even/odd halves of the full family;
        # their pairwise integrals against the full measure already give
        # the identity, so check those index maps directly.
        base = type(spec)(**{**spec.__dict__, "block": "full"})
        off = 0 if spec.block == "even" else 1
        rep = spectral.spectral_rep(base)
        nodes, w = spectral.gauss_quadrature(spectral_jacobi(base), 2 * n_max + 1 + off)
        P = eval_orthonormal_sequence(base, nodes, 2 * n_max + off)[off::2]
        gram = (P * w) @ P.T
        return float(np.max(np.abs(gram - np.eye(n_max + 1))))
    if isinstance(spec, H4Spec) and n_max > spec.N:
        raise ValueError(f"n_max={n_max} exceeds N={spec.N}")
    rep = spectral.spectral_rep(spec)
    if isinstance(rep.measure, spectral.DiscreteMeasure):
        P = eval_orthonormal_sequence(spec, rep.measure.locations, n_max)
        gram = (P * rep.measure.masses) @ P.T
    else:
        nodes, w = spectral.gauss_quadrature(spectral_jacobi(spec), n_max + 1)
        P = eval_orthonormal_sequence(spec, nodes, n_max)
        gram = (P * w) @ P.T
    return float(np.max(np.abs(gram - np.eye(n_max + 1))))
