"""Special-function kernel: log-Gamma, |Gamma(a+iy)|^2, Pochhammer products,
generalized binomials, and terminating hypergeometric sums.

Everything built from Gamma-function ratios is kept in sign/log-magnitude
form (:class:`LogReal`) until the final materialization step, so that
quantities like Gamma(m+n+alpha) never overflow for large indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "LogReal",
    "ln_gamma",
    "gamma_abs_sq",
    "log_gamma_abs_sq",
    "pochhammer",
    "log_pochhammer",
    "binomial_general",
    "hyp_terminating",
    "HypergeometricSum",
]


@dataclass(frozen=True)
class LogReal:
    """A real number stored as (sign, ln|value|); sign 0 encodes zero."""

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.log_abs == -math.inf):
            raise ValueError("sign=0 exactly when log_abs=-inf")

    @classmethod
    def from_float(cls, x: float) -> "LogReal":
        x = float(x)
        if x == 0.0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def to_float(self) -> float:
        return 0.0 if self.sign == 0 else self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "LogReal") -> "LogReal":
        s = self.sign * other.sign
        if s == 0:
            return LogReal(0, -math.inf)
        return LogReal(s, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by LogReal zero")
        if self.sign == 0:
            return self
        return LogReal(self.sign * other.sign, self.log_abs - other.log_abs)

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log_abs)


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Negative arguments are deliberately rejected; signed Gamma ratios go
    through :func:`pochhammer` / :func:`binomial_general` instead.
    """
    if x <= 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return float(sp.gammaln(x))


def log_gamma_abs_sq(a, y):
    """ln |Gamma(a+iy)|^2 = 2 Re ln Gamma(a+i|y|), vectorized in y."""
    if np.any(np.asarray(a) <= 0):
        raise ValueError(f"gamma_abs_sq requires a > 0, got a={a}")
    # |y| keeps the result exactly even in y
    z = np.asarray(a, dtype=float) + 1j * np.abs(np.asarray(y, dtype=float))
    out = 2.0 * np.real(sp.loggamma(z))
    return out if out.ndim else float(out)


def gamma_abs_sq(a, y):
    """|Gamma(a+iy)|^2 for a > 0, vectorized in y."""
    out = np.exp(log_gamma_abs_sq(a, y))
    return out if np.ndim(out) else float(out)


def pochhammer(a: float, n: int) -> LogReal:
    """Rising factorial a(a+1)...(a+n-1) with exact product semantics.

    Any vanishing factor gives the exact zero (sign 0); negative factors
    are tracked in the sign channel.
    """
    if n < 0:
        raise ValueError(f"pochhammer requires n >= 0, got {n}")
    sign = 1
    log_abs = 0.0
    for j in range(n):
        f = a + j
        if f == 0.0:
            return LogReal(0, -math.inf)
        if f < 0:
            sign = -sign
        log_abs += math.log(abs(f))
    return LogReal(sign, log_abs)


def log_pochhammer(a: float, n) -> np.ndarray:
    """ln (a)_n for a > 0 via Gamma ratios, vectorized in n."""
    if a <= 0:
        raise ValueError(f"log_pochhammer requires a > 0, got {a}")
    return sp.gammaln(a + np.asarray(n, dtype=float)) - sp.gammaln(a)


def binomial_general(z: float, k: int) -> float:
    """Generalized binomial Gamma(z+1) / (Gamma(k+1) Gamma(z-k+1)).

    Valid whenever z - k + 1 > 0 (covers every integer z >= k as well);
    evaluated in log domain as (z-k+1)_k / k!.
    """
    if k < 0:
        raise ValueError(f"binomial_general requires k >= 0, got {k}")
    if z - k + 1 <= 0:
        raise ValueError(f"binomial_general requires z - k + 1 > 0, got z={z}, k={k}")
    p = pochhammer(z - k + 1, k)
    return p.sign * math.exp(p.log_abs - sp.gammaln(k + 1.0))


@dataclass(frozen=True)
class HypergeometricSum:
    """Value of a terminating hypergeometric sum plus precision metadata.

    ``reduced_precision`` is set when the result is small compared to the
    largest partial term (heavy cancellation), meaning fewer correct digits
    than the usual contract.
    """

    value: complex
    max_abs_term: float
    reduced_precision: bool

    def __float__(self) -> float:
        return float(np.real(self.value))


def _terminating_index(numerator) -> int:
    n_stop = None
    for v in numerator:
        if np.iscomplexobj(v) and np.imag(v) != 0:
            continue
        r = float(np.real(v))
        if r <= 0 and r == round(r):
            m = int(-r)
            n_stop = m if n_stop is None else min(n_stop, m)
    if n_stop is None:
        raise ValueError("no terminating (nonpositive integer) numerator parameter")
    return n_stop


def hyp_terminating(numerator, denominator, z) -> HypergeometricSum:
    """Terminating pFq as a finite sum, by forward term recursion.

    One numerator parameter must be a nonpositive integer -n; the sum is
    sum_{j=0}^{n} prod(num)_j / prod(den)_j * z^j / j!.  A denominator
    pole is only an error if it is reached before the series terminates.
    """
    n_stop = _terminating_index(numerator)
    for d in denominator:
        if np.imag(d) == 0:
            r = float(np.real(d))
            if r <= 0 and r == round(r) and int(-r) < n_stop:
                raise ValueError(
                    f"denominator parameter {d} hits a pole at term {int(-r) + 1} "
                    f"before termination at {n_stop}"
                )
    term = 1.0 + 0.0j if any(np.iscomplexobj(v) for v in (*numerator, *denominator, z)) else 1.0
    total = term
    max_abs = abs(term)
    for j in range(n_stop):
        num = term * z / (j + 1)
        for p in numerator:
            num = num * (p + j)
        for q in denominator:
            num = num / (q + j)
        term = num
        if term == 0:
            break
        total += term
        max_abs = max(max_abs, abs(term))
    reduced = abs(total) < 1e-6 * max_abs
    return HypergeometricSum(total, max_abs, reduced)
