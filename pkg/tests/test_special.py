import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankel_spectra.special import (
    HypergeometricSum,
    LogReal,
    binomial_general,
    gamma_abs_sq,
    hyp_terminating,
    ln_gamma,
    pochhammer,
)


def test_ln_gamma_values():
    assert ln_gamma(1.0) == 0.0
    np.testing.assert_allclose(ln_gamma(0.5), math.log(math.sqrt(math.pi)), rtol=1e-14)
    np.testing.assert_allclose(ln_gamma(10.0), math.log(362880.0), rtol=1e-14)


def test_ln_gamma_domain():
    with pytest.raises(ValueError):
        ln_gamma(0.0)
    with pytest.raises(ValueError):
        ln_gamma(-2.5)


def test_ln_gamma_accuracy_range():
    # spot absolute accuracy across the contract range via the functional
    # equation ln G(x+1) = ln G(x) + ln x
    for x in (1e-3, 0.02, 0.7, 3.3, 41.0, 9876.5, 1e6 - 1):
        err = abs(ln_gamma(x + 1.0) - (ln_gamma(x) + math.log(x)))
        assert err <= 1e-13 * max(1.0, abs(ln_gamma(x + 1.0)))


def test_gamma_abs_sq_half_line():
    # |G(1/2 + ix)|^2 = pi / cosh(pi x)
    for x in (0.0, 0.3, 1.0, 2.5, 10.0):
        np.testing.assert_allclose(
            gamma_abs_sq(0.5, x), math.pi / math.cosh(math.pi * x), rtol=1e-12
        )


def test_gamma_abs_sq_values():
    assert gamma_abs_sq(1.0, 0.0) == pytest.approx(1.0, rel=1e-13)
    # oracle: |G(1+iy)|^2 = pi y / sinh(pi y), then one recurrence step
    oracle = (1.0 + 1.0) * math.pi / math.sinh(math.pi)
    np.testing.assert_allclose(gamma_abs_sq(2.0, 1.0), oracle, rtol=1e-12)


def test_gamma_abs_sq_even_exact():
    for a in (0.5, 1.7, 42.0):
        for y in (0.1, 3.0, 55.0):
            assert gamma_abs_sq(a, y) == gamma_abs_sq(a, -y)


def test_gamma_abs_sq_recurrence_consistency():
    # |G(a+1+iy)|^2 = (a^2 + y^2) |G(a+iy)|^2
    for a in (0.3, 1.0, 7.5, 60.0):
        for y in (0.0, 0.9, 14.0, 190.0):
            lhs = gamma_abs_sq(a + 1.0, y)
            rhs = (a * a + y * y) * gamma_abs_sq(a, y)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-11)


def test_gamma_abs_sq_domain():
    with pytest.raises(ValueError):
        gamma_abs_sq(0.0, 1.0)


def test_gamma_abs_sq_asymptotic():
    for a in (0.5, 1.0, 2.5):
        for y in (50.0, 100.0, 200.0):
            ratio = gamma_abs_sq(a, y) / (
                2.0 * math.pi * y ** (2.0 * a - 1.0) * math.exp(-math.pi * y)
            )
            assert 0.99 <= ratio <= 1.01


def test_pochhammer_values():
    assert pochhammer(3.7, 0).to_float() == 1.0
    assert pochhammer(1.0, 5).to_float() == pytest.approx(120.0, rel=1e-14)
    z = pochhammer(-3.0, 5)
    assert z.sign == 0 and z.to_float() == 0.0
    # sign bookkeeping: (-2.5)_2 = (-2.5)(-1.5) > 0, (-2.5)_3 < 0
    assert pochhammer(-2.5, 2).to_float() == pytest.approx(3.75)
    assert pochhammer(-2.5, 3).to_float() == pytest.approx(-1.875)


def test_pochhammer_gamma_consistency():
    for a in (0.1, 1.0, 4.2, 33.0):
        for n in (0, 1, 7, 40, 200):
            p = pochhammer(a, n)
            log_ratio = ln_gamma(a + n) - ln_gamma(a)
            assert p.sign == 1
            assert abs(p.log_abs - log_ratio) <= 1e-11 * max(1.0, abs(log_ratio))


def test_binomial_values():
    assert binomial_general(3.0, 1) == pytest.approx(3.0, rel=1e-14)
    assert binomial_general(3.0, 0) == 1.0
    # oracle: (z-k+1)_k / k! = 2.5 * 1.5 / 2
    assert binomial_general(2.5, 2) == pytest.approx(1.875, rel=1e-12)


def test_binomial_integer_agreement():
    for n in range(0, 61, 6):
        for k in {0, min(1, n), n // 2, n}:
            np.testing.assert_allclose(
                binomial_general(float(n), k), float(math.comb(n, k)), rtol=1e-11
            )


def test_binomial_domain():
    with pytest.raises(ValueError):
        binomial_general(1.0, 3)


def test_duplication_formula():
    # G(2z) = 2^(2z-1) pi^(-1/2) G(z) G(z+1/2)
    for z in np.linspace(0.05, 50.0, 77):
        lhs = ln_gamma(2.0 * z)
        rhs = (2.0 * z - 1.0) * math.log(2.0) - 0.5 * math.log(math.pi) + ln_gamma(z) + ln_gamma(z + 0.5)
        assert abs(math.exp(lhs - rhs) - 1.0) <= 1e-11


def test_hyp_terminating_trivial():
    assert float(hyp_terminating([0.0, 2.3], [1.1], 0.7)) == 1.0
    # one-step expansion: 1 - b z / c
    val = float(hyp_terminating([-1.0, 2.0], [5.0], 0.3))
    assert val == pytest.approx(1.0 - 2.0 * 0.3 / 5.0, rel=1e-14)


def test_hyp_terminating_chu_vandermonde():
    # 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
    for n, b, c in ((2, 1.0, 3.0), (5, 0.7, 2.2), (9, -1.3, 4.0)):
        val = float(hyp_terminating([-float(n), b], [c], 1.0))
        expect = (pochhammer(c - b, n) / pochhammer(c, n)).to_float()
        np.testing.assert_allclose(val, expect, rtol=1e-10)
    assert float(hyp_terminating([-2.0, 1.0], [3.0], 1.0)) == pytest.approx(0.5)


def test_hyp_terminating_errors():
    with pytest.raises(ValueError):
        hyp_terminating([1.5, 2.0], [3.0], 1.0)  # nothing terminates
    with pytest.raises(ValueError):
        hyp_terminating([-5.0], [-3.0], 1.0)  # pole before termination
    # pole exactly at the termination step is fine (dual-Hahn pattern)
    hyp_terminating([-3.0, -1.0, 4.0], [1.0, -3.0], 1.0)


def test_hyp_terminating_cancellation_flag():
    res = hyp_terminating([-60.0], [1.0], 60.0)
    assert isinstance(res, HypergeometricSum)
    assert res.reduced_precision
    assert not hyp_terminating([-3.0], [1.0], 0.5).reduced_precision


def test_logreal_arithmetic():
    a = LogReal.from_float(-3.0)
    b = LogReal.from_float(0.5)
    assert (a * b).to_float() == pytest.approx(-1.5, rel=1e-15)
    assert (a / b).to_float() == pytest.approx(-6.0, rel=1e-15)
    zero = LogReal.from_float(0.0)
    assert (a * zero).sign == 0
    with pytest.raises(ZeroDivisionError):
        a / zero
    with pytest.raises(ValueError):
        LogReal(2, 0.0)
    with pytest.raises(ValueError):
        LogReal(0, 0.0)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False),
    st.sampled_from([-1.0, 1.0]),
)
def test_logreal_round_trip(mag, sign):
    # materializing and re-encoding preserves the sign and the stored
    # log-magnitude to ulp scale
    y = LogReal.from_float(sign * mag)
    again = LogReal.from_float(y.to_float())
    assert again.sign == y.sign
    assert abs(again.log_abs - y.log_abs) <= 4e-16 * max(1.0, abs(y.log_abs))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.01, max_value=50.0), st.integers(min_value=0, max_value=60))
def test_pochhammer_gamma_property(a, n):
    p = pochhammer(a, n)
    assert abs(p.log_abs - (ln_gamma(a + n) - ln_gamma(a))) <= 1e-11 * max(
        1.0, abs(p.log_abs)
    )
