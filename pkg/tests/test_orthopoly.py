import math

import numpy as np
import pytest

from hankel_spectra import operators as ops
from hankel_spectra import orthopoly as op
from hankel_spectra.operators import H1Spec, H2Spec, H3Spec, H4Spec
from hankel_spectra.orthopoly import (
    DualHahn,
    Hermite,
    Laguerre,
    Meixner,
    MeixnerPollaczek,
    eval_classical,
    eval_orthonormal_sequence,
    orthonormal_from_classical,
    orthonormality_check,
    spectral_jacobi,
)

SPECS = [
    H1Spec(k=0.8, alpha=1.0),
    H1Spec(k=0.6, alpha=2.5),
    H1Spec(k=0.5, alpha=1.3),
    H1Spec(k=0.3, alpha=0.7),
    H2Spec(lam=0.5),
    H2Spec(lam=2.5),
    H3Spec(),
    H4Spec(N=12, gamma=0.3, delta=1.7),
]


def test_family_validation():
    with pytest.raises(ValueError):
        MeixnerPollaczek(0.0, 1.0)
    with pytest.raises(ValueError):
        MeixnerPollaczek(1.0, 3.5)
    with pytest.raises(ValueError):
        Laguerre(-1.0)
    with pytest.raises(ValueError):
        Meixner(1.0, 1.0)
    with pytest.raises(ValueError):
        DualHahn(-1.5, 0.0, 3)


def test_constant_term_is_one():
    for fam, x in (
        (MeixnerPollaczek(0.7, 1.1), 0.4),
        (Laguerre(0.5), 2.0),
        (Meixner(1.2, 0.4), 3.0),
        (Hermite(), 0.9),
        (DualHahn(0.3, 1.7, 5), 2),
    ):
        assert eval_classical(fam, 0, x) == pytest.approx(1.0, rel=1e-14)


def test_hermite_values():
    assert eval_classical(Hermite(), 2, 1.0) == pytest.approx(2.0, rel=1e-13)
    assert eval_classical(Hermite(), 2, 0.0) == pytest.approx(-2.0)
    assert eval_classical(Hermite(), 3, 0.0) == 0.0
    # H_3(x) = 8x^3 - 12x
    assert eval_classical(Hermite(), 3, 0.7) == pytest.approx(8 * 0.7**3 - 12 * 0.7, rel=1e-13)


def test_laguerre_values():
    assert eval_classical(Laguerre(0.0), 1, 2.0) == pytest.approx(-1.0, rel=1e-14)
    # L_2^(a)(x) = (a+1)(a+2)/2 - (a+2)x + x^2/2
    a, x = 1.5, 0.8
    expect = (a + 1) * (a + 2) / 2 - (a + 2) * x + x * x / 2
    assert eval_classical(Laguerre(a), 2, x) == pytest.approx(expect, rel=1e-13)


def test_meixner_degree_one():
    # M_1(x; beta, c) = 1 + (1 - 1/c) x / beta
    beta, c, x = 1.7, 0.45, 2.0
    expect = 1.0 + (1.0 - 1.0 / c) * x / beta
    assert eval_classical(Meixner(beta, c), 1, x) == pytest.approx(expect, rel=1e-13)


def test_dual_hahn_at_zero_and_range():
    fam = DualHahn(0.4, 1.1, 9)
    for n in range(10):
        assert eval_classical(fam, n, 0) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(IndexError):
        eval_classical(fam, 10, 0)


def test_meixner_pollaczek_degree_one():
    # P_1^(lam)(x; phi) = 2 (lam cos(phi) + x sin(phi))
    lam, phi, x = 0.9, 1.2, 0.3
    expect = 2.0 * (lam * math.cos(phi) + x * math.sin(phi))
    assert eval_classical(MeixnerPollaczek(lam, phi), 1, x) == pytest.approx(expect, rel=1e-13)


def test_orthonormal_sequence_trivial():
    for spec in SPECS:
        seq = eval_orthonormal_sequence(spec, 0.7 if not isinstance(spec, H4Spec) else 1, 0)
        np.testing.assert_array_equal(seq, [1.0])


def test_orthonormal_hermite_at_zero():
    seq = eval_orthonormal_sequence(H3Spec(), 0.0, 2)
    np.testing.assert_allclose(seq, [1.0, 0.0, -1.0 / math.sqrt(2.0)], atol=1e-15)


def test_recurrence_matches_classical():
    # production recurrence against the hypergeometric-series oracle
    rng = np.random.default_rng(42)
    for spec in SPECS:
        if isinstance(spec, H4Spec):
            xs = np.arange(spec.N + 1, dtype=float)
            n_max = spec.N
        else:
            scale = {
                "ac_full_line": math.sqrt(abs(4 * spec.k**2 - 1)) if isinstance(spec, H1Spec) else 1.0,
                "ac_half_line": 1.0,
                "discrete": math.sqrt(abs(1 - 4 * spec.k**2)) if isinstance(spec, H1Spec) else 1.0,
            }[op.h1_regime(spec)] if isinstance(spec, H1Spec) else 1.0
            xs = rng.uniform(-5, 5, size=20) * scale
            if isinstance(spec, H1Spec) and op.h1_regime(spec) == "ac_half_line":
                xs = np.abs(xs)
            n_max = 30
        seq = eval_orthonormal_sequence(spec, xs, n_max)
        for n in (0, 1, n_max // 2, n_max):
            oracle = np.array([orthonormal_from_classical(spec, n, x) for x in xs])
            np.testing.assert_allclose(seq[n], oracle, rtol=1e-8, atol=1e-8)


def test_parity():
    xs = np.linspace(0.1, 3.0, 8)
    for spec in (H3Spec(), H2Spec(lam=0.5), H2Spec(lam=2.5)):
        plus = eval_orthonormal_sequence(spec, xs, 15)
        minus = eval_orthonormal_sequence(spec, -xs, 15)
        signs = (-1.0) ** np.arange(16)
        np.testing.assert_allclose(minus, signs[:, None] * plus, rtol=1e-12, atol=1e-12)


def test_generating_functions():
    # degree-40 partial sums against the closed generating functions
    deg = 40

    lam, phi, x = 0.8, 1.1, 0.4
    for t in (0.25, -0.3, 0.1):
        partial = sum(eval_classical(MeixnerPollaczek(lam, phi), n, x) * t**n for n in range(deg + 1))
        closed = ((1 - np.exp(1j * phi) * t) ** (-lam + 1j * x) * (1 - np.exp(-1j * phi) * t) ** (-lam - 1j * x)).real
        assert partial == pytest.approx(closed, rel=1e-8)

    a, x = 0.5, 0.9
    for t in (0.3, -0.25):
        partial = sum(eval_classical(Laguerre(a), n, x) * t**n for n in range(deg + 1))
        closed = (1 - t) ** (-a - 1) * math.exp(t * x / (t - 1))
        assert partial == pytest.approx(closed, rel=1e-8)

    beta, c, x = 1.4, 0.55, 2.0
    from hankel_spectra.special import pochhammer

    for t in (0.3, -0.2):
        partial = sum(
            pochhammer(beta, n).to_float() / math.factorial(n) * eval_classical(Meixner(beta, c), n, x) * t**n
            for n in range(deg + 1)
        )
        closed = (1 - t / c) ** x * (1 - t) ** (-x - beta)
        assert partial == pytest.approx(closed, rel=1e-8)

    x = 0.6
    for t in (0.28, -0.3):
        partial = sum(
            t**n / math.factorial(n // 2) * eval_classical(Hermite(), n, x) for n in range(deg + 1)
        )
        closed = (1 + 2 * x * t + 4 * t * t) / (1 + 4 * t * t) ** 1.5 * math.exp(
            4 * x * x * t * t / (1 + 4 * t * t)
        )
        assert partial == pytest.approx(closed, rel=1e-8)


def test_spectral_jacobi_shifts():
    # the eigenvalue-variable conventions: diagonal shifts and sign flips
    p = spectral_jacobi(H1Spec(k=0.8, alpha=1.0))
    np.testing.assert_allclose(p.diagonal(3), [-0.5, -1.5, -2.5])
    assert p.offdiagonal(1)[0] > 0  # flipped sign of a_0

    p = spectral_jacobi(H1Spec(k=0.5, alpha=1.0))
    np.testing.assert_allclose(p.diagonal(2), [0.5, 1.5])
    assert p.offdiagonal(1)[0] < 0

    spec = H1Spec(k=0.3, alpha=1.0)
    _, _, c = op.h1_point_params(spec)
    p = spectral_jacobi(spec)
    np.testing.assert_allclose(p.diagonal(1), [c / (1.0 + c)])

    p4 = spectral_jacobi(H4Spec(N=2, gamma=0.0, delta=0.0))
    j4 = ops.jacobi_params(H4Spec(N=2, gamma=0.0, delta=0.0))
    np.testing.assert_array_equal(p4.diagonal(3), j4.diagonal(3))


def test_h1_boundary_snap():
    assert op.h1_regime(H1Spec(k=0.5 + 5e-13, alpha=1.0)) == "ac_half_line"
    assert op.h1_regime(H1Spec(k=0.5 + 1e-9, alpha=1.0)) == "ac_full_line"
    assert op.h1_regime(H1Spec(k=0.5 - 1e-9, alpha=1.0)) == "discrete"


def test_orthonormality_probability_normalization():
    for spec in SPECS:
        assert orthonormality_check(spec, 0) <= 1e-12


def test_orthonormality_checks():
    assert orthonormality_check(H4Spec(N=1, gamma=0.0, delta=0.0), 1) <= 1e-12
    assert orthonormality_check(H3Spec(), 10) <= 1e-10
    for spec in SPECS:
        n_max = min(12, spec.N) if isinstance(spec, H4Spec) else 12
        assert orthonormality_check(spec, n_max) <= 1e-10


def test_orthonormality_blocks():
    assert orthonormality_check(H2Spec(lam=1.3, block="even"), 6) <= 1e-11
    assert orthonormality_check(H3Spec(block="odd"), 6) <= 1e-11


def test_dual_hahn_rejects_overlong_sequence():
    with pytest.raises(ValueError):
        eval_orthonormal_sequence(H4Spec(N=3, gamma=0.0, delta=0.0), 1, 4)
