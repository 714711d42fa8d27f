import json
import math

import numpy as np
import pytest

from hankel_spectra import operators as ops
from hankel_spectra.operators import H1Spec, H2Spec, H3Spec, H4Spec

ALL_FULL_SPECS = [
    H1Spec(k=0.5, alpha=1.0),
    H1Spec(k=0.8, alpha=2.5),
    H1Spec(k=0.3, alpha=0.7),
    H2Spec(lam=0.5),
    H2Spec(lam=2.5),
    H3Spec(),
    H4Spec(N=6, gamma=0.3, delta=1.7),
]


def test_spec_validation():
    with pytest.raises(ValueError):
        H1Spec(k=1.5, alpha=1.0)
    with pytest.raises(ValueError):
        H1Spec(k=0.5, alpha=0.0)
    with pytest.raises(ValueError):
        H1Spec(k=0.5, alpha=1.0, block="even")
    with pytest.raises(ValueError):
        H2Spec(lam=-1.0)
    with pytest.raises(ValueError):
        H2Spec(lam=1.0, block="diagonal")
    with pytest.raises(ValueError):
        H4Spec(N=-1, gamma=0.0, delta=0.0)
    with pytest.raises(ValueError):
        H4Spec(N=3, gamma=-1.0, delta=0.0)


def test_jacobi_params_values():
    p = ops.jacobi_params(H1Spec(k=0.5, alpha=1.0))
    np.testing.assert_allclose(p.diagonal(3), [0.0, 1.0, 2.0])
    assert p.offdiagonal(1)[0] == pytest.approx(-0.5)

    p = ops.jacobi_params(H3Spec())
    assert p.diagonal(4).tolist() == [0.0] * 4
    assert p.offdiagonal(1)[0] == pytest.approx(math.sqrt(0.5))

    p = ops.jacobi_params(H4Spec(N=1, gamma=0.0, delta=0.0))
    np.testing.assert_allclose(p.diagonal(2), [1.0, 1.0])
    assert p.offdiagonal(1)[0] == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        p.diagonal(3)  # finite matrix

    with pytest.raises(ValueError):
        ops.jacobi_params(H2Spec(lam=1.0, block="even"))


def test_hankel_symbol_values():
    h = ops.hankel_symbol(H1Spec(k=0.4, alpha=2.2), 0)
    assert h.to_float() == pytest.approx(math.gamma(2.2), rel=1e-13)
    assert ops.hankel_symbol(H2Spec(lam=1.3), 3).sign == 0
    v = ops.hankel_symbol(H4Spec(N=1, gamma=0.0, delta=0.0), 1)
    assert v.to_float() == pytest.approx(-1.0, rel=1e-13)
    with pytest.raises(ValueError):
        ops.hankel_symbol(H4Spec(N=1, gamma=0.0, delta=0.0), 3)


def test_weight_values():
    assert ops.weights(H1Spec(k=0.4, alpha=1.0), 0).to_float() == pytest.approx(1.0)
    w = ops.weights(H3Spec(), 2)
    assert w.to_float() == pytest.approx(-1.0 / math.sqrt(2.0), rel=1e-14)
    spec4 = H4Spec(N=4, gamma=0.3, delta=1.7)
    w0 = ops.weights(spec4, 0).to_float()
    from hankel_spectra.special import pochhammer

    expect = 1.0 / math.sqrt(math.factorial(4) * pochhammer(2.7, 4).to_float())
    assert w0 == pytest.approx(expect, rel=1e-13)


def test_kappa_matches_weight_ratio():
    # kappa_n = a_n w_{n+1} / w_n reproduces the construction ansatz
    for spec in ALL_FULL_SPECS:
        params = ops.jacobi_params(spec)
        top = spec.N - 1 if isinstance(spec, H4Spec) else 12
        a = params.offdiagonal(top + 1)
        for n in range(top + 1):
            wn = ops.weights(spec, n)
            wn1 = ops.weights(spec, n + 1)
            np.testing.assert_allclose(
                a[n] * (wn1 / wn).to_float(), ops.kappa(spec, n), rtol=1e-12, atol=1e-15
            )


def test_materialize_examples():
    m = ops.materialize(H1Spec(k=0.5, alpha=1.0), 2)
    np.testing.assert_allclose(m, [[1.0, 0.5], [0.5, 0.5]], rtol=1e-13)
    # oracle: entry (0,1) simplifies to k sqrt(alpha)
    for k, al in ((0.3, 2.5), (0.8, 0.5)):
        m = ops.materialize(H1Spec(k=k, alpha=al), 2)
        assert m[0, 1] == pytest.approx(k * math.sqrt(al), rel=1e-13)
    m = ops.materialize(H4Spec(N=1, gamma=0.0, delta=0.0), 2)
    np.testing.assert_allclose(m, [[2.0, 1.0], [1.0, 2.0]], rtol=1e-13)


def test_materialize_entry_00_is_one_for_h1():
    for al in (0.3, 1.0, 4.0):
        m = ops.materialize(H1Spec(k=0.6, alpha=al), 1)
        assert m[0, 0] == pytest.approx(1.0, rel=1e-13)


def test_materialize_symmetry_exact():
    for spec in ALL_FULL_SPECS:
        size = spec.N + 1 if isinstance(spec, H4Spec) else 40
        m = ops.materialize(spec, size)
        assert np.array_equal(m, m.T)


def test_checkerboard_zeros():
    for spec in (H2Spec(lam=0.7), H3Spec()):
        m = ops.materialize(spec, 13)
        i, j = np.indices(m.shape)
        assert np.all(m[(i + j) % 2 == 1] == 0.0)


def test_blocks_match_full():
    for base, blocked in (
        (H2Spec(lam=1.2), H2Spec(lam=1.2, block="even")),
        (H2Spec(lam=1.2), H2Spec(lam=1.2, block="odd")),
        (H3Spec(), H3Spec(block="even")),
        (H3Spec(), H3Spec(block="odd")),
    ):
        off = 0 if blocked.block == "even" else 1
        full = ops.materialize(base, 2 * 8 + off + 1)
        sub = ops.materialize(blocked, 8)
        idx = 2 * np.arange(8) + off
        np.testing.assert_array_equal(sub, full[np.ix_(idx, idx)])


def test_closed_form_cross_check():
    # dual construction: w_m w_n h_{m+n} equals the defining formula
    for spec in ALL_FULL_SPECS + [
        H2Spec(lam=0.8, block="even"),
        H2Spec(lam=0.8, block="odd"),
        H3Spec(block="even"),
        H3Spec(block="odd"),
    ]:
        size = spec.N + 1 if isinstance(spec, H4Spec) else 25
        m = ops.materialize(spec, size)
        for i in (0, 1, size // 2, size - 1):
            for j in (0, 2, size - 1):
                direct = ops.closed_form_entry(spec, i, j)
                if direct == 0.0:
                    assert m[i, j] == 0.0
                else:
                    np.testing.assert_allclose(m[i, j], direct, rtol=1e-12)


def test_h4_extended_matches_standard():
    spec = H4Spec(N=9, gamma=0.3, delta=1.7)
    a = ops.materialize(spec, 10)
    b = ops.h4_extended_matrix(spec, 10).astype(float)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_gauge_covariance():
    # rescaling w by t and the symbol by 1/t^2 leaves entries unchanged
    for spec in (H1Spec(k=0.6, alpha=1.3), H2Spec(lam=0.9), H4Spec(N=5, gamma=0.1, delta=0.4)):
        size = 6
        idx = np.arange(size)
        sw, lw = ops.weight_log_seq(spec, size - 1)
        sh, lh = ops.symbol_log_seq(spec, 2 * (size - 1))
        for t in (3.7, 0.02):
            lw_t = lw + math.log(t)
            lh_t = lh - 2.0 * math.log(t)
            logs = lw_t[idx][:, None] + lw_t[idx][None, :] + lh_t[np.add.outer(idx, idx)]
            signs = sw[idx][:, None] * sw[idx][None, :] * sh[np.add.outer(idx, idx)]
            np.testing.assert_allclose(
                signs * np.exp(logs), ops.materialize(spec, size), rtol=1e-14, atol=1e-300
            )


def test_strip_signs_hilbert_form():
    spec = H2Spec(lam=0.5, block="even")
    m = ops.materialize(spec, 60, strip_signs=True)
    i, j = np.indices(m.shape)
    np.testing.assert_allclose(m, 1.0 / (i + j + 0.5), atol=1e-13)


def test_commutation_residual_examples():
    for spec in ALL_FULL_SPECS:
        assert ops.commutation_residual(spec, 3, 3) == 0.0
    assert ops.commutation_residual(H1Spec(k=0.3, alpha=2.5), 4, 7) <= 1e-13
    spec4 = H4Spec(N=6, gamma=0.3, delta=1.7)
    worst = max(
        ops.commutation_residual(spec4, m, n) for m in range(7) for n in range(m + 1, 7)
    )
    assert worst <= 1e-12


def test_commutation_residual_acceptance_scale():
    for spec in ALL_FULL_SPECS:
        assert ops.max_commutation_residual(spec, 200) <= 1e-12


def test_commutation_rejects_blocks():
    with pytest.raises(ValueError):
        ops.commutation_residual(H2Spec(lam=1.0, block="even"), 0, 1)


def test_commutant_expansion():
    spec = H3Spec()
    assert ops.commutant_expansion_check(spec, 1) == 0.0
    assert ops.commutant_expansion_check(spec, 12) <= 1e-10
    assert ops.commutant_expansion_check(H4Spec(N=5, gamma=0.0, delta=0.0), 6) <= 1e-11
    assert ops.commutant_expansion_check(H1Spec(k=0.4, alpha=1.5), 10) <= 1e-10
    assert ops.commutant_expansion_check(H2Spec(lam=1.0), 10) <= 1e-10
    with pytest.raises(ValueError):
        ops.commutant_expansion_check(spec, 41)


def test_column_square_summability():
    # column 0 of h1 is square-summable: the tail beyond row 500 is tiny
    for k, al in ((0.9, 5.0), (0.5, 1.0)):
        sw, lw = ops.weight_log_seq(H1Spec(k=k, alpha=al), 2000)
        sh, lh = ops.symbol_log_seq(H1Spec(k=k, alpha=al), 2000)
        col_sq = np.exp(2.0 * (lw + lw[0] + lh))
        total = col_sq.sum()
        assert col_sq[500:].sum() < 1e-8 * total


def test_carleman_growth():
    # sum 1/|a_n| keeps growing like log N (or faster) for every infinite family
    for spec, rate in (
        (H1Spec(k=0.5, alpha=1.0), 1.0 / 0.5),
        (H1Spec(k=0.9, alpha=3.0), 1.0 / 0.9),
        (H2Spec(lam=2.5), 2.0),
        (H3Spec(), 10.0),  # sqrt growth dwarfs log; generous floor
    ):
        incr = ops.carleman_partial_sum(spec, 100_000) - ops.carleman_partial_sum(spec, 10_000)
        assert incr >= 0.8 * rate * math.log(10.0)


def test_matrix_csv_format():
    m = ops.materialize(H1Spec(k=0.5, alpha=1.0), 2)
    text = ops.matrix_csv(m)
    assert text == "1,0.5\n0.5,0.5\n"
    # column-major: line j is column j
    m2 = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert ops.matrix_csv(m2).splitlines()[0] == "1,3"


def test_matrix_json_envelope_round_trip():
    spec = H4Spec(N=3, gamma=0.25, delta=1.5)
    m = ops.materialize(spec, 4)
    env = ops.matrix_json_envelope(spec, m)
    assert env["family"] == "h4" and env["size"] == 4
    back = json.loads(json.dumps(env, sort_keys=True))
    np.testing.assert_array_equal(np.array(back["entries"]), m)
