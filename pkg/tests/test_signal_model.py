import numpy as np
import pytest

from altlms.exceptions import InvalidArgument
from altlms.signal_model import (AR1, GAUSSIAN_TAPS, IID_VECTOR, TAPPED_DELAY_LINE, UNIT_TAPS,
                                 WHITE, InputProcess, SparseSystem, complex_gaussian,
                                 generate_sparse_system, measure, noise_variance, snr_db)


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize("mode", [UNIT_TAPS, GAUSSIAN_TAPS])
def test_two_of_sixteen(mode):
    s = generate_sparse_system(16, 2, mode, rng(3))
    assert np.count_nonzero(s.w_o) == 2
    assert s.k == 2 and s.m == 16
    assert set(np.flatnonzero(s.p_o)) == set(s.support)


def test_forced_single_tap():
    s = generate_sparse_system(1, 1, UNIT_TAPS, rng())
    assert s.support == (0,)
    np.testing.assert_array_equal(s.p_o, [1.0])


def test_unit_taps_have_unit_modulus():
    s = generate_sparse_system(64, 10, UNIT_TAPS, rng(1))
    np.testing.assert_allclose(np.abs(s.w_o[list(s.support)]), 1.0)


def test_seed7_fixture():
    # recorded from the first run; guards the draw order
    s = generate_sparse_system(32, 4, GAUSSIAN_TAPS, rng(7))
    assert s.support == (18, 21, 27, 28)
    np.testing.assert_allclose(
        s.w_o[list(s.support)],
        [-0.3215008 - 0.7012j, 0.04252795 + 0.94767529j,
         -0.34804257 - 0.43874201j, 0.34637064 + 0.25235722j], atol=1e-8)


@pytest.mark.parametrize("m,k", [(16, 0), (4, 5), (0, 0)])
def test_bad_sparsity(m, k):
    with pytest.raises(InvalidArgument):
        generate_sparse_system(m, k, UNIT_TAPS, rng())


def test_sparse_system_invariants():
    with pytest.raises(InvalidArgument):
        SparseSystem(np.array([1.0, 0.0]), (0, 1))
    with pytest.raises(InvalidArgument):
        SparseSystem(np.array([1.0, 2.0]), (0,))


def test_support_is_roughly_uniform():
    counts = np.zeros(8)
    r = rng(11)
    for _ in range(4000):
        counts[list(generate_sparse_system(8, 2, UNIT_TAPS, r).support)] += 1
    # each tap expected 1000 times
    assert np.all(np.abs(counts - 1000) < 120)


def test_off_support_inner_product_is_zero():
    s = generate_sparse_system(32, 4, GAUSSIAN_TAPS, rng(2))
    v = complex_gaussian(rng(5), 32) * (1 - s.p_o)
    assert np.vdot(s.w_o, v) == 0


def test_white_stream_variance():
    proc = InputProcess(1, WHITE, TAPPED_DELAY_LINE, sigma_x2=2.0)
    r = rng(4)
    proc.reset(r)
    x = proc.regressors(10 ** 6, r)[:, 0]
    assert abs(np.mean(np.abs(x) ** 2) / 2.0 - 1) < 0.01


def test_ar1_correlation_and_variance():
    proc = InputProcess(1, AR1, TAPPED_DELAY_LINE, sigma_x2=1.0, ar_coefficient=0.8)
    r = rng(5)
    proc.reset(r)
    x = proc.regressors(10 ** 6, r)[:, 0]
    var = np.mean(np.abs(x) ** 2)
    rho = np.real(np.vdot(x[:-1], x[1:])) / np.real(np.vdot(x, x))
    assert abs(var - 1.0) < 0.02
    assert abs(rho - 0.8) < 0.02


@pytest.mark.parametrize("style", [TAPPED_DELAY_LINE, IID_VECTOR])
def test_white_regressor_covariance(style):
    proc = InputProcess(8, WHITE, style)
    r = rng(6)
    proc.reset(r)
    x = proc.regressors(2 * 10 ** 5, r)
    cov = x.T @ x.conj() / len(x)
    assert np.max(np.abs(cov - np.eye(8))) < 0.02


def test_delay_line_shifts_newest_first():
    proc = InputProcess(4, WHITE, TAPPED_DELAY_LINE)
    r = rng(8)
    proc.reset(r)
    a = proc.next_regressor(r)
    b = proc.next_regressor(r)
    np.testing.assert_array_equal(b[1:], a[:-1])


@pytest.mark.parametrize("mode", [WHITE, AR1])
def test_block_draw_matches_streaming(mode):
    p1, p2 = InputProcess(6, mode), InputProcess(6, mode)
    r1, r2 = rng(9), rng(9)
    p1.reset(r1)
    p2.reset(r2)
    block = p1.regressors(50, r1)
    stream = np.array([p2.next_regressor(r2) for _ in range(50)])
    np.testing.assert_allclose(block, stream, rtol=0, atol=1e-14)


def test_same_seed_same_stream():
    out = []
    for _ in range(2):
        r = rng(42)
        s = generate_sparse_system(16, 3, UNIT_TAPS, r)
        proc = InputProcess(16, AR1)
        proc.reset(r)
        x = proc.regressors(100, r)
        n = complex_gaussian(r, 100, 1e-3)
        out.append((s.w_o, x, n))
    for a, b in zip(*out):
        np.testing.assert_array_equal(a, b)


def test_ar1_iid_rejected():
    with pytest.raises(InvalidArgument):
        InputProcess(4, AR1, IID_VECTOR)


def test_measure_zero_system():
    s = SparseSystem(np.zeros(4, complex), ())
    m = measure(s, complex_gaussian(rng(), 4), 0.0, rng())
    assert m.d_noisy == 0


def test_measure_single_tap():
    w_o = np.zeros(4, complex)
    w_o[0] = 0.3 - 0.4j
    x = complex_gaussian(rng(1), 4)
    m = measure(SparseSystem(w_o, (0,)), x, 0.0, rng())
    assert m.d_noisy == np.conj(w_o[0]) * x[0]


def test_measure_noise_split():
    s = generate_sparse_system(8, 2, UNIT_TAPS, rng())
    m = measure(s, complex_gaussian(rng(1), 8), 0.1, rng(2))
    assert m.d_noisy - m.noise == pytest.approx(m.d_clean, abs=1e-15)


def test_measure_length_mismatch():
    s = generate_sparse_system(8, 2, UNIT_TAPS, rng())
    with pytest.raises(InvalidArgument):
        measure(s, np.ones(7), 0.1, rng())


def test_snr_30db():
    assert snr_db(1.0, 1e-3) == pytest.approx(30.0)
    assert noise_variance(1.0, 30.0) == pytest.approx(1e-3)


def test_complex_gaussian_split():
    z = complex_gaussian(rng(3), 10 ** 6, 4.0)
    assert np.var(z.real) == pytest.approx(2.0, rel=0.01)
    assert np.var(z.imag) == pytest.approx(2.0, rel=0.01)
