import concurrent.futures

import numpy as np
import pytest

from conftest import naive_dft, rel_err, shifted_sequence, spatial_xcorr
from driftreg.spectral import cross_correlate, forward_dft, group_sum_surface, inverse_dft, sequence_spectra


def test_dft_of_constant():
    spec = forward_dft(np.full((6, 6), 2.5))
    assert spec[0, 0] == pytest.approx(2.5 * 36)
    rest = spec.copy()
    rest[0, 0] = 0
    assert np.max(np.abs(rest)) < 1e-9


def test_dft_of_impulse():
    x = np.zeros((5, 7))
    x[0, 0] = 1.0
    np.testing.assert_allclose(forward_dft(x), np.ones((5, 7)), atol=1e-12)


def test_dft_matches_naive_summation(rng):
    x = rng.normal(size=(8, 8))
    assert rel_err(forward_dft(x), naive_dft(x)) < 1e-9


def test_dft_round_trip_and_parseval(rng):
    for shape in [(8, 8), (13, 20), (32, 32)]:
        x = rng.normal(size=shape)
        X = forward_dft(x)
        assert rel_err(inverse_dft(X), x) < 1e-9
        assert np.max(np.abs(np.fft.ifft2(X).imag)) < 1e-9 * np.max(np.abs(x))
        n = x.size
        assert abs(np.sum(x**2) - np.sum(np.abs(X) ** 2) / n) < 1e-9 * np.sum(x**2)


def test_cross_correlate_impulses():
    a = np.zeros((4, 4))
    b = np.zeros((4, 4))
    a[0, 0] = 1.0
    b[0, 1] = 1.0
    expected = np.zeros((4, 4))
    expected[0, 1] = 1.0
    np.testing.assert_allclose(cross_correlate(a, b), expected, atol=1e-12)


def test_autocorrelation_peak_at_zero(rng):
    a = rng.normal(size=(8, 8))
    s = cross_correlate(a, a)
    assert np.unravel_index(np.argmax(s), s.shape) == (0, 0)
    assert s[0, 0] == pytest.approx(np.sum(a * a), rel=1e-12)


def test_cross_correlate_matches_spatial_loop(rng):
    for shape in [(8, 8), (6, 11)]:
        a, b = rng.normal(size=shape), rng.normal(size=shape)
        assert rel_err(cross_correlate(a, b), spatial_xcorr(a, b)) < 1e-9


def test_cross_correlate_swap_negates_lag(rng):
    a, b = rng.normal(size=(7, 9)), rng.normal(size=(7, 9))
    ab = cross_correlate(a, b)
    ba = cross_correlate(b, a)
    flipped = np.roll(ba[::-1, ::-1], (1, 1), axis=(0, 1))  # ba[-d mod dims]
    np.testing.assert_allclose(ab, flipped, rtol=1e-9, atol=1e-9 * np.max(np.abs(ab)))


def test_cross_correlate_shape_mismatch():
    with pytest.raises(ValueError):
        cross_correlate(np.ones((4, 4)), np.ones((4, 5)))


def test_group_sum_single_pair_is_cross_correlation(rng):
    y = rng.normal(size=(2, 8, 8))
    np.testing.assert_allclose(group_sum_surface(sequence_spectra(y), 1), cross_correlate(y[0], y[1]), atol=1e-12)


def test_group_sum_k4_m2_term_by_term(rng):
    y = rng.normal(size=(4, 8, 8))
    expected = spatial_xcorr(y[0], y[2]) + spatial_xcorr(y[1], y[3])
    assert rel_err(group_sum_surface(sequence_spectra(y), 2), expected) < 1e-9


def test_group_sum_peak_at_m_times_drift(rng):
    scene = rng.random((16, 16))
    c = (1, -2)
    spectra = sequence_spectra(shifted_sequence(scene, c, 5))
    for m in range(1, 5):
        s = group_sum_surface(spectra, m)
        peak = np.unravel_index(np.argmax(s), s.shape)
        assert peak == ((m * c[0]) % 16, (m * c[1]) % 16)


def test_group_sum_linearity(rng):
    y = rng.normal(size=(6, 10, 10))
    spectra = sequence_spectra(y)
    for m in range(1, 6):
        expected = sum(cross_correlate(y[k], y[k + m]) for k in range(6 - m))
        assert rel_err(group_sum_surface(spectra, m), expected) < 1e-9


def test_group_sum_m_out_of_range(rng):
    spectra = sequence_spectra(rng.normal(size=(3, 4, 4)))
    for m in (0, 3, -1):
        with pytest.raises(ValueError):
            group_sum_surface(spectra, m)


def test_subtract_mean_zeroes_dc(rng):
    x = rng.random((8, 8)) + 3.0
    assert abs(forward_dft(x, subtract_mean=True)[0, 0]) < 1e-9
    stack = sequence_spectra(np.stack([x, 2 * x]), subtract_mean=True)
    assert np.max(np.abs(stack[:, 0, 0])) < 1e-9


def test_concurrent_calls_agree(rng):
    pairs = [(rng.normal(size=(32, 32)), rng.normal(size=(32, 32))) for _ in range(8)]
    serial = [cross_correlate(a, b) for a, b in pairs]
    with concurrent.futures.ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda p: cross_correlate(*p), pairs))
    for s, t in zip(serial, threaded):
        np.testing.assert_array_equal(s, t)
