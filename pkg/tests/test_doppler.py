import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from ddl_radar.doppler import (circular_peak_mask, ddl_extract, ddl_extract_matrix, dft_image,
                               dft_image_covariance, dft_matrix, find_circular_peaks, power_profile,
                               range_peak_mask, representative_cells)


def brute_dft_image(x):
    # zero Doppler at 1-based bin N/2 + 1, i.e. index N/2; bin j holds frequency (j - N/2) / N
    N = len(x)
    out = np.empty(N, dtype=complex)
    for j in range(N):
        k = j - N // 2
        out[j] = sum(x[m] * np.exp(-2j * np.pi * k * m / N) for m in range(N))
    return out


def brute_peaks(p):
    L = len(p)
    return [i + 1 for i in range(L) if p[i] > p[i - 1] and p[i] > p[(i + 1) % L]]


def test_dft_image_matches_direct_sum(rng):
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    np.testing.assert_allclose(dft_image(x), brute_dft_image(x), atol=1e-11)
    np.testing.assert_allclose(dft_matrix(16) @ x, dft_image(x), atol=1e-11)


def test_zero_doppler_bin():
    img = dft_image(np.ones(8))
    assert np.argmax(np.abs(img)) + 1 == 5


def test_odd_length_rejected():
    with pytest.raises(ValueError):
        dft_image(np.ones(7))


def test_image_covariance_and_extraction(rng):
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    sig = A @ A.conj().T
    F = dft_matrix(8)
    np.testing.assert_allclose(dft_image_covariance(sig), F @ sig @ F.conj().T, atol=1e-10)
    bins = [3, 4, 5]
    np.testing.assert_allclose(ddl_extract_matrix(dft_image_covariance(sig), bins),
                               (F @ sig @ F.conj().T)[2:5, 2:5], atol=1e-10)
    x = rng.standard_normal(8)
    np.testing.assert_allclose(ddl_extract(dft_image(x), bins), dft_image(x)[2:5])
    with pytest.raises(ValueError):
        ddl_extract(dft_image(x), [0, 1])


def test_power_profile_zero_padding(rng):
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    p = power_profile(x, 32)
    padded = np.concatenate([x, np.zeros(24)])
    np.testing.assert_allclose(p, np.abs(brute_dft_image(padded)) ** 2, rtol=1e-10)
    with pytest.raises(ValueError):
        power_profile(x, 4)


def test_peak_finder_matches_brute_force_on_random_profiles():
    rng = np.random.default_rng(7)
    for trial in range(10_000):
        L = int(rng.integers(3, 40))
        # small integer alphabet forces plateaus and ties
        p = rng.integers(0, 4, L).astype(float) if trial % 2 else rng.standard_normal(L)
        assert find_circular_peaks(p).tolist() == brute_peaks(p)


@given(hnp.arrays(float, st.integers(3, 64), elements=st.floats(-1e6, 1e6)))
@settings(max_examples=200, deadline=None)
def test_peak_finder_property(p):
    assert find_circular_peaks(p).tolist() == brute_peaks(p)


def test_constant_profile_has_no_peaks():
    assert find_circular_peaks(np.ones(16)).size == 0


def test_wraparound_peak():
    p = np.array([5.0, 1, 2, 1, 4])
    assert find_circular_peaks(p).tolist() == [1, 3]


def test_range_peak_mask_brute_force(rng):
    Z = rng.integers(0, 5, (7, 6)).astype(float)
    mask = range_peak_mask(Z, axis=0)
    M = Z.shape[0]
    for i in range(M):
        for j in range(Z.shape[1]):
            left = Z[i, j] > Z[i - 1, j] if i > 0 else True
            right = Z[i, j] > Z[i + 1, j] if i < M - 1 else True
            assert mask[i, j] == (left and right)


def test_representative_cells():
    Z = np.array([[1.0, 5], [3, 1], [2, 2], [0, 4]])
    assert representative_cells(Z).tolist() == [1, 2, 4]
    with pytest.raises(ValueError):
        representative_cells(np.ones((2, 4)))


def test_circular_peak_mask_batched(rng):
    P = rng.standard_normal((5, 12))
    for row, m in zip(P, circular_peak_mask(P)):
        assert (np.flatnonzero(m) + 1).tolist() == brute_peaks(row)
