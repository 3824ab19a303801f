"""Zero-Doppler-centered DFT images, DDL extraction and peak finding.

Doppler bins are numbered 1..N with zero Doppler at bin ``N/2 + 1``; all
public functions take and return bin numbers in that convention. Functions
acting on vectors operate along the last axis and broadcast over leading
axes.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "dft_image",
    "dft_matrix",
    "dft_image_covariance",
    "ddl_extract",
    "ddl_extract_matrix",
    "power_profile",
    "circular_peak_mask",
    "find_circular_peaks",
    "range_peak_mask",
    "representative_cells",
]


def _check_even(length: int):
    if length < 2 or length % 2:
        raise ValueError(f"centered DFT needs an even length >= 2, got {length}")


def dft_image(x) -> np.ndarray:
    """Unnormalized DFT rotated so that zero Doppler sits at bin ``N/2 + 1``."""
    x = np.asarray(x)
    _check_even(x.shape[-1])
    return np.fft.fftshift(np.fft.fft(x, axis=-1), axes=-1)


def dft_matrix(N: int) -> np.ndarray:
    """Centered DFT matrix ``F_c``, so that ``dft_image(x) == F_c @ x``."""
    _check_even(N)
    return np.fft.fftshift(np.fft.fft(np.eye(N), axis=0), axes=0)


def dft_image_covariance(sigma) -> np.ndarray:
    """Doppler-domain covariance ``F_c sigma F_c^H``."""
    sigma = np.asarray(sigma)
    F = dft_matrix(sigma.shape[-1])
    out = F @ sigma @ F.conj().T
    return 0.5 * (out + out.conj().swapaxes(-1, -2))


def _bin_index(bins: Sequence[int], size: int) -> np.ndarray:
    idx = np.asarray(bins, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("bins must be a nonempty 1-D sequence")
    if idx.min() < 1 or idx.max() > size:
        raise ValueError(f"bins must lie in [1, {size}], got {idx.tolist()}")
    return idx - 1


def ddl_extract(image, bins: Sequence[int]) -> np.ndarray:
    """Entries of a Doppler image (last axis) at the given bins."""
    image = np.asarray(image)
    return image[..., _bin_index(bins, image.shape[-1])]


def ddl_extract_matrix(matrix, bins: Sequence[int]) -> np.ndarray:
    """Principal submatrix of a Doppler-domain covariance on the given bins."""
    matrix = np.asarray(matrix)
    idx = _bin_index(bins, matrix.shape[-1])
    return matrix[..., idx[:, None], idx[None, :]]


def power_profile(x, n_fft: int) -> np.ndarray:
    """Magnitude-squared centered image of ``x`` zero-padded to ``n_fft``."""
    x = np.asarray(x)
    if n_fft < x.shape[-1]:
        raise ValueError(f"n_fft ({n_fft}) must be at least the vector length ({x.shape[-1]})")
    _check_even(n_fft)
    img = np.fft.fftshift(np.fft.fft(x, n=n_fft, axis=-1), axes=-1)
    return img.real ** 2 + img.imag ** 2


def circular_peak_mask(profile) -> np.ndarray:
    """Boolean mask of strict local maxima treating the last axis as periodic."""
    p = np.asarray(profile)
    if p.shape[-1] < 3:
        raise ValueError("profile must have at least 3 samples")
    left = np.roll(p, 1, axis=-1)
    right = np.roll(p, -1, axis=-1)
    return (p > left) & (p > right)


def find_circular_peaks(profile) -> np.ndarray:
    """1-based indices of the circular strict local peaks of a 1-D profile."""
    p = np.asarray(profile)
    if p.ndim != 1:
        raise ValueError("find_circular_peaks expects a 1-D profile")
    return np.flatnonzero(circular_peak_mask(p)) + 1


def range_peak_mask(Z, axis: int = -2) -> np.ndarray:
    """Strict local maxima along the (non-periodic) range axis.

    End cells are compared with their single neighbour only.
    """
    Z = np.moveaxis(np.asarray(Z), axis, -1)
    if Z.shape[-1] < 2:
        return np.zeros(Z.shape, dtype=bool)
    mask = np.ones(Z.shape, dtype=bool)
    mask[..., 1:] &= Z[..., 1:] > Z[..., :-1]
    mask[..., :-1] &= Z[..., :-1] > Z[..., 1:]
    return np.moveaxis(mask, -1, axis)


def representative_cells(Z) -> np.ndarray:
    """Sorted 1-based range cells holding a range peak in at least one Doppler line.

    ``Z`` is the ``M x N`` range-Doppler power matrix.
    """
    Z = np.asarray(Z)
    if Z.ndim != 2 or Z.shape[0] < 3:
        raise ValueError("representative_cells expects an M x N matrix with M >= 3")
    return np.flatnonzero(range_peak_mask(Z, axis=0).any(axis=1)) + 1
