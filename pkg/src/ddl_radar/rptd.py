"""Regions of possible target detection (RPTD) and the MLD grid.

An RPTD of order ``n`` is a circularly contiguous run of ``n`` Doppler bins
grown around the bin that holds the peak of a tone's DFT image. The MLD grid
lists fine Doppler estimates, one per circular local peak of a zero-padded
power profile.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .doppler import circular_peak_mask, dft_image, find_circular_peaks

__all__ = [
    "RptdSet",
    "MldGrid",
    "peak_bin",
    "steering_profile",
    "rptd_set",
    "captured_power",
    "parabolic_offset",
    "fine_doppler_estimate",
    "fine_doppler_estimates",
    "mld_grid",
    "nearest_peak_estimates",
]

# profile values closer than this (relative to the peak) count as a tie
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class RptdSet:
    bins: tuple[int, ...]
    peak_bin: int
    freq: float

    @property
    def order(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class MldGrid:
    """Fine Doppler estimates at the local peaks of one power profile."""

    peaks: tuple[int, ...]
    freqs: tuple[float, ...]
    powers: tuple[float, ...]

    def __len__(self):
        return len(self.peaks)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.peaks, self.freqs))

    @property
    def dominant(self) -> tuple[int, float] | None:
        if not self.peaks:
            return None
        i = int(np.argmax(self.powers))
        return self.peaks[i], self.freqs[i]

    def nearest(self, freq: float) -> tuple[int, float] | None:
        """Entry whose estimate is closest to ``freq`` on the unit circle."""
        if not self.peaks:
            return None
        d = np.abs((np.asarray(self.freqs) - freq + 0.5) % 1.0 - 0.5)
        i = int(np.argmin(d))
        return self.peaks[i], self.freqs[i]


def peak_bin(freq: float, N: int) -> int:
    """Centered-DFT bin (1-based) holding the peak of a tone at ``freq``."""
    if N % 2:
        raise ValueError(f"N must be even, got {N}")
    if abs(freq) > 0.5:
        raise ValueError(f"|F| must not exceed 0.5, got {freq}")
    # half-away-from-zero rounding
    d = int(math.copysign(math.floor(abs(freq * N) + 0.5), freq)) + N // 2 + 1
    if d < 1:
        d += N
    elif d > N:
        d -= N
    return d


def steering_profile(freq: float, N: int) -> np.ndarray:
    """Power distribution of a tone's steering vector over the N centered bins."""
    img = dft_image(np.exp(2j * np.pi * freq * np.arange(N)))
    return img.real ** 2 + img.imag ** 2


def rptd_set(freq: float, N: int, n: int) -> RptdSet:
    """Grow an ``n``-bin circular window from the peak bin of ``freq``.

    Each step annexes the larger of the two boundary neighbours; ties go to
    the lower bin number.
    """
    if not 1 <= n <= N:
        raise ValueError(f"n must satisfy 1 <= n <= N, got n={n}, N={N}")
    p = steering_profile(freq, N)
    tol = _TIE_RTOL * p.max()
    dm = peak_bin(freq, N)
    left = right = dm
    for _ in range(n - 1):
        lo = left - 1 if left > 1 else N
        hi = right + 1 if right < N else 1
        pl, ph = p[lo - 1], p[hi - 1]
        if abs(pl - ph) <= tol:
            take_low = lo < hi
        else:
            take_low = pl > ph
        if take_low:
            left = lo
        else:
            right = hi
    bins = tuple((left - 1 + k) % N + 1 for k in range(n))
    return RptdSet(bins=bins, peak_bin=dm, freq=freq)


def captured_power(freq: float, bins, N: int) -> float:
    """Fraction of a tone's energy that falls in ``bins``."""
    p = steering_profile(freq, N)
    return float(p[np.asarray(bins) - 1].sum() / p.sum())


def parabolic_offset(p_minus, p_peak, p_plus):
    """Vertex offset of the parabola through three equally spaced samples.

    Degenerate (non-concave) triples give offset 0.
    """
    p_minus, p_peak, p_plus = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (p_minus, p_peak, p_plus)))
    denom = p_minus - 2.0 * p_peak + p_plus
    ok = denom < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.where(ok, 0.5 * (p_minus - p_plus) / np.where(ok, denom, 1.0), 0.0)
    return delta


def _wrap(freq):
    return (np.asarray(freq) + 0.5) % 1.0 - 0.5


def fine_doppler_estimate(profile, peak_index: int) -> float:
    """Normalized Doppler estimate from the peak at ``peak_index`` (1-based)."""
    p = np.asarray(profile, dtype=float)
    L = p.size
    i = peak_index - 1
    pm, p0, pp = p[(i - 1) % L], p[i], p[(i + 1) % L]
    if pm - 2 * p0 + pp >= 0:
        warnings.warn(f"degenerate curvature at profile index {peak_index}; using zero offset",
                      RuntimeWarning, stacklevel=2)
    delta = float(parabolic_offset(pm, p0, pp))
    return float(_wrap((peak_index + delta - (L // 2 + 1)) / L))


def fine_doppler_estimates(profiles, peak_indices) -> np.ndarray:
    """Vectorized ``fine_doppler_estimate`` over a batch of profiles.

    ``profiles`` has shape ``(B, L)`` and ``peak_indices`` (1-based) shape ``(B,)``.
    """
    p = np.asarray(profiles, dtype=float)
    L = p.shape[-1]
    i = np.asarray(peak_indices) - 1
    rows = np.arange(p.shape[0])
    delta = parabolic_offset(p[rows, (i - 1) % L], p[rows, i], p[rows, (i + 1) % L])
    return _wrap((i + 1 + delta - (L // 2 + 1)) / L)


def mld_grid(profile) -> MldGrid:
    p = np.asarray(profile, dtype=float)
    peaks = find_circular_peaks(p)
    if peaks.size == 0:
        return MldGrid((), (), ())
    est = fine_doppler_estimates(np.broadcast_to(p, (peaks.size, p.size)), peaks)
    return MldGrid(tuple(int(k) for k in peaks), tuple(float(f) for f in est),
                   tuple(float(v) for v in p[peaks - 1]))


def nearest_peak_estimates(profiles, freq: float):
    """Per-profile MLD entry closest to ``freq``.

    Returns ``(found, estimates)``; ``found`` is False for profiles without
    any local peak.
    """
    p = np.asarray(profiles, dtype=float)
    L = p.shape[-1]
    mask = circular_peak_mask(p)
    found = mask.any(axis=-1)
    delta = parabolic_offset(np.roll(p, 1, axis=-1), p, np.roll(p, -1, axis=-1))
    refined = _wrap((np.arange(L) + delta - L // 2) / L)
    dist = np.where(mask, np.abs(_wrap(refined - freq)), np.inf)
    best = np.argmin(dist, axis=-1)
    est = np.take_along_axis(refined, best[..., None], axis=-1)[..., 0]
    return found, np.where(found, est, np.nan)
