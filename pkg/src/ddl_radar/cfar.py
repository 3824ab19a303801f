"""Windowed-DFT filter bank followed by cell-averaging CFAR (non-adaptive baseline)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import windows

from .detectors import DetectorOutcome
from .doppler import dft_image

__all__ = ["CaCfarConfig", "doppler_window", "ca_cfar_scale", "ca_cfar_statistics", "ca_cfar_baseline"]


@dataclass(frozen=True)
class CaCfarConfig:
    """Baseline detector settings.

    ``neighbors`` passed to the detector are range rows in range order:
    the first half precede the CUT, the second half follow it. ``guard``
    rows adjacent to the CUT on each side are skipped and ``n_ref / 2``
    reference rows are averaged on each side.
    """

    window: str = "taylor"
    nbar: int = 5
    sll_db: float = -35.0
    n_ref: int = 20
    guard: int = 1

    def __post_init__(self):
        if self.window not in ("taylor", "rectangular"):
            raise ValueError(f"unknown window {self.window!r}")
        if self.n_ref < 2 or self.n_ref % 2:
            raise ValueError(f"n_ref must be an even integer >= 2, got {self.n_ref}")
        if self.guard < 0:
            raise ValueError(f"guard must be nonnegative, got {self.guard}")

    @property
    def rows_needed(self) -> int:
        return 2 * (self.guard + self.n_ref // 2)


def doppler_window(N: int, config: CaCfarConfig) -> np.ndarray:
    if config.window == "rectangular":
        return np.ones(N)
    return windows.taylor(N, nbar=config.nbar, sll=abs(config.sll_db), norm=True)


def ca_cfar_scale(pfa: float, n_ref: int) -> float:
    """Multiplier on the reference mean giving ``pfa`` for exponential cell powers."""
    return n_ref * (pfa ** (-1.0 / n_ref) - 1.0)


def ca_cfar_statistics(cut_rows, neighbors, config: CaCfarConfig):
    """Per-bin CUT power and reference-cell mean.

    ``cut_rows`` is ``(..., N)`` and ``neighbors`` ``(..., R, N)`` in range order.
    """
    x = np.asarray(cut_rows)
    nb = np.asarray(neighbors)
    R = nb.shape[-2]
    if R % 2 or R < config.rows_needed:
        raise ValueError(f"need an even number of at least {config.rows_needed} neighbor rows, got {R}")
    w = doppler_window(x.shape[-1], config)
    half, g, k = R // 2, config.guard, config.n_ref // 2
    ref = np.concatenate([nb[..., half - g - k:half - g, :], nb[..., half + g:half + g + k, :]], axis=-2)
    cut_img = dft_image(w * x)
    ref_img = dft_image(w * ref)
    stat = cut_img.real ** 2 + cut_img.imag ** 2
    mean = np.mean(ref_img.real ** 2 + ref_img.imag ** 2, axis=-2)
    return stat, mean


def ca_cfar_baseline(cpi_row, neighbors, config: CaCfarConfig = CaCfarConfig(), pfa: float = 1e-6):
    """One ``DetectorOutcome`` per Doppler bin of a single CUT row."""
    stat, mean = ca_cfar_statistics(cpi_row, neighbors, config)
    thr = ca_cfar_scale(pfa, config.n_ref) * mean
    return [DetectorOutcome(float(s), float(t), "ca_cfar", config.n_ref) for s, t in zip(stat, thr)]
