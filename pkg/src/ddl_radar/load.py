"""Dominant per-CPI flop counts of the time-domain and DDL AMF detectors."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["LoadParams", "LoadResult", "load_gain"]


def _fft_flops(size: int) -> float:
    return 1.5 * size * math.log2(size)


@dataclass(frozen=True)
class LoadParams:
    N: int
    n: int
    M: int = 8000
    n_fft: int | None = None
    n_d: int | None = None
    gamma_percent: float = 90.0

    def __post_init__(self):
        if self.n_fft is None:
            object.__setattr__(self, "n_fft", 4 * self.N)
        if self.n_d is None:
            object.__setattr__(self, "n_d", self.N)
        if min(self.N, self.n, self.M, self.n_fft, self.n_d) <= 0 or self.gamma_percent <= 0:
            raise ValueError("load parameters must be positive")
        if self.n_fft % self.N:
            raise ValueError(f"n_fft ({self.n_fft}) must be a multiple of N ({self.N})")

    @property
    def m_r(self) -> int:
        # half-up rounding of the representative-cell count
        return math.floor(self.gamma_percent * self.M / 100.0 + 0.5)

    @property
    def n_p(self) -> int:
        return self.n_d * self.m_r


@dataclass(frozen=True)
class LoadResult:
    cl_td: float
    cl_ddl: float

    @property
    def gain(self) -> float:
        return self.cl_td / self.cl_ddl

    @property
    def gain_floor(self) -> int:
        return math.floor(self.gain)


def load_gain(p: LoadParams) -> LoadResult:
    N, n, M, m_r, n_p = p.N, p.n, p.M, p.m_r, p.n_p
    cl_td = 6 * N ** 3 * m_r + 2 * N ** 2 * n_p + m_r * _fft_flops(p.n_fft)
    cl_ddl = (n_p * (6 * n ** 3 + 2 * n ** 2) + M * _fft_flops(N) + m_r * _fft_flops(p.n_fft)
              + n_p * _fft_flops(N))
    return LoadResult(float(cl_td), float(cl_ddl))
