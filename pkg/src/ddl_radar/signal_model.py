"""Scenario description and synthesis of coherent pulse-Doppler CPI data.

Powers are expressed relative to unit thermal-noise power. Range cells are
numbered from 1, matching the Doppler-bin numbering used elsewhere in the
package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

__all__ = [
    "ClutterComponent",
    "Scenario",
    "steering_vector",
    "clutter_covariance",
    "disturbance_covariance",
    "covariance_sqrt",
    "complex_normal",
    "make_rng",
    "synthesize_cpi",
    "draw_training",
    "db_to_linear",
]

# relative eigenvalue floor used when factoring near-singular covariances
EIG_FLOOR = 1e-12


def db_to_linear(db: float) -> float:
    return 0.0 if db == -math.inf else 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ClutterComponent:
    """One Gaussian-shaped clutter spectral line.

    ``center_freq`` is the normalized Doppler of the spectrum peak,
    ``spread`` its width parameter and ``power_fraction`` the share of the
    total clutter power carried by this component.
    """

    center_freq: float = 0.0
    spread: float = 0.0025
    power_fraction: float = 1.0

    def __post_init__(self):
        if not abs(self.center_freq) < 0.5:
            raise ValueError(f"clutter center_freq must satisfy |F| < 0.5, got {self.center_freq}")
        if not self.spread > 0:
            raise ValueError(f"clutter spread must be positive, got {self.spread}")
        if not 0 < self.power_fraction <= 1:
            raise ValueError(f"clutter power_fraction must lie in (0, 1], got {self.power_fraction}")


@dataclass(frozen=True)
class Scenario:
    """Complete description of one detection experiment.

    ``target_freq`` is the true normalized Doppler of the injected target;
    ``doppler_known`` says whether the detectors are told that value or have
    to estimate it from the data.
    """

    N: int = 64
    n: int = 4
    K: int | None = None
    K_T: int | None = None
    M: int = 3
    cnr_db: float = 60.0
    snr_db: float = 15.0
    pfa: float = 1e-9
    clutter: tuple[ClutterComponent, ...] = field(default_factory=lambda: (ClutterComponent(),))
    target_freq: float = 0.25
    doppler_known: bool = True
    fft_factor: int = 4
    target_range_cell: int = 2

    def __post_init__(self):
        # K and K_T default to five times the detector order
        if self.K is None:
            object.__setattr__(self, "K", 5 * self.n)
        if self.K_T is None:
            object.__setattr__(self, "K_T", 5 * self.N)
        object.__setattr__(self, "clutter", tuple(self.clutter))
        self.validate()

    def validate(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"N must be an even integer >= 2, got {self.N}")
        if not 1 <= self.n <= self.N:
            raise ValueError(f"n must satisfy 1 <= n <= N, got n={self.n}, N={self.N}")
        if self.K <= self.n:
            raise ValueError(f"K must exceed n (K={self.K}, n={self.n})")
        if self.K_T <= self.N:
            raise ValueError(f"K_T must exceed N (K_T={self.K_T}, N={self.N})")
        if self.M < 1:
            raise ValueError(f"M must be positive, got {self.M}")
        if not 1 <= self.target_range_cell <= self.M:
            raise ValueError(f"target_range_cell must lie in [1, M], got {self.target_range_cell}")
        if not 0 < self.pfa < 1:
            raise ValueError(f"pfa must lie in (0, 1), got {self.pfa}")
        if not abs(self.target_freq) < 0.5:
            raise ValueError(f"target_freq must satisfy |F| < 0.5, got {self.target_freq}")
        if self.fft_factor < 1:
            raise ValueError(f"fft_factor must be >= 1, got {self.fft_factor}")
        if self.clutter:
            total = sum(c.power_fraction for c in self.clutter)
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"clutter power fractions must sum to 1, got {total}")

    @property
    def noise_power(self) -> float:
        return 1.0

    @property
    def clutter_power(self) -> float:
        return db_to_linear(self.cnr_db) if self.clutter else 0.0

    @property
    def signal_power(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def input_sdr(self) -> float:
        return self.signal_power / (self.clutter_power + self.noise_power)

    @property
    def input_sdr_db(self) -> float:
        return 10.0 * math.log10(self.input_sdr)

    @property
    def n_fft(self) -> int:
        return self.fft_factor * self.N

    def with_sdr_db(self, sdr_db: float) -> "Scenario":
        """Copy with the SNR chosen so that the input SDR equals ``sdr_db``."""
        total = self.clutter_power + self.noise_power
        return replace(self, snr_db=sdr_db + 10.0 * math.log10(total))

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)


def steering_vector(freq: float, N: int) -> np.ndarray:
    if not abs(freq) < 0.5:
        raise ValueError(f"|F| must be < 0.5 (Doppler ambiguity), got {freq}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return np.exp(2j * np.pi * freq * np.arange(N))


def _component_matrix(comp: ClutterComponent, N: int) -> np.ndarray:
    lag = np.arange(N)[:, None] - np.arange(N)[None, :]
    return np.exp(-2.0 * (np.pi * comp.spread * lag) ** 2 + 2j * np.pi * comp.center_freq * lag)


def disturbance_covariance(components: Sequence[ClutterComponent], cnr_db: float, N: int,
                           noise_power: float = 1.0) -> np.ndarray:
    """Unnormalized clutter-plus-noise covariance ``P_c C_0 + P_n I``."""
    clutter_power = db_to_linear(cnr_db) * noise_power
    sigma = noise_power * np.eye(N, dtype=complex)
    if clutter_power > 0:
        if not components:
            raise ValueError("clutter mixture is empty")
        c0 = sum(c.power_fraction * _component_matrix(c, N) for c in components)
        sigma = sigma + clutter_power * c0
    return sigma


def clutter_covariance(components: Sequence[ClutterComponent], cnr_db: float, N: int) -> np.ndarray:
    """Normalized disturbance covariance (unit diagonal)."""
    if not components and db_to_linear(cnr_db) > 0:
        raise ValueError("clutter mixture is empty")
    sigma = disturbance_covariance(components, cnr_db, N)
    sigma0 = sigma / (db_to_linear(cnr_db) + 1.0)
    sigma0 = 0.5 * (sigma0 + sigma0.conj().T)
    eig = np.linalg.eigvalsh(sigma0)
    if eig[0] <= 0:
        raise ValueError(f"covariance is not positive definite (smallest eigenvalue {eig[0]:.3e})")
    return sigma0


def covariance_sqrt(sigma: np.ndarray) -> np.ndarray:
    """Square-root factor ``L`` with ``L L^H = sigma`` (eigenvalues clamped)."""
    sigma = np.asarray(sigma)
    if not np.allclose(sigma, sigma.conj().T, rtol=0, atol=1e-10 * np.abs(sigma).max()):
        raise ValueError("covariance must be Hermitian")
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    if w[0] < -1e-10 * w[-1]:
        raise ValueError(f"covariance is not positive semidefinite (eigenvalue {w[0]:.3e})")
    w = np.maximum(w, EIG_FLOOR * w[-1])
    return v * np.sqrt(w)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard circular complex Gaussian samples (unit variance)."""
    out = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    out *= math.sqrt(0.5)
    return out


def _scenario_sigma(scenario: Scenario) -> np.ndarray:
    return disturbance_covariance(scenario.clutter, scenario.cnr_db if scenario.clutter else -math.inf,
                                  scenario.N, scenario.noise_power)


def synthesize_cpi(scenario: Scenario, hypothesis: str = "H0", rng_seed=0) -> np.ndarray:
    """Range-pulse matrix ``M x N`` for one CPI.

    Every row is an independent colored Gaussian disturbance draw; under
    ``"H1"`` the target row also carries a Swerling I echo whose complex
    amplitude has variance equal to the signal power.
    """
    if hypothesis not in ("H0", "H1"):
        raise ValueError(f"hypothesis must be 'H0' or 'H1', got {hypothesis!r}")
    rng = make_rng(rng_seed)
    L = covariance_sqrt(_scenario_sigma(scenario))
    X = complex_normal(rng, (scenario.M, scenario.N)) @ L.T
    if hypothesis == "H1":
        amp = math.sqrt(scenario.signal_power) * complex_normal(rng, ())
        X[scenario.target_range_cell - 1] += amp * steering_vector(scenario.target_freq, scenario.N)
    return X


def draw_training(sigma: np.ndarray, count: int, rng_seed=0) -> np.ndarray:
    """``count`` target-free rows with covariance ``sigma`` (shape ``count x N``)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = make_rng(rng_seed)
    L = covariance_sqrt(sigma)
    return complex_normal(rng, (count, L.shape[0])) @ L.T
