"""Adaptive and clairvoyant detection statistics.

All statistic functions broadcast over leading axes: vectors are ``(..., d)``
and covariances ``(..., d, d)``. Covariances are never inverted explicitly;
quadratic forms are evaluated through a Cholesky whitening.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .doppler import ddl_extract, dft_image
from .rptd import RptdSet
from .signal_model import steering_vector

__all__ = [
    "DetectorOutcome",
    "sample_covariance",
    "whiten",
    "optimum_statistic",
    "optimum_threshold",
    "amf_statistic",
    "glr_statistic",
    "ddl_steering",
    "ddl_amf_detect",
    "ddl_glr_detect",
    "td_amf_detect",
    "td_glr_detect",
    "rodi_glr_bank",
]


@dataclass(frozen=True)
class DetectorOutcome:
    statistic: float
    threshold: float
    detector_id: str
    order: int

    @property
    def decision(self) -> bool:
        return self.statistic >= self.threshold


def sample_covariance(vectors) -> np.ndarray:
    """``(1/K) sum v v^H`` over the second-to-last axis of ``vectors`` (``(..., K, d)``)."""
    v = np.asarray(vectors)
    if v.ndim < 2:
        raise ValueError("expected a stack of vectors with shape (..., K, d)")
    K, d = v.shape[-2:]
    if K <= d:
        raise ValueError(f"sample covariance of {K} vectors of length {d} is singular (need K > d)")
    R = np.einsum("...ki,...kj->...ij", v, v.conj()) / K
    return 0.5 * (R + R.conj().swapaxes(-1, -2))


def whiten(cov, *vectors):
    """Return ``L^{-1} v`` for each vector, where ``cov = L L^H``."""
    cov = np.asarray(cov)
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance is singular or not positive definite") from exc
    stacked = np.stack(np.broadcast_arrays(*vectors), axis=-1)
    out = np.linalg.solve(L, stacked)
    return tuple(out[..., k] for k in range(len(vectors)))


def _energy(a):
    return np.sum(a.real ** 2 + a.imag ** 2, axis=-1)


def _check_steering(t):
    if np.any(_energy(np.asarray(t)) == 0):
        raise ValueError("steering vector must be nonzero")


def optimum_statistic(x, s, sigma0):
    """``|s^H sigma0^{-1} x|^2`` for a known (normalized) covariance."""
    a, b = whiten(sigma0, s, x)
    return np.abs(np.sum(a.conj() * b, axis=-1)) ** 2


def optimum_threshold(pfa: float, s, sigma0, power: float = 1.0) -> float:
    """Threshold on ``optimum_statistic`` for data of covariance ``power * sigma0``."""
    (a,) = whiten(sigma0, s)
    return float(-math.log(pfa) * power * _energy(a))


def amf_statistic(y, t, cov):
    """``|t^H R^{-1} y|^2 / (t^H R^{-1} t)``."""
    _check_steering(t)
    a, b = whiten(cov, t, y)
    return np.abs(np.sum(a.conj() * b, axis=-1)) ** 2 / _energy(a)


def glr_statistic(y, t, cov, K):
    """AMF statistic scaled by ``1 / (1 + y^H R^{-1} y / K)``."""
    _check_steering(t)
    if K <= 0:
        raise ValueError("K must be positive")
    a, b = whiten(cov, t, y)
    amf = np.abs(np.sum(a.conj() * b, axis=-1)) ** 2 / _energy(a)
    return amf / (1.0 + _energy(b) / K)


def ddl_steering(freq: float, rptd: RptdSet, N: int) -> np.ndarray:
    return ddl_extract(dft_image(steering_vector(freq, N)), rptd.bins)


def _ddl_inputs(cut_row, training_rows, rptd, freq_est):
    cut_row = np.asarray(cut_row)
    N = cut_row.shape[-1]
    y = ddl_extract(dft_image(cut_row), rptd.bins)
    train = ddl_extract(dft_image(np.asarray(training_rows)), rptd.bins)
    return y, ddl_steering(freq_est, rptd, N), sample_covariance(train), train.shape[-2]


def ddl_amf_detect(cut_row, training_rows, rptd: RptdSet, freq_est: float, threshold: float) -> DetectorOutcome:
    """DDL-AMF test of one time-domain CUT row against time-domain training rows."""
    y, t, R, _ = _ddl_inputs(cut_row, training_rows, rptd, freq_est)
    return DetectorOutcome(float(amf_statistic(y, t, R)), threshold, "ddl_amf", rptd.order)


def ddl_glr_detect(cut_row, training_rows, rptd: RptdSet, freq_est: float, threshold: float) -> DetectorOutcome:
    y, t, R, K = _ddl_inputs(cut_row, training_rows, rptd, freq_est)
    return DetectorOutcome(float(glr_statistic(y, t, R, K)), threshold, "ddl_glr", rptd.order)


def td_amf_detect(cut_row, training_rows, freq: float, threshold: float) -> DetectorOutcome:
    x = np.asarray(cut_row)
    s = steering_vector(freq, x.shape[-1])
    return DetectorOutcome(float(amf_statistic(x, s, sample_covariance(training_rows))), threshold,
                           "td_amf", x.shape[-1])


def td_glr_detect(cut_row, training_rows, freq: float, threshold: float) -> DetectorOutcome:
    x = np.asarray(cut_row)
    s = steering_vector(freq, x.shape[-1])
    K = np.asarray(training_rows).shape[-2]
    return DetectorOutcome(float(glr_statistic(x, s, sample_covariance(training_rows), K)), threshold,
                           "td_glr", x.shape[-1])


def rodi_glr_bank(cut_ddl, training_ddl) -> np.ndarray:
    """GLR statistics of a RODI bank, one per bin, with one-hot DDL steering.

    ``cut_ddl`` holds the CUT samples on the RODI bins and ``training_ddl``
    the ``K x n_l`` training samples on the same bins.
    """
    y = np.asarray(cut_ddl)
    train = np.asarray(training_ddl)
    K = train.shape[-2]
    R = sample_covariance(train)
    try:
        L = np.linalg.cholesky(R)
    except np.linalg.LinAlgError as exc:
        raise ValueError("RODI sample covariance is singular") from exc
    # R^{-1} y and diag(R^{-1}) from the triangular factor
    b = np.linalg.solve(L, y[..., None])[..., 0]
    Rinv_y = np.linalg.solve(L.conj().swapaxes(-1, -2), b[..., None])[..., 0]
    Linv = np.linalg.solve(L, np.broadcast_to(np.eye(L.shape[-1]), L.shape))
    diag = np.sum(np.abs(Linv) ** 2, axis=-2)
    return np.abs(Rinv_y) ** 2 / diag / (1.0 + _energy(b)[..., None] / K)
