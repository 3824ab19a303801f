"""Closed-form and quadrature performance of optimum, GLR and AMF detectors.

Thresholds follow the sample-covariance normalization ``(1/K) sum y y^H``:
the GLR threshold is ``K * xi`` and the AMF threshold ``K * alpha`` where
``xi`` and ``alpha`` are the normalized threshold factors.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, optimize, special

from .doppler import ddl_extract, ddl_extract_matrix, dft_image, dft_image_covariance
from .signal_model import steering_vector

__all__ = [
    "beta_pdf",
    "log_beta_pdf",
    "glr_alpha",
    "glr_threshold",
    "glr_pfa",
    "amf_pfa",
    "amf_alpha",
    "amf_threshold",
    "pd_optimum",
    "output_sdr",
    "ddl_output_sdr",
    "pd_glr",
    "pd_amf",
    "pd_rodi_glr",
]

PFA_RTOL = 1e-12
PD_RTOL = 1e-12
ALPHA_RTOL = 1e-12


def log_beta_pdf(x, a, b):
    x = np.asarray(x, dtype=float)
    return (special.gammaln(a + b) - special.gammaln(a) - special.gammaln(b)
            + special.xlogy(a - 1, x) + special.xlog1py(b - 1, -x))


def beta_pdf(x, a, b):
    """Central Beta density ``(a+b-1)!/((a-1)!(b-1)!) x^(a-1) (1-x)^(b-1)``."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("beta_pdf is defined on [0, 1]")
    out = np.exp(log_beta_pdf(x, a, b))
    return out if out.ndim else float(out)


def _log_beta_scalar(a, b):
    """Scalar log Beta density with exact endpoint limits."""
    logc = special.gammaln(a + b) - special.gammaln(a) - special.gammaln(b)

    def logf(r):
        if r <= 0.0:
            return logc if a == 1 else -math.inf
        if r >= 1.0:
            return logc if b == 1 else -math.inf
        return logc + (a - 1) * math.log(r) + (b - 1) * math.log1p(-r)

    return logf


def _integrate_log(logf, rtol):
    """Integral over [0, 1] of ``exp(logf)``, accurate relative to its size."""
    res = optimize.minimize_scalar(lambda r: -logf(r), bounds=(0.0, 1.0), method="bounded",
                                   options={"xatol": 1e-12})
    peak = float(res.x)
    scale = logf(peak)
    if not np.isfinite(scale):
        raise ArithmeticError("integrand vanishes everywhere")
    f = lambda r: math.exp(logf(r) - scale)
    points = [p for p in (peak,) if 0.0 < p < 1.0]
    val, err, *info = integrate.quad(f, 0.0, 1.0, points=points or None, epsabs=0.0, epsrel=rtol,
                                     limit=400, full_output=1)
    if len(info) > 1 and info[0]["last"] >= 400:
        raise ArithmeticError(f"quadrature did not converge (estimated error {err:.2e})")
    return val * math.exp(scale)


def _check_orders(K, n):
    if n < 2:
        raise ValueError(f"n must be >= 2 for the Beta-mixture formulas, got {n}")
    if K <= n - 1:
        raise ValueError(f"K must exceed n - 1 (K={K}, n={n})")
    return K - n + 1


def glr_alpha(pfa: float, K: int, n: int) -> float:
    Q = K - n + 1
    if Q <= 0:
        raise ValueError(f"K - n + 1 must be positive (K={K}, n={n})")
    if not 0 < pfa <= 1:
        raise ValueError(f"pfa must lie in (0, 1], got {pfa}")
    return math.expm1(-math.log(pfa) / Q)


def glr_threshold(pfa: float, K: int, n: int) -> float:
    """GLR threshold ``K * xi`` with ``xi = alpha / (1 + alpha)``."""
    a = glr_alpha(pfa, K, n)
    return K * a / (1.0 + a)


def glr_pfa(alpha: float, K: int, n: int) -> float:
    return (1.0 + alpha) ** (-(K - n + 1))


def amf_pfa(alpha: float, K: int, n: int) -> float:
    """False-alarm probability of the AMF for normalized threshold ``alpha``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    Q = _check_orders(K, n)
    if alpha == 0:
        return 1.0
    logb = _log_beta_scalar(Q + 1, n - 1)
    logf = lambda r: logb(r) - Q * math.log1p(alpha * r)
    return _integrate_log(logf, PFA_RTOL)


def amf_alpha(pfa: float, K: int, n: int) -> float:
    """Normalized AMF threshold factor solving ``amf_pfa(alpha) = pfa``."""
    if not 0 < pfa <= 1:
        raise ValueError(f"pfa must lie in (0, 1], got {pfa}")
    if pfa == 1:
        return 0.0
    target = math.log(pfa)
    g = lambda a: math.log(amf_pfa(a, K, n)) - target
    hi = 10.0 * glr_alpha(pfa, K, n)
    for _ in range(20):
        if g(hi) < 0:
            break
        hi *= 10.0
    else:
        raise ArithmeticError(f"no bracket for pfa={pfa}: g(0)={-target:.3e}, g({hi:.3e})={g(hi):.3e}")
    return optimize.brentq(g, 0.0, hi, xtol=1e-300, rtol=ALPHA_RTOL, maxiter=500)


def amf_threshold(pfa: float, K: int, n: int) -> float:
    return K * amf_alpha(pfa, K, n)


def pd_optimum(pfa: float, gamma: float) -> float:
    """Swerling I detection probability of the clairvoyant matched filter."""
    if not 0 < pfa < 1:
        raise ValueError(f"pfa must lie in (0, 1), got {pfa}")
    if gamma < 0:
        raise ValueError("output SDR must be nonnegative")
    return pfa ** (1.0 / (1.0 + gamma))


def output_sdr(steering, cov0, input_sdr: float) -> float:
    """Output SDR ``input_sdr * t^H cov0^{-1} t`` of the optimum filter."""
    t = np.asarray(steering)
    if not np.any(t):
        raise ValueError("steering vector must be nonzero")
    try:
        L = np.linalg.cholesky(np.asarray(cov0))
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance is singular or not positive definite") from exc
    a = np.linalg.solve(L, t)
    return float(input_sdr * np.sum(a.real ** 2 + a.imag ** 2))


def ddl_output_sdr(freq: float, bins, sigma0, input_sdr: float) -> float:
    """Output SDR of the optimum DDL filter on ``bins`` for a tone at ``freq``."""
    sigma0 = np.asarray(sigma0)
    N = sigma0.shape[-1]
    t = ddl_extract(dft_image(steering_vector(freq, N)), bins)
    phi0 = ddl_extract_matrix(dft_image_covariance(sigma0), bins)
    return output_sdr(t, phi0, input_sdr)


def _pd(pfa, gamma, K, n, alpha, amf):
    Q = _check_orders(K, n)
    if gamma < 0:
        raise ValueError("output SDR must be nonnegative")
    logb = _log_beta_scalar(Q + 1, n - 1)
    if amf:
        logf = lambda r: logb(r) + Q * (math.log1p(gamma * r) - math.log1p((alpha + gamma) * r))
    else:
        logf = lambda r: logb(r) + Q * (math.log1p(gamma * r) - math.log1p(alpha + gamma * r))
    return _integrate_log(logf, PD_RTOL)


def pd_glr(pfa: float, gamma: float, K: int, n: int) -> float:
    """Swerling I detection probability of the (DDL-)GLR detector."""
    return _pd(pfa, gamma, K, n, glr_alpha(pfa, K, n), amf=False)


def pd_amf(pfa: float, gamma: float, K: int, n: int) -> float:
    """Swerling I detection probability of the (DDL-)AMF detector."""
    return _pd(pfa, gamma, K, n, amf_alpha(pfa, K, n), amf=True)


def pd_rodi_glr(freq: float, rodi_bins, sigma0, input_sdr: float, pfa: float, K: int) -> float:
    """Detection probability of the GLR applied on a fixed block of bins.

    The output SDR is that of a tone at ``freq`` restricted to ``rodi_bins``,
    so an off-grid tone whose energy straddles the block edge loses P_D.
    """
    bins = list(rodi_bins)
    return pd_glr(pfa, ddl_output_sdr(freq, bins, sigma0, input_sdr), K, len(bins))
