"""Three-coefficient closed-form approximation of the DDL-AMF threshold.

The normalized threshold factor is approximated as
``alpha(P) ~ c1 * P**(-1/c2) - c3`` and the coefficients are chosen to
minimize the worst relative error over a reference grid of false-alarm
probabilities. Thresholds on the AMF statistic are ``K`` times the factor.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .performance import amf_alpha, amf_pfa

__all__ = ["ThresholdFit", "reference_pfa_grid", "fit_threshold_approx", "approx_alpha", "approx_threshold"]


@dataclass(frozen=True)
class ThresholdFit:
    n: int
    K: int
    c: tuple[float, float, float]
    minimax_rel_err: float
    max_pfa_rel_err: float
    pfa_interval: tuple[float, float]
    converged: bool = True


def reference_pfa_grid(lo_exp: int = -16, hi_exp: int = -6, per_decade: int = 5) -> np.ndarray:
    """Decade-wise log-spaced grid with shared decade endpoints merged (41 points by default)."""
    parts = [np.logspace(e, e + 1, per_decade) for e in range(lo_exp, hi_exp)]
    return np.unique(np.concatenate(parts))


def _approx(c, pfa):
    return c[0] * np.asarray(pfa) ** (-1.0 / c[1]) - c[2]


def _max_rel_err(c, pfa, exact):
    if c[1] <= 0:
        return np.inf
    return float(np.max(np.abs(exact - _approx(c, pfa)) / exact))


def fit_threshold_approx(n: int, K: int, pfa_grid=None, restarts: int = 3, seed: int = 0) -> ThresholdFit:
    """Minimax fit of the approximation on ``pfa_grid`` by Nelder-Mead descent.

    Starts from ``[1, K, 1]``; each restart begins from the best point found
    so far with a randomly perturbed simplex.
    """
    grid = reference_pfa_grid() if pfa_grid is None else np.sort(np.asarray(pfa_grid, dtype=float))
    if grid.size == 0 or grid[0] <= 0 or grid[-1] >= 1:
        raise ValueError("reference grid must be nonempty and inside (0, 1)")
    exact = np.array([amf_alpha(p, K, n) for p in grid])
    obj = lambda c: _max_rel_err(c, grid, exact)

    rng = np.random.default_rng(seed)
    best = np.array([1.0, float(K), 1.0])
    best_f = obj(best)
    converged = False
    for attempt in range(restarts + 1):
        x0 = best
        simplex = None
        if attempt:
            scale = 0.05 * np.abs(x0) + 1e-3
            simplex = x0 + np.vstack([np.zeros(3), np.diag(scale * rng.uniform(0.5, 1.5, 3))])
        res = optimize.minimize(obj, x0, method="Nelder-Mead",
                                options={"xatol": 1e-12 * max(1.0, np.abs(x0).max()), "fatol": 1e-15,
                                         "maxiter": 40000, "maxfev": 80000, "adaptive": True,
                                         "initial_simplex": simplex})
        if res.fun <= best_f:
            best, best_f = res.x, float(res.fun)
        converged = converged or bool(res.success)
    if not converged:
        warnings.warn(f"threshold fit for n={n}, K={K} stopped without meeting the simplex tolerance",
                      RuntimeWarning, stacklevel=2)
    approx = _approx(best, grid)
    pfa_err = max(abs(amf_pfa(a, K, n) / p - 1.0) for a, p in zip(approx, grid))
    return ThresholdFit(n=n, K=K, c=tuple(float(v) for v in best), minimax_rel_err=best_f,
                        max_pfa_rel_err=float(pfa_err), pfa_interval=(float(grid[0]), float(grid[-1])),
                        converged=converged)


def approx_alpha(fit: ThresholdFit, pfa: float) -> float:
    lo, hi = fit.pfa_interval
    if not lo <= pfa <= hi:
        warnings.warn(f"pfa={pfa:g} outside the fitted interval [{lo:g}, {hi:g}]", RuntimeWarning, stacklevel=2)
    a = float(_approx(fit.c, pfa))
    if a < 0:
        raise ValueError(f"approximation is negative at pfa={pfa:g}; pfa too large for this fit")
    return a


def approx_threshold(fit: ThresholdFit, pfa: float) -> float:
    """Approximate DDL-AMF threshold ``K * (c1 pfa^(-1/c2) - c3)``."""
    return fit.K * approx_alpha(fit, pfa)
