"""Named experiment runners and CSV emission."""
from __future__ import annotations

import csv
import io
import math
import os
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, serialize
from .load import LoadParams, load_gain
from .montecarlo import DETECTORS, binomial_halfwidth, false_alarm_rate, monte_carlo_curve
from .performance import (amf_alpha, ddl_output_sdr, glr_alpha, output_sdr, pd_amf, pd_glr, pd_optimum,
                          pd_rodi_glr)
from .rptd import peak_bin, rptd_set
from .signal_model import ClutterComponent, Scenario, clutter_covariance, steering_vector
from .threshold_fit import fit_threshold_approx

__all__ = ["run_experiment", "experiment_rows", "format_csv", "analytic_pd"]

CURVE_HEADER = ("abscissa", "detector", "p_d", "ci_halfwidth")
HEADERS = {
    "thresholds": ("n", "K", "pfa", "glr_alpha", "glr_threshold", "amf_alpha", "amf_threshold"),
    "fit_thresholds": ("n", "K", "c1", "c2", "c3", "minimax_err_pct", "max_pfa_err_pct"),
    "load_gain": ("n", "N", "cl_td", "cl_ddl", "gain_exact", "gain_floor"),
    "fa_validate": ("center_freq", "spread", "cnr_db", "detector", "pfa", "empirical_pfa", "sigma", "z_score"),
}


def _sigma0(sc: Scenario):
    return clutter_covariance(sc.clutter, sc.cnr_db if sc.clutter else -math.inf, sc.N)


def analytic_pd(sc: Scenario, detector: str) -> float:
    """Known-Doppler closed-form P_D of ``optimum``, ``ddl_amf`` or ``ddl_glr``."""
    sigma0 = _sigma0(sc)
    if detector == "optimum":
        return pd_optimum(sc.pfa, output_sdr(steering_vector(sc.target_freq, sc.N), sigma0, sc.input_sdr))
    gamma = ddl_output_sdr(sc.target_freq, rptd_set(sc.target_freq, sc.N, sc.n).bins, sigma0, sc.input_sdr)
    if detector == "ddl_amf":
        return pd_amf(sc.pfa, gamma, sc.K, sc.n)
    if detector == "ddl_glr":
        return pd_glr(sc.pfa, gamma, sc.K, sc.n)
    raise ValueError(f"no closed form for detector {detector!r}")


def _point(sc: Scenario, abscissa: str, x, k_factor):
    if abscissa == "F":
        return sc.replace(target_freq=x)
    if abscissa == "n":
        return sc.replace(n=x, K=sc.K if k_factor is None else k_factor * x)
    return sc.with_sdr_db(x)


def _curve_rows(cfg: ExperimentConfig):
    abscissa = {"pd_vs_f": "F", "pd_vs_n": "n", "pd_vs_sdr": "SDR"}[cfg.experiment]
    mc = [d for d in cfg.detectors if d in DETECTORS]
    rows = []
    if mc:
        curve = monte_carlo_curve(cfg.scenario, abscissa, cfg.sweep, cfg.trials, cfg.seed, mc, cfg.protocol,
                                  cfg.cfar, cfg.k_factor, cfg.gate_cells)
        rows.extend(curve.rows)
    for d in cfg.detectors:
        if d in DETECTORS:
            continue
        base = d.removesuffix("_analytic")
        for x in cfg.sweep:
            rows.append((x, d, analytic_pd(_point(cfg.scenario, abscissa, x, cfg.k_factor), base), 0.0))
    order = {x: i for i, x in enumerate(cfg.sweep)}
    rows.sort(key=lambda r: order[r[0]])
    return CURVE_HEADER, rows


def _threshold_rows(cfg):
    sc = cfg.scenario
    rows = []
    for pfa in cfg.sweep:
        ga, aa = glr_alpha(pfa, sc.K, sc.n), amf_alpha(pfa, sc.K, sc.n)
        rows.append((sc.n, sc.K, pfa, ga, sc.K * ga / (1 + ga), aa, sc.K * aa))
    return HEADERS["thresholds"], rows


def _fit_rows(cfg):
    rows = []
    for n, K in cfg.sweep:
        f = fit_threshold_approx(n, K)
        rows.append((n, K, *f.c, 100 * f.minimax_rel_err, 100 * f.max_pfa_rel_err))
    return HEADERS["fit_thresholds"], rows


def _load_rows(cfg):
    rows = []
    for n, N in cfg.sweep:
        r = load_gain(LoadParams(N=N, n=n, M=cfg.load_m, gamma_percent=cfg.load_gamma))
        rows.append((n, N, r.cl_td, r.cl_ddl, r.gain, r.gain_floor))
    return HEADERS["load_gain"], rows


def _fa_rows(cfg):
    dets = [d for d in cfg.detectors if d in DETECTORS and d != "optimum"] or ["ddl_amf", "ddl_glr"]
    rows = []
    for k, (fc, spread, cnr) in enumerate(cfg.sweep):
        sc = cfg.scenario.replace(clutter=(ClutterComponent(fc, spread, 1.0),), cnr_db=cnr)
        rates = false_alarm_rate(sc, cfg.trials, cfg.seed + k, dets, cfg.cfar)
        sigma = math.sqrt(sc.pfa * (1 - sc.pfa) / cfg.trials)
        for d in dets:
            rows.append((fc, spread, cnr, d, sc.pfa, rates[d], sigma, (rates[d] - sc.pfa) / sigma))
    return HEADERS["fa_validate"], rows


def _rodi_rows(cfg):
    sc = cfg.scenario
    sigma0 = _sigma0(sc)
    rows = []
    for F in cfg.sweep:
        d = peak_bin(F, sc.N)
        block = next((b for b in cfg.rodi if d in b), None)
        if block is not None:
            rows.append((F, "rodi_glr", pd_rodi_glr(F, block, sigma0, sc.input_sdr, sc.pfa, sc.K), 0.0))
        n = len(block) if block is not None else sc.n
        gamma = ddl_output_sdr(F, rptd_set(F, sc.N, n).bins, sigma0, sc.input_sdr)
        rows.append((F, "ddl_glr", pd_glr(sc.pfa, gamma, sc.K, n), 0.0))
        rows.append((F, "optimum", pd_optimum(sc.pfa, output_sdr(steering_vector(F, sc.N), sigma0,
                                                                  sc.input_sdr)), 0.0))
    return CURVE_HEADER, rows


def experiment_rows(cfg: ExperimentConfig):
    """``(header, rows)`` of one experiment."""
    if cfg.experiment in ("pd_vs_f", "pd_vs_n", "pd_vs_sdr"):
        return _curve_rows(cfg)
    return {"thresholds": _threshold_rows, "fit_thresholds": _fit_rows, "load_gain": _load_rows,
            "fa_validate": _fa_rows, "rodi_compare": _rodi_rows}[cfg.experiment](cfg)


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(cfg: ExperimentConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# ddl-radar {__version__}\n")
    buf.write(f"# experiment: {cfg.experiment}\n# seed: {cfg.seed}\n# trials: {cfg.trials}\n")
    for line in serialize(cfg).splitlines():
        buf.write(f"# config: {line}\n" if line else "#\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, out_dir=".") -> Path:
    """Run ``cfg`` and write its CSV into ``out_dir``; returns the file path."""
    header, rows = experiment_rows(cfg)
    text = format_csv(cfg, header, rows)
    path = Path(out_dir) / cfg.output_name
    os.makedirs(path.parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
