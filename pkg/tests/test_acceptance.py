"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary; running this file directly prints the same lines.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate

sys.path.insert(0, str(Path(__file__).resolve().parent))

from reference_values import OPTIMUM_PD, REFERENCE_FIT, REFERENCE_GAINS, RODI_ANCHORS  # noqa: E402

from ddl_radar.cfar import CaCfarConfig  # noqa: E402
from ddl_radar.detectors import (amf_statistic, ddl_amf_detect, ddl_glr_detect, glr_statistic,  # noqa: E402
                                 sample_covariance, td_amf_detect, td_glr_detect)
from ddl_radar.doppler import find_circular_peaks  # noqa: E402
from ddl_radar.load import LoadParams, load_gain  # noqa: E402
from ddl_radar.montecarlo import false_alarm_rate, monte_carlo_curve  # noqa: E402
from ddl_radar.performance import (amf_alpha, amf_pfa, beta_pdf, glr_alpha, glr_pfa, output_sdr,  # noqa: E402
                                   pd_optimum, pd_rodi_glr)
from ddl_radar.rptd import captured_power, rptd_set  # noqa: E402
from ddl_radar.signal_model import (ClutterComponent, Scenario, clutter_covariance, complex_normal,  # noqa: E402
                                    disturbance_covariance, draw_training, steering_vector)
from ddl_radar.threshold_fit import fit_threshold_approx  # noqa: E402

try:
    from conftest import ACCEPTANCE_RESULTS
except ImportError:  # pragma: no cover - direct execution without pytest
    ACCEPTANCE_RESULTS = {}


def record(k: int, ok: bool, detail: str):
    ACCEPTANCE_RESULTS[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_load_gain_table():
    got = {nN: load_gain(LoadParams(N=nN[1], n=nN[0], M=8000, gamma_percent=90)).gain_floor
           for nN in REFERENCE_GAINS}
    wrong = {k: v for k, v in got.items() if v != REFERENCE_GAINS[k]}
    record(1, not wrong, f"floored gains {[got[k] for k in sorted(got)]}" + (f", mismatches {wrong}" if wrong else ""))


def test_criterion_2_threshold_fit():
    parts, ok = [], True
    for (n, K), (err_ref, pfa_ref, *_) in REFERENCE_FIT.items():
        f = fit_threshold_approx(n, K)
        e, p = 100 * f.minimax_rel_err, 100 * f.max_pfa_rel_err
        row_ok = e <= 1.25 * err_ref and p <= 1.25 * pfa_ref
        ok &= row_ok
        parts.append(f"({n},{K}) {e:.5f}%/{p:.4f}%{'' if row_ok else ' OVER'}")
    record(2, ok, "minimax/max-P_FA errors " + ", ".join(parts))


def test_criterion_3_optimum_anchor():
    sc = Scenario(N=64, snr_db=15, cnr_db=60, pfa=1e-9, target_freq=0.25,
                  clutter=(ClutterComponent(0.0, 0.0025),))
    s0 = clutter_covariance(sc.clutter, sc.cnr_db, sc.N)
    pd = pd_optimum(sc.pfa, output_sdr(steering_vector(sc.target_freq, sc.N), s0, sc.input_sdr))
    record(3, abs(pd - OPTIMUM_PD) <= 1e-3, f"optimum P_D = {pd:.5f} (target {OPTIMUM_PD} +- 0.001)")


def test_criterion_4_rodi_anchors():
    # K = 16 training samples and P_FA = 1e-6 reproduce all four anchors (see README)
    sc = Scenario(N=64, n=4, K=16, snr_db=10, cnr_db=60, pfa=1e-6, clutter=(ClutterComponent(0.15, 0.0025),))
    s0 = clutter_covariance(sc.clutter, sc.cnr_db, sc.N)
    parts, ok = [], True
    for i, (F, bins, ref) in enumerate(RODI_ANCHORS):
        pd = pd_rodi_glr(F, bins, s0, sc.input_sdr, sc.pfa, sc.K)
        tol = 0.003 if i == 0 else 0.005
        ok &= abs(pd - ref) <= tol
        parts.append(f"{pd:.4f} (ref {ref})")
    record(4, ok, "RODI P_D " + ", ".join(parts))


FA_SETTINGS = [(0.0, 0.0025, 60.0), (0.15, 0.0025, 60.0), (-0.3, 0.01, 40.0)]


def test_criterion_5_false_alarm_rates():
    trials, pfa = 1_000_000, 1e-3
    sigma = math.sqrt(pfa * (1 - pfa) / trials)
    parts, ok = [], True
    for k, (fc, spread, cnr) in enumerate(FA_SETTINGS):
        sc = Scenario(N=64, n=4, K=20, pfa=pfa, target_freq=0.25, cnr_db=cnr,
                      clutter=(ClutterComponent(fc, spread),))
        rates = false_alarm_rate(sc, trials, seed=500 + k)
        for det, r in rates.items():
            z = (r - pfa) / sigma
            ok &= abs(z) <= 3
            parts.append(f"{det}@({fc},{spread},{cnr:g}dB) z={z:+.2f}")
    record(5, ok, "; ".join(parts))


def test_criterion_6_unknown_doppler():
    sc = Scenario(N=64, snr_db=15, cnr_db=60, pfa=1e-9, target_freq=0.25, doppler_known=False,
                  clutter=(ClutterComponent(0.0, 0.0025),))
    curve = monte_carlo_curve(sc, "n", [4, 5, 6, 7, 8], 10_000, seed=2026, detectors=("ddl_amf", "ddl_glr"))
    n, amf = curve.series("ddl_amf")
    _, glr = curve.series("ddl_glr")
    amf_loss = 1 - amf / OPTIMUM_PD
    glr_loss4 = 1 - glr[0] / OPTIMUM_PD
    ok = bool(np.all(amf_loss <= 0.07)) and glr_loss4 >= 0.30
    record(6, ok, "DDL-AMF loss " + ", ".join(f"n={a}:{100 * b:.1f}%" for a, b in zip(n, amf_loss))
           + f"; DDL-GLR loss n=4: {100 * glr_loss4:.1f}%")


def _brute_peaks(p):
    L = len(p)
    return [i + 1 for i in range(L) if p[i] > p[i - 1] and p[i] > p[(i + 1) % L]]


def test_criterion_7_invariants():
    rng = np.random.default_rng(7)
    failures = []

    # (a) full-order DDL equals time domain
    worst = 0.0
    for F in (0.13, -0.31, 0.25, 0.4999):
        N, K = 16, 40
        sig = disturbance_covariance((ClutterComponent(0.0, 0.01),), 40, N)
        train = draw_training(sig, K, rng_seed=rng)
        x = draw_training(sig, 1, rng_seed=rng)[0] + 3 * steering_vector(F, N)
        r = rptd_set(F, N, N)
        for ddl, td in ((ddl_amf_detect, td_amf_detect), (ddl_glr_detect, td_glr_detect)):
            a, b = ddl(x, train, r, F, 1.0).statistic, td(x, train, F, 1.0).statistic
            worst = max(worst, abs(a - b) / abs(b))
    if worst > 1e-10:
        failures.append(f"(a) rel {worst:.1e}")

    # (b) GLR <= AMF
    Y, T = complex_normal(rng, (2000, 5)), complex_normal(rng, (2000, 5))
    R = sample_covariance(complex_normal(rng, (2000, 12, 5)))
    if np.any(glr_statistic(Y, T, R, 12) > amf_statistic(Y, T, R)):
        failures.append("(b)")

    # (c) captured power non-decreasing in n, reaching 1
    for F in np.linspace(-0.5, 0.5, 101, endpoint=False):
        caps = [captured_power(F, rptd_set(F, 32, n).bins, 32) for n in range(1, 33)]
        if any(b < a - 1e-15 for a, b in zip(caps, caps[1:])) or abs(caps[-1] - 1) > 1e-12:
            failures.append(f"(c) F={F}")
            break

    # (d) quadrature normalization and threshold round trips
    for n, K in ((4, 12), (4, 20), (5, 25), (8, 40)):
        Q = K - n + 1
        val, _ = integrate.quad(lambda r: beta_pdf(r, Q + 1, n - 1), 0, 1, epsabs=0, epsrel=1e-13)
        if abs(val - 1) > 1e-12:
            failures.append(f"(d) beta ({n},{K})")
        for pfa in (1e-3, 1e-9, 1e-16):
            if abs(amf_pfa(amf_alpha(pfa, K, n), K, n) / pfa - 1) > 1e-9:
                failures.append(f"(d) amf round trip ({n},{K},{pfa})")
            if abs(glr_pfa(glr_alpha(pfa, K, n), K, n) / pfa - 1) > 1e-9:
                failures.append(f"(d) glr round trip ({n},{K},{pfa})")

    # (e) peak finder against brute force
    for trial in range(10_000):
        L = int(rng.integers(3, 40))
        p = rng.integers(0, 4, L).astype(float) if trial % 2 else rng.standard_normal(L)
        if find_circular_peaks(p).tolist() != _brute_peaks(p):
            failures.append("(e)")
            break

    record(7, not failures, "all invariants hold" if not failures else "failed " + ", ".join(failures))


def test_criterion_8_ca_cfar_baseline():
    sc = Scenario(N=64, n=4, K=20, K_T=320, snr_db=15, cnr_db=60, pfa=1e-9,
                  clutter=(ClutterComponent(0.0, 0.0025),))
    sweep = [round(0.07 + 0.01 * i, 2) for i in range(38)]  # 0.07 ... 0.44
    curve = monte_carlo_curve(sc, "F", sweep, 2000, seed=15, detectors=("ddl_amf", "ca_cfar"),
                              cfar=CaCfarConfig(window="taylor", nbar=5, sll_db=-35, n_ref=20, guard=1))
    _, amf = curve.series("ddl_amf")
    _, cfar = curve.series("ca_cfar")
    frac = float(np.mean(cfar < amf))
    record(8, frac >= 0.9, f"baseline below DDL-AMF at {100 * frac:.0f}% of {len(sweep)} points "
           f"(DDL-AMF min {amf.min():.3f}, baseline max {cfar.max():.3f})")


if __name__ == "__main__":
    status = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        t0 = time.time()
        try:
            fn()
        except AssertionError:
            status = 1
        print(f"    ({name}, {time.time() - t0:.1f} s)")
    sys.exit(status)
