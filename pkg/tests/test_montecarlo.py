import math

import numpy as np
import pytest

from ddl_radar.doppler import dft_image, dft_matrix
from ddl_radar.experiments import analytic_pd
from ddl_radar.montecarlo import (binomial_halfwidth, count_detections, false_alarm_rate, monte_carlo_curve)
from ddl_radar.performance import output_sdr, pd_amf, pd_glr
from ddl_radar.rptd import rptd_set
from ddl_radar.signal_model import (ClutterComponent, Scenario, _scenario_sigma, clutter_covariance,
                                    complex_normal, covariance_sqrt, steering_vector)


def within(p_hat, p, trials, k=4.0):
    return abs(p_hat - p) <= k * math.sqrt(max(p * (1 - p), 1e-6) / trials)


SMALL = Scenario(N=16, n=4, K=20, K_T=80, cnr_db=40, snr_db=3, pfa=1e-4, target_freq=0.3,
                 clutter=(ClutterComponent(0.0, 0.01),))


def test_deterministic_per_seed():
    a = count_detections(SMALL, 700, seed=3)
    assert a == count_detections(SMALL, 700, seed=3)
    assert a != count_detections(SMALL, 700, seed=4)


@pytest.mark.parametrize("det", ["ddl_amf", "ddl_glr", "optimum"])
def test_known_doppler_matches_closed_form(det):
    trials = 6000
    p_hat = count_detections(SMALL, trials, seed=21, detectors=(det,))[det] / trials
    p = analytic_pd(SMALL, det)
    assert 0.2 < p < 0.95
    assert within(p_hat, p, trials)


@pytest.mark.parametrize("det,fn", [("td_amf", pd_amf), ("td_glr", pd_glr)])
def test_time_domain_matches_closed_form(det, fn):
    trials = 4000
    s0 = clutter_covariance(SMALL.clutter, SMALL.cnr_db, SMALL.N)
    g = output_sdr(steering_vector(SMALL.target_freq, SMALL.N), s0, SMALL.input_sdr)
    p = fn(SMALL.pfa, g, SMALL.K_T, SMALL.N)
    p_hat = count_detections(SMALL, trials, seed=22, detectors=(det,))[det] / trials
    assert within(p_hat, p, trials)


def test_strong_target_saturates():
    curve = monte_carlo_curve(Scenario(snr_db=40), "F", [-0.3, 0.2], 200, seed=1)
    assert all(p >= 0.99 for _, _, p, _ in curve.rows)


def test_unknown_doppler_white_noise():
    sc = Scenario(N=32, n=4, clutter=(), snr_db=25, pfa=1e-6, target_freq=0.137, doppler_known=False)
    counts = count_detections(sc, 500, seed=2, detectors=("ddl_amf", "ddl_glr"))
    assert counts["ddl_amf"] >= 480


def test_dominant_protocol_follows_strongest_peak():
    # without clutter the target is the dominant peak, so both protocols agree
    sc = Scenario(N=32, n=4, clutter=(), snr_db=25, pfa=1e-6, target_freq=-0.21, doppler_known=False)
    a = count_detections(sc, 300, seed=5, protocol="dominant")
    b = count_detections(sc, 300, seed=5, protocol="nearest")
    assert a == b


def test_cell_gate_only_removes_detections():
    sc = Scenario(doppler_known=False)
    a = count_detections(sc, 500, seed=8, detectors=("ddl_amf",))
    b = count_detections(sc, 500, seed=8, detectors=("ddl_amf",), gate_cells=True)
    assert b["ddl_amf"] <= a["ddl_amf"]


def test_curve_rows_and_halfwidth():
    curve = monte_carlo_curve(SMALL, "n", [2, 4], 100, seed=0, detectors=("ddl_amf",))
    assert [r[0] for r in curve.rows] == [2, 4]
    for _, det, p, ci in curve.rows:
        assert det == "ddl_amf"
        assert ci == pytest.approx(binomial_halfwidth(p, 100))
    x, p = curve.series("ddl_amf")
    assert x.tolist() == [2, 4]
    with pytest.raises(KeyError):
        curve.series("optimum")


def test_sdr_sweep_is_monotone_in_expectation():
    curve = monte_carlo_curve(SMALL, "SDR", [-50, -40, -30], 400, seed=0, detectors=("optimum",))
    _, p = curve.series("optimum")
    assert p[0] < p[1] < p[2] or p[2] == 1.0


@pytest.mark.parametrize("kw", [dict(trials=50), dict(values=[]), dict(abscissa="G")])
def test_curve_rejects_bad_input(kw):
    args = dict(abscissa="F", values=[0.1], trials=200)
    args.update(kw)
    with pytest.raises(ValueError):
        monte_carlo_curve(SMALL, args["abscissa"], args["values"], args["trials"])


def test_unknown_detector_rejected():
    with pytest.raises(ValueError):
        count_detections(SMALL, 100, detectors=("kelly",))


def test_projection_equals_time_domain_pipeline(rng):
    sc = Scenario()
    bins = np.asarray(rptd_set(sc.target_freq, sc.N, sc.n).bins) - 1
    L = covariance_sqrt(_scenario_sigma(sc))
    g = complex_normal(rng, (10, sc.N))
    A = (dft_matrix(sc.N) @ L)[bins]
    np.testing.assert_allclose(g @ A.T, dft_image(g @ L.T)[:, bins], rtol=1e-10, atol=1e-6)


def test_false_alarm_paths_agree_statistically():
    sc = SMALL.replace(pfa=1e-2)
    trials = 20_000
    fast = false_alarm_rate(sc, trials, seed=1)
    slow = false_alarm_rate(sc, trials, seed=1, detectors=("ddl_amf", "ddl_glr", "td_amf"))
    for rates in (fast, slow):
        for p in rates.values():
            assert within(p, 1e-2, trials, k=3.5)
