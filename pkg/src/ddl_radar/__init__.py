"""Doppler-domain localized adaptive detection for pulse-Doppler radar."""

__version__ = "0.1.0"

from .signal_model import ClutterComponent, Scenario, clutter_covariance, steering_vector, synthesize_cpi
from .rptd import RptdSet, mld_grid, peak_bin, rptd_set
from .detectors import DetectorOutcome, amf_statistic, glr_statistic
from .performance import amf_threshold, glr_threshold, pd_amf, pd_glr, pd_optimum
from .load import LoadParams, load_gain
from .montecarlo import DetectionCurve, monte_carlo_curve

__all__ = [
    "__version__",
    "ClutterComponent",
    "Scenario",
    "clutter_covariance",
    "steering_vector",
    "synthesize_cpi",
    "RptdSet",
    "mld_grid",
    "peak_bin",
    "rptd_set",
    "DetectorOutcome",
    "amf_statistic",
    "glr_statistic",
    "amf_threshold",
    "glr_threshold",
    "pd_amf",
    "pd_glr",
    "pd_optimum",
    "LoadParams",
    "load_gain",
    "DetectionCurve",
    "monte_carlo_curve",
]
