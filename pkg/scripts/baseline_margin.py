"""Closed-form DDL-AMF vs windowed-FFT CA-CFAR P_D across Doppler.

For Gaussian disturbance with target-free reference rows of the same
covariance, the CA-CFAR P_D of a Swerling I target is
(1 + scale / (n_ref (1 + SINR)))^(-n_ref) with SINR the filter-bin
signal-to-disturbance ratio, so no simulation is needed.
"""
import numpy as np

from ddl_radar.cfar import CaCfarConfig, ca_cfar_scale, doppler_window
from ddl_radar.doppler import dft_matrix
from ddl_radar.experiments import analytic_pd
from ddl_radar.rptd import peak_bin
from ddl_radar.signal_model import Scenario, clutter_covariance, steering_vector


def main():
    sc, cfg = Scenario(), CaCfarConfig()
    s0 = clutter_covariance(sc.clutter, sc.cnr_db, sc.N)
    w, F = doppler_window(sc.N, cfg), dft_matrix(sc.N)
    scale = ca_cfar_scale(sc.pfa, cfg.n_ref)
    print(f"{'F':>6} {'DDL-AMF':>8} {'CA-CFAR':>8}")
    for f in np.arange(0.0, 0.46, 0.02):
        h = F[peak_bin(f, sc.N) - 1] * w
        sinr = sc.input_sdr * abs(h @ steering_vector(f, sc.N)) ** 2 / (h.conj() @ s0 @ h).real
        cfar = (1 + scale / (cfg.n_ref * (1 + sinr))) ** (-cfg.n_ref)
        print(f"{f:6.2f} {analytic_pd(sc.replace(target_freq=f), 'ddl_amf'):8.4f} {cfar:8.4f}")


if __name__ == "__main__":
    main()
