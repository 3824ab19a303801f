"""Run every shipped config (or the ones named) and write CSVs to results/.

    python3 scripts/run_configs.py                 # all configs
    python3 scripts/run_configs.py load_gain fit_thresholds --trials 500
"""
import argparse
import dataclasses
import time
from pathlib import Path

from ddl_radar.config import MONTE_CARLO, load_config
from ddl_radar.experiments import run_experiment

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("names", nargs="*", help="config stems (default: all)")
    ap.add_argument("--trials", type=int, help="override Monte Carlo trials")
    ap.add_argument("--out", default=str(ROOT / "results"))
    args = ap.parse_args()
    paths = sorted((ROOT / "configs").glob("*.ini"))
    if args.names:
        paths = [p for p in paths if p.stem in args.names]
    for p in paths:
        cfg = load_config(p)
        if args.trials and cfg.experiment in MONTE_CARLO:
            cfg = dataclasses.replace(cfg, trials=args.trials)
        if not cfg.output_path:
            cfg = dataclasses.replace(cfg, output_path=p.stem + ".csv")
        t0 = time.time()
        out = run_experiment(cfg, args.out)
        print(f"{p.name:34s} -> {out}  ({time.time() - t0:.1f} s)")


if __name__ == "__main__":
    main()
