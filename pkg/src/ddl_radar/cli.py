"""``ddl-radar`` command-line entry point."""
from __future__ import annotations

import argparse
import dataclasses
import sys

from . import __version__
from .config import ConfigError, load_config
from .experiments import run_experiment
from .load import LoadParams, load_gain
from .performance import amf_alpha, glr_alpha


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit value, got {text}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddl-radar", description="Adaptive Doppler-domain detection experiments.")
    p.add_argument("--version", action="version", version=f"ddl-radar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("config", help="INI experiment file")
    run.add_argument("--seed", type=_u64, help="override the config seed")
    run.add_argument("--trials", type=int, help="override the Monte Carlo trial count")
    run.add_argument("--out", default=".", help="output directory (default: current)")

    thr = sub.add_parser("thresholds", help="GLR and AMF thresholds for one (n, K, P_FA)")
    thr.add_argument("--n", type=int, required=True)
    thr.add_argument("--k", type=int, required=True)
    thr.add_argument("--pfa", type=float, required=True)

    lg = sub.add_parser("load-gain", help="computational-load gain table")
    lg.add_argument("--m", type=int, default=8000, help="range cells per CPI")
    lg.add_argument("--gamma", type=float, default=90.0, help="representative-cell percentage")
    return p


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if changes:
        cfg = dataclasses.replace(cfg, **changes)
    path = run_experiment(cfg, args.out)
    print(path)
    return 0


def _cmd_thresholds(args) -> int:
    n, K, pfa = args.n, args.k, args.pfa
    ga, aa = glr_alpha(pfa, K, n), amf_alpha(pfa, K, n)
    print("n,K,pfa,glr_alpha,glr_threshold,amf_alpha,amf_threshold")
    print(f"{n},{K},{pfa!r},{ga!r},{K * ga / (1 + ga)!r},{aa!r},{K * aa!r}")
    return 0


def _cmd_load_gain(args) -> int:
    print("n,N,cl_td,cl_ddl,gain_exact,gain_floor")
    for n in (4, 5, 6):
        for N in (64, 128, 256):
            r = load_gain(LoadParams(N=N, n=n, M=args.m, gamma_percent=args.gamma))
            print(f"{n},{N},{r.cl_td!r},{r.cl_ddl!r},{r.gain!r},{r.gain_floor}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return {"run": _cmd_run, "thresholds": _cmd_thresholds, "load-gain": _cmd_load_gain}[args.command](args)
    except (ConfigError, ValueError, ArithmeticError, OSError) as exc:
        print(f"ddl-radar: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
