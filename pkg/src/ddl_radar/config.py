"""Experiment configuration files.

Configs are INI files read with :mod:`configparser`::

    [experiment]
    name = pd_vs_f            ; pd_vs_f | pd_vs_n | pd_vs_sdr | thresholds | fit_thresholds
                              ; load_gain | fa_validate | rodi_compare
    sweep = -0.45:0.45:0.01   ; comma list and/or start:stop:step ranges (stop inclusive)
    trials = 2000
    seed = 0
    detectors = ddl_amf, ddl_glr, optimum
    protocol = nearest        ; unknown-Doppler MLD entry choice: nearest | dominant
    gate_cells = false        ; require the target cell to be a representative cell
    k_factor = 5              ; K = k_factor * n in order sweeps ("none" keeps K)
    output = pd_vs_f.csv

    [scenario]
    N = 64
    n = 4
    snr_db = 15
    target_freq = 0.25
    doppler = known           ; known | unknown
    ; clutter = none          ; white noise only

    [clutter.1]
    center_freq = 0
    spread = 0.0025
    power_fraction = 1

    [cfar]
    window = taylor
    nbar = 5
    sll_db = -35
    n_ref = 20
    guard = 1

Every key except ``[experiment] name`` is optional. Scenario keys missing
from the file take the :class:`~ddl_radar.signal_model.Scenario` defaults.
Sweep entries of ``fa_validate`` are clutter settings written
``center_freq/spread/cnr_db``; those of ``fit_thresholds`` are ``n/K``
pairs; ``rodi_compare`` takes ``rodi = 43-46, 47-50`` block lists.
Names of Monte Carlo detectors may be suffixed with ``_analytic`` in curve
experiments to add closed-form rows (known Doppler only).
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .cfar import CaCfarConfig
from .montecarlo import DETECTORS, PROTOCOLS
from .signal_model import ClutterComponent, Scenario

__all__ = ["EXPERIMENTS", "ConfigError", "ExperimentConfig", "parse_config", "load_config", "serialize"]

EXPERIMENTS = ("pd_vs_f", "pd_vs_n", "pd_vs_sdr", "thresholds", "fit_thresholds", "load_gain",
               "fa_validate", "rodi_compare")
MONTE_CARLO = ("pd_vs_f", "pd_vs_n", "pd_vs_sdr", "fa_validate")
ANALYTIC_DETECTORS = ("optimum_analytic", "ddl_amf_analytic", "ddl_glr_analytic")

DEFAULT_SWEEPS = {
    "pd_vs_f": "-0.45:0.45:0.01",
    "pd_vs_n": "2:8:1",
    "pd_vs_sdr": "-60:-40:1",
    "thresholds": "1e-3, 1e-6, 1e-9",
    "fit_thresholds": "4/12, 4/16, 4/20, 5/15, 5/20, 5/25",
    "load_gain": "4/64, 4/128, 4/256, 5/64, 5/128, 5/256, 6/64, 6/128, 6/256",
    "fa_validate": "0/0.0025/60, 0.15/0.0025/60, -0.3/0.01/40",
    "rodi_compare": "0.203125:0.21875:0.0009765625",
}

_SCENARIO_KEYS = {"N": int, "n": int, "K": int, "K_T": int, "M": int, "cnr_db": float, "snr_db": float,
                  "pfa": float, "target_freq": float, "fft_factor": int, "target_range_cell": int}
_EXPERIMENT_KEYS = ("name", "sweep", "trials", "seed", "detectors", "protocol", "gate_cells", "k_factor",
                    "output", "rodi", "m", "gamma")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    scenario: Scenario = field(default_factory=Scenario)
    sweep: tuple = ()
    trials: int = 2000
    seed: int = 0
    output_path: str = ""
    detectors: tuple[str, ...] = ("ddl_amf", "ddl_glr")
    protocol: str = "nearest"
    gate_cells: bool = False
    k_factor: int | None = 5
    cfar: CaCfarConfig = field(default_factory=CaCfarConfig)
    rodi: tuple[tuple[int, ...], ...] = ()
    load_m: int = 8000
    load_gamma: float = 90.0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"name: unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if not self.sweep:
            raise ConfigError("sweep: must not be empty")
        if self.experiment in MONTE_CARLO and self.trials < 100:
            raise ConfigError(f"trials: Monte Carlo experiments need at least 100 trials, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed: must be an unsigned 64-bit value, got {self.seed}")
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol: must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.k_factor is not None and self.k_factor < 2:
            raise ConfigError(f"k_factor: must be >= 2, got {self.k_factor}")
        bad = [d for d in self.detectors if d not in DETECTORS + ANALYTIC_DETECTORS]
        if bad or not self.detectors:
            raise ConfigError(f"detectors: unknown {bad}; choose from {DETECTORS + ANALYTIC_DETECTORS}")
        if self.experiment == "rodi_compare" and not self.rodi:
            raise ConfigError("rodi: rodi_compare needs at least one bin block")

    @property
    def output_name(self) -> str:
        return self.output_path or f"{self.experiment}.csv"


def _num(text: str, key: str, kind=float):
    try:
        v = kind(text.strip()) if kind is not int else int(text.strip(), 0)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {text.strip()!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(f"{key}: must be finite, got {text.strip()!r}")
    return v


def _parse_range(item: str, key: str) -> list[float]:
    parts = item.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{key}: ranges are written start:stop:step, got {item!r}")
    a, b, h = (_num(p, key) for p in parts)
    if h <= 0 or b < a:
        raise ConfigError(f"{key}: range {item!r} needs step > 0 and stop >= start")
    count = int(math.floor((b - a) / h + 1e-9)) + 1
    return [float(np.round(a + i * h, 12)) for i in range(count)]


def _parse_sweep(text: str, experiment: str):
    out = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        if experiment in ("fit_thresholds", "load_gain"):
            parts = item.split("/")
            if len(parts) != 2:
                raise ConfigError(f"sweep: expected n/K (or n/N) pairs, got {item!r}")
            out.append(tuple(_num(p, "sweep", int) for p in parts))
        elif experiment == "fa_validate":
            parts = item.split("/")
            if len(parts) != 3:
                raise ConfigError(f"sweep: expected center_freq/spread/cnr_db triples, got {item!r}")
            out.append(tuple(_num(p, "sweep") for p in parts))
        elif ":" in item:
            out.extend(_parse_range(item, "sweep"))
        else:
            out.append(_num(item, "sweep"))
    if experiment == "pd_vs_n":
        if any(x != int(x) for x in out):
            raise ConfigError("sweep: orders must be integers")
        out = [int(x) for x in out]
    if experiment in ("pd_vs_f", "rodi_compare"):
        bad = [x for x in out if not abs(x) < 0.5]
        if bad:
            raise ConfigError(f"sweep: Doppler values must satisfy |F| < 0.5, got {bad}")
    if experiment == "thresholds":
        bad = [x for x in out if not 0 < x < 1]
        if bad:
            raise ConfigError(f"sweep: false-alarm probabilities must lie in (0, 1), got {bad}")
    return tuple(out)


def _parse_bool(text: str, key: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text.strip()!r}")


def _parse_rodi(text: str):
    blocks = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        lo, sep, hi = item.partition("-")
        if not sep:
            raise ConfigError(f"rodi: blocks are written first-last, got {item!r}")
        a, b = _num(lo, "rodi", int), _num(hi, "rodi", int)
        if b < a:
            raise ConfigError(f"rodi: block {item!r} is empty")
        blocks.append(tuple(range(a, b + 1)))
    return tuple(blocks)


def _parse_scenario(cp: configparser.ConfigParser) -> Scenario:
    kw = {}
    if cp.has_section("scenario"):
        sec = cp["scenario"]
        for key, value in sec.items():
            if key == "doppler":
                v = value.strip().lower()
                if v not in ("known", "unknown"):
                    raise ConfigError(f"doppler: expected 'known' or 'unknown', got {value.strip()!r}")
                kw["doppler_known"] = v == "known"
            elif key == "clutter":
                if value.strip().lower() != "none":
                    raise ConfigError(f"clutter: only 'none' is accepted here, got {value.strip()!r}")
                kw["clutter"] = ()
            elif key in _SCENARIO_KEYS:
                kw[key] = _num(value, key, _SCENARIO_KEYS[key])
            else:
                raise ConfigError(f"{key}: unknown key in [scenario]")
    comps = []
    names = sorted((s for s in cp.sections() if s.startswith("clutter.")),
                   key=lambda s: _num(s.split(".", 1)[1], s, int))
    for name in names:
        ckw = {}
        for key, value in cp[name].items():
            if key not in ("center_freq", "spread", "power_fraction"):
                raise ConfigError(f"{key}: unknown key in [{name}]")
            ckw[key] = _num(value, key)
        try:
            comps.append(ClutterComponent(**ckw))
        except ValueError as exc:
            raise ConfigError(f"[{name}] {exc}") from None
    if comps:
        if "clutter" in kw:
            raise ConfigError("clutter: 'none' conflicts with [clutter.*] sections")
        kw["clutter"] = tuple(comps)
    try:
        return Scenario(**kw)
    except ValueError as exc:
        raise ConfigError(f"[scenario] {exc}") from None


def _parse_cfar(cp) -> CaCfarConfig:
    if not cp.has_section("cfar"):
        return CaCfarConfig()
    kinds = {"window": str, "nbar": int, "sll_db": float, "n_ref": int, "guard": int}
    kw = {}
    for key, value in cp["cfar"].items():
        if key not in kinds:
            raise ConfigError(f"{key}: unknown key in [cfar]")
        kw[key] = value.strip() if kinds[key] is str else _num(value, key, kinds[key])
    try:
        return CaCfarConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"[cfar] {exc}") from None


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    cp.optionxform = str  # keys are case sensitive (N vs n)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    unknown = [s for s in cp.sections() if s not in ("experiment", "scenario", "cfar") and not s.startswith("clutter.")]
    if unknown:
        raise ConfigError(f"unknown section(s) {unknown}")
    if not cp.has_section("experiment") or "name" not in cp["experiment"]:
        raise ConfigError("name: [experiment] section with a name is required")
    ex = cp["experiment"]
    for key in ex:
        if key not in _EXPERIMENT_KEYS:
            raise ConfigError(f"{key}: unknown key in [experiment]")
    name = ex["name"].strip()
    if name not in EXPERIMENTS:
        raise ConfigError(f"name: unknown experiment {name!r}; choose from {EXPERIMENTS}")
    kw = dict(experiment=name, scenario=_parse_scenario(cp), cfar=_parse_cfar(cp),
              sweep=_parse_sweep(ex.get("sweep", DEFAULT_SWEEPS[name]), name))
    if "trials" in ex:
        kw["trials"] = _num(ex["trials"], "trials", int)
    if "seed" in ex:
        kw["seed"] = _num(ex["seed"], "seed", int)
    if "detectors" in ex:
        kw["detectors"] = tuple(d.strip() for d in ex["detectors"].split(",") if d.strip())
    if "protocol" in ex:
        kw["protocol"] = ex["protocol"].strip()
    if "gate_cells" in ex:
        kw["gate_cells"] = _parse_bool(ex["gate_cells"], "gate_cells")
    if "k_factor" in ex:
        v = ex["k_factor"].strip()
        kw["k_factor"] = None if v.lower() == "none" else _num(v, "k_factor", int)
    if "output" in ex:
        kw["output_path"] = ex["output"].strip()
    if "rodi" in ex:
        kw["rodi"] = _parse_rodi(ex["rodi"])
    if "m" in ex:
        kw["load_m"] = _num(ex["m"], "m", int)
    if "gamma" in ex:
        kw["load_gamma"] = _num(ex["gamma"], "gamma")
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return "/".join(_fmt(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def serialize(config: ExperimentConfig) -> str:
    """Canonical text form; ``parse_config(serialize(c)) == c``."""
    c, sc = config, config.scenario
    lines = ["[experiment]", f"name = {c.experiment}", "sweep = " + ", ".join(_fmt(x) for x in c.sweep),
             f"trials = {c.trials}", f"seed = {c.seed}", "detectors = " + ", ".join(c.detectors),
             f"protocol = {c.protocol}", f"gate_cells = {_fmt(c.gate_cells)}",
             f"k_factor = {'none' if c.k_factor is None else c.k_factor}"]
    if c.output_path:
        lines.append(f"output = {c.output_path}")
    if c.rodi:
        lines.append("rodi = " + ", ".join(f"{b[0]}-{b[-1]}" for b in c.rodi))
    lines += [f"m = {c.load_m}", f"gamma = {_fmt(c.load_gamma)}", "", "[scenario]"]
    for key in _SCENARIO_KEYS:
        lines.append(f"{key} = {_fmt(getattr(sc, key))}")
    lines.append(f"doppler = {'known' if sc.doppler_known else 'unknown'}")
    if not sc.clutter:
        lines.append("clutter = none")
    for i, comp in enumerate(sc.clutter, 1):
        lines += ["", f"[clutter.{i}]"] + [f"{f.name} = {_fmt(getattr(comp, f.name))}" for f in fields(comp)]
    lines += ["", "[cfar]"]
    for f in fields(c.cfar):
        v = getattr(c.cfar, f.name)
        lines.append(f"{f.name} = {v if isinstance(v, str) else _fmt(v)}")
    return "\n".join(lines) + "\n"
