"""Run configuration: a YAML document whose every key is optional.

Schema (defaults shown)::

    source:              # either variances ...
      v_corr: 0.47
      v_anti: 4.11
    # source: {corr_db: -3.3, anti_db: 6.1}   # ... or noise levels in dB
    charges: [0, 1, 2]
    eta_grid: {start: 0.0, stop: 1.0, steps: 101}
    delta_values: [0.0, 0.15, 0.5, 1.0]
    outputs: [ppt, coherence, boundary]
    seed: 42
    output_path: "-"     # "-" is standard output
    simulate: {eta: 1.0, delta: 0.0, n: 1000000, blocks: 10}
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from numbers import Integral, Real

import numpy as np
import yaml

from .channel import NOMINAL_DELTAS, NOMINAL_V_ANTI, NOMINAL_V_CORR, EprParams, epr_from_db
from .errors import ConfigError, UnphysicalSource
from .measurement import DEFAULT_BLOCKS, DEFAULT_SAMPLES

OUTPUT_KINDS = ("ppt", "coherence", "boundary")


def _real(value, name, *, lo=None, hi=None):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ConfigError(name, f"expected a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(name, "must be finite")
    if lo is not None and value < lo:
        raise ConfigError(name, f"must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigError(name, f"must be <= {hi}, got {value}")
    return value


def _int(value, name, *, lo=None):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(name, f"must be >= {lo}, got {value}")
    return int(value)


def _mapping(value, name):
    if not isinstance(value, dict):
        raise ConfigError(name, f"expected a mapping, got {type(value).__name__}")
    return value


def _reject_unknown(data, allowed, prefix=""):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{prefix}{key}", "unknown key")


@dataclass(frozen=True)
class EtaGrid:
    start: float = 0.0
    stop: float = 1.0
    steps: int = 101

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SimulateConfig:
    eta: float = 1.0
    delta: float = 0.0
    n: int = DEFAULT_SAMPLES
    blocks: int = DEFAULT_BLOCKS


@dataclass(frozen=True)
class SweepConfig:
    epr: EprParams = field(default_factory=EprParams)
    charges: tuple[int, ...] = (0, 1, 2)
    eta_grid: EtaGrid = field(default_factory=EtaGrid)
    delta_values: tuple[float, ...] = NOMINAL_DELTAS
    outputs: tuple[str, ...] = OUTPUT_KINDS
    seed: int = 42
    output_path: str = "-"
    simulate: SimulateConfig = field(default_factory=SimulateConfig)

    @classmethod
    def from_dict(cls, data) -> "SweepConfig":
        data = {} if data is None else _mapping(data, "<root>")
        _reject_unknown(data, ({f.name for f in fields(cls)} - {"epr"}) | {"source"})
        kw = {}
        if "source" in data:
            kw["epr"] = _parse_source(_mapping(data["source"], "source"))
        if "charges" in data:
            charges = data["charges"]
            if not isinstance(charges, list):
                raise ConfigError("charges", "expected a list of integers")
            charges = tuple(_int(c, f"charges[{i}]") for i, c in enumerate(charges))
            if len(set(charges)) != len(charges):
                raise ConfigError("charges", f"duplicate charge in {list(charges)}")
            kw["charges"] = charges
        if "eta_grid" in data:
            kw["eta_grid"] = _parse_eta_grid(_mapping(data["eta_grid"], "eta_grid"))
        if "delta_values" in data:
            deltas = data["delta_values"]
            if not isinstance(deltas, list) or not deltas:
                raise ConfigError("delta_values", "expected a non-empty list of numbers")
            kw["delta_values"] = tuple(
                _real(d, f"delta_values[{i}]", lo=0.0) for i, d in enumerate(deltas)
            )
        if "outputs" in data:
            outputs = data["outputs"]
            if not isinstance(outputs, list):
                raise ConfigError("outputs", "expected a list")
            for i, o in enumerate(outputs):
                if o not in OUTPUT_KINDS:
                    raise ConfigError(f"outputs[{i}]", f"must be one of {OUTPUT_KINDS}, got {o!r}")
            kw["outputs"] = tuple(outputs)
        if "seed" in data:
            kw["seed"] = _int(data["seed"], "seed", lo=0)
        if "output_path" in data:
            if not isinstance(data["output_path"], str) or not data["output_path"]:
                raise ConfigError("output_path", "expected a non-empty string")
            kw["output_path"] = data["output_path"]
        if "simulate" in data:
            kw["simulate"] = _parse_simulate(_mapping(data["simulate"], "simulate"))
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "source": {"v_corr": self.epr.v_corr, "v_anti": self.epr.v_anti},
            "charges": list(self.charges),
            "eta_grid": {
                "start": self.eta_grid.start,
                "stop": self.eta_grid.stop,
                "steps": self.eta_grid.steps,
            },
            "delta_values": list(self.delta_values),
            "outputs": list(self.outputs),
            "seed": self.seed,
            "output_path": self.output_path,
            "simulate": {
                "eta": self.simulate.eta,
                "delta": self.simulate.delta,
                "n": self.simulate.n,
                "blocks": self.simulate.blocks,
            },
        }

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> "SweepConfig":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError("<document>", f"invalid YAML: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        try:
            with open(path, encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        return cls.loads(text)

    def with_overrides(self, **changes) -> "SweepConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _parse_source(src) -> EprParams:
    has_var = {"v_corr", "v_anti"} & src.keys()
    has_db = {"corr_db", "anti_db"} & src.keys()
    _reject_unknown(src, {"v_corr", "v_anti", "corr_db", "anti_db"}, "source.")
    if has_var and has_db:
        raise ConfigError("source", "give either v_corr/v_anti or corr_db/anti_db, not both")
    try:
        if has_db:
            return epr_from_db(
                _real(src.get("corr_db", 0.0), "source.corr_db"),
                _real(src.get("anti_db", 0.0), "source.anti_db"),
            )
        return EprParams(
            _real(src.get("v_corr", NOMINAL_V_CORR), "source.v_corr"),
            _real(src.get("v_anti", NOMINAL_V_ANTI), "source.v_anti"),
        )
    except UnphysicalSource as exc:
        raise ConfigError("source", str(exc)) from None


def _parse_eta_grid(g) -> EtaGrid:
    _reject_unknown(g, {"start", "stop", "steps"}, "eta_grid.")
    start = _real(g.get("start", 0.0), "eta_grid.start", lo=0.0, hi=1.0)
    stop = _real(g.get("stop", 1.0), "eta_grid.stop", lo=0.0, hi=1.0)
    steps = _int(g.get("steps", 101), "eta_grid.steps", lo=2)
    if stop < start:
        raise ConfigError("eta_grid.stop", f"must be >= start ({start})")
    return EtaGrid(start, stop, steps)


def _parse_simulate(s) -> SimulateConfig:
    _reject_unknown(s, {"eta", "delta", "n", "blocks"}, "simulate.")
    return SimulateConfig(
        eta=_real(s.get("eta", 1.0), "simulate.eta", lo=0.0, hi=1.0),
        delta=_real(s.get("delta", 0.0), "simulate.delta", lo=0.0),
        n=_int(s.get("n", DEFAULT_SAMPLES), "simulate.n", lo=100),
        blocks=_int(s.get("blocks", DEFAULT_BLOCKS), "simulate.blocks", lo=2),
    )
