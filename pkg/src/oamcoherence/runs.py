"""Parameter sweeps and end-to-end simulation runs driven by a :class:`SweepConfig`."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .channel import ChannelParams, apply_channel, initial_state, sudden_death_threshold
from .config import SweepConfig
from .gaussian import ppt_value, relative_entropy_coherence
from .measurement import estimate_report, sample_all, write_sample_sets
from .multiplex import apply_channel_all, build_multiplexed, report

THREADS_ENV = "OAMCOHERENCE_THREADS"
SWEEP_HEADER = "l,delta,eta,ppt,coherence,entangled"
BOUNDARY_HEADER = "delta,eta_star"
NONE_MARKER = "none"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def fmt(x: float) -> str:
    return f"{x:.9g}"


@dataclass(frozen=True)
class SweepRecord:
    l: int
    delta: float
    eta: float
    ppt: float
    coherence: float
    entangled: bool

    def csv_row(self) -> str:
        flag = "true" if self.entangled else "false"
        return f"{self.l},{fmt(self.delta)},{fmt(self.eta)},{fmt(self.ppt)},{fmt(self.coherence)},{flag}"

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "delta": float(fmt(self.delta)),
            "eta": float(fmt(self.eta)),
            "ppt": float(fmt(self.ppt)),
            "coherence": float(fmt(self.coherence)),
            "entangled": self.entangled,
        }


def _sweep_row(args):
    config, delta, eta = args
    ms = apply_channel_all(build_multiplexed(config.charges, config.epr), ChannelParams(eta, delta))
    return [
        SweepRecord(r.charge, delta, float(eta), r.ppt, r.coherence, r.entangled)
        for r in report(ms).records
    ]


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """One record per (charge, delta, eta), sorted in that order."""
    tasks = [(config, d, float(e)) for d in config.delta_values for e in config.eta_grid.values()]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        chunks = list(pool.map(_sweep_row, tasks))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.l, r.delta, r.eta))
    return rows


def run_boundary(config: SweepConfig) -> list[tuple[float, float | None]]:
    """Sudden-death efficiency for each requested excess noise (``None`` if there is none)."""
    deltas = sorted(config.delta_values)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        stars = list(pool.map(lambda d: sudden_death_threshold(config.epr, d), deltas))
    return list(zip(deltas, stars))


def point(config: SweepConfig, eta: float, delta: float) -> dict:
    ch = ChannelParams(eta, delta)
    ms = apply_channel_all(build_multiplexed(config.charges, config.epr), ch)
    out = {"eta": eta, "delta": delta, "v_corr": config.epr.v_corr, "v_anti": config.epr.v_anti}
    out.update(report(ms).as_dict())
    return out


def run_simulate(config: SweepConfig, out_dir) -> dict:
    """Sample the four homodyne settings, write them as CSV and re-estimate the state.

    Writes ``samples_<PAIR>.csv`` and ``report.json`` into ``out_dir`` and
    returns the report, which also carries the exact values for comparison.
    """
    sim = config.simulate
    truth = apply_channel(initial_state(config.epr), ChannelParams(sim.eta, sim.delta))
    sets = sample_all(truth, sim.n, config.seed)
    out_dir = Path(out_dir)
    write_sample_sets(sets, out_dir)
    result = {
        "eta": sim.eta,
        "delta": sim.delta,
        "seed": config.seed,
        "estimate": estimate_report(sets, sim.blocks).as_dict(),
        "truth": {
            "ppt": ppt_value(truth),
            "coherence": relative_entropy_coherence(truth),
            "cov": truth.cov.tolist(),
        },
    }
    (out_dir / "report.json").write_text(dumps_json(result), encoding="ascii")
    return result


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def sweep_csv(rows: list[SweepRecord]) -> str:
    return "\n".join([SWEEP_HEADER] + [r.csv_row() for r in rows]) + "\n"


def sweep_json(rows: list[SweepRecord]) -> str:
    return dumps_json([r.as_dict() for r in rows])


def boundary_csv(rows) -> str:
    lines = [BOUNDARY_HEADER]
    for delta, star in rows:
        lines.append(f"{fmt(delta)},{NONE_MARKER if star is None else fmt(star)}")
    return "\n".join(lines) + "\n"


def boundary_json(rows) -> str:
    return dumps_json(
        [{"delta": d, "eta_star": None if s is None else float(fmt(s))} for d, s in rows]
    )
