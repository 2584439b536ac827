"""Registry of independent EPR pairs, one per OAM topological charge.

The multiplexed output is a tensor product over charges, so each pair is kept
as its own two-mode state and no cross-charge covariance is ever stored.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .channel import ChannelParams, EprParams, apply_channel, initial_state
from .errors import DuplicateCharge
from .gaussian import GaussianState, ppt_value, relative_entropy_coherence


@dataclass(frozen=True)
class OamPair:
    """Pr field with charge ``charge`` and its Conj partner with ``-charge``."""

    charge: int
    state: GaussianState

    @property
    def conj_charge(self) -> int:
        return -self.charge


@dataclass(frozen=True)
class MultiplexedState:
    pairs: Mapping[int, OamPair] = field(default_factory=dict)

    def __post_init__(self):
        ordered = {l: self.pairs[l] for l in sorted(self.pairs)}
        for l, pair in ordered.items():
            if pair.charge != l:
                raise ValueError(f"pair filed under charge {l} carries charge {pair.charge}")
        object.__setattr__(self, "pairs", MappingProxyType(ordered))

    @property
    def charges(self) -> list[int]:
        return list(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, charge: int) -> OamPair:
        return self.pairs[charge]


@dataclass(frozen=True)
class PairRecord:
    charge: int
    ppt: float
    coherence: float
    entangled: bool


@dataclass(frozen=True)
class MultiplexReport:
    records: tuple[PairRecord, ...]
    total_coherence: float
    n_entangled: int

    def as_dict(self) -> dict:
        return {
            "pairs": [vars(r) for r in self.records],
            "total_coherence": self.total_coherence,
            "n_entangled": self.n_entangled,
        }


def _per_charge(value, charges, kind):
    if isinstance(value, kind):
        return {l: value for l in charges}
    missing = [l for l in charges if l not in value]
    if missing:
        raise KeyError(f"no {kind.__name__} for charges {missing}")
    return {l: value[l] for l in charges}


def build_multiplexed(
    charges: Iterable[int], epr: EprParams | Mapping[int, EprParams]
) -> MultiplexedState:
    """One freshly prepared pair per charge.

    ``epr`` may be a single source shared by all charges or a mapping giving
    each charge its own source.
    """
    charges = [int(l) for l in charges]
    seen = set()
    for l in charges:
        if l in seen:
            raise DuplicateCharge(f"charge {l} listed twice")
        seen.add(l)
    sources = _per_charge(epr, charges, EprParams)
    return MultiplexedState({l: OamPair(l, initial_state(sources[l])) for l in charges})


def apply_channel_all(
    ms: MultiplexedState, ch: ChannelParams | Mapping[int, ChannelParams]
) -> MultiplexedState:
    """Send every Pr field through its channel (the same one unless a mapping is given)."""
    channels = _per_charge(ch, ms.charges, ChannelParams)
    return MultiplexedState(
        {l: OamPair(l, apply_channel(p.state, channels[l])) for l, p in ms.pairs.items()}
    )


def report(ms: MultiplexedState) -> MultiplexReport:
    records = []
    for l, pair in ms.pairs.items():
        ppt = ppt_value(pair.state)
        records.append(PairRecord(l, ppt, relative_entropy_coherence(pair.state), ppt < 1.0))
    total = 0.0
    for r in records:
        total += r.coherence
    return MultiplexReport(tuple(records), total, sum(r.entangled for r in records))
