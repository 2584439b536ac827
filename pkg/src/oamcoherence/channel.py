"""EPR source, one-sided lossy/noisy channel and the entanglement sudden-death boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import NotEntangledAtUnity, NumericalError, UnphysicalSource
from .gaussian import GaussianState, ppt_value

#: Nominal source (-3.3 dB / 6.1 dB), given as rounded variances.
NOMINAL_V_CORR = 0.47
NOMINAL_V_ANTI = 4.11
NOMINAL_DELTAS = (0.0, 0.15, 0.5, 1.0)

_Z = np.diag([1.0, -1.0])
_I = np.eye(2)


@dataclass(frozen=True)
class EprParams:
    """Correlated / anti-correlated quadrature variances ``(V, V')`` in SNL units."""

    v_corr: float = NOMINAL_V_CORR
    v_anti: float = NOMINAL_V_ANTI

    def __post_init__(self):
        if not (self.v_corr > 0 and self.v_anti > 0):
            raise UnphysicalSource(f"variances must be positive: {self.v_corr}, {self.v_anti}")
        if self.v_corr * self.v_anti < 1.0 - 1e-6:
            raise UnphysicalSource(
                f"V*V' = {self.v_corr * self.v_anti:.6g} violates the uncertainty bound"
            )

    @property
    def entangled(self) -> bool:
        return self.v_corr < 1.0 < self.v_anti


@dataclass(frozen=True)
class ChannelParams:
    """Transmission efficiency ``eta`` and excess noise ``delta`` (SNL units)."""

    eta: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not self.delta >= 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


def epr_from_db(corr_db: float, anti_db: float) -> EprParams:
    """Convert measured noise levels relative to shot noise (dB) to variances."""
    return EprParams(10.0 ** (corr_db / 10.0), 10.0 ** (anti_db / 10.0))


def initial_state(epr: EprParams) -> GaussianState:
    """Covariance matrix of the source pair, modes ordered (Conj, Pr)."""
    a = (epr.v_corr + epr.v_anti) / 2.0
    c = (epr.v_anti - epr.v_corr) / 2.0
    return GaussianState(np.block([[a * _I, c * _Z], [c * _Z, a * _I]]))


def apply_channel(state: GaussianState, ch: ChannelParams) -> GaussianState:
    """Send the Pr mode (second mode) through the channel; Conj stays put.

    ``B -> eta B + (1 - eta)(1 + delta) I``, ``C -> sqrt(eta) C``, ``A`` unchanged.
    A non-zero Pr displacement is attenuated by ``sqrt(eta)``.
    """
    if state.n_modes != 2:
        raise ValueError(f"apply_channel acts on two-mode states, got {state.n_modes}")
    eta, delta = float(ch.eta), float(ch.delta)
    t = np.sqrt(eta)
    cov = np.array(state.cov)
    cov[2:, 2:] = eta * cov[2:, 2:] + (1.0 - eta) * (1.0 + delta) * _I
    cov[:2, 2:] = t * cov[:2, 2:]
    cov[2:, :2] = t * cov[2:, :2]
    disp = np.array(state.displacement)
    disp[2:] = t * disp[2:]
    return GaussianState(cov, disp)


def channel_ppt(epr: EprParams, eta: float, delta: float) -> float:
    return ppt_value(apply_channel(initial_state(epr), ChannelParams(eta, delta)))


def sudden_death_threshold(
    epr: EprParams, delta: float, *, xtol: float = 1e-6, scan_points: int = 101
) -> float | None:
    """Transmission efficiency below which the pair stops being entangled.

    Returns ``None`` when the pair stays entangled for every ``eta`` in (0, 1].
    The bisection bracket relies on the PPT value falling monotonically with
    ``eta``; this is checked on a coarse grid first.
    """
    lo, hi = 1e-9, 1.0
    if channel_ppt(epr, hi, delta) >= 1.0:
        raise NotEntangledAtUnity(f"source is not entangled at eta=1 (epr={epr})")

    grid = np.linspace(lo, hi, scan_points)
    values = np.array([channel_ppt(epr, e, delta) for e in grid])
    if np.any(np.diff(values) > 1e-12):
        raise NumericalError(f"PPT value not monotone in eta for delta={delta}")

    if values[0] < 1.0:
        return None
    return float(bisect(lambda e: channel_ppt(epr, e, delta) - 1.0, lo, hi, xtol=xtol))
