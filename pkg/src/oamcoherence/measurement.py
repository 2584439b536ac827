"""Synthetic balanced-homodyne records and covariance-matrix reconstruction.

Two homodyne detectors look at the Conj and Pr fields at the same time, so
each record holds one quadrature of each mode. The four settings XX, XY, YX
and YY (Conj quadrature first) fill in every cross-mode entry of the 4x4
matrix, and each single-mode variance is seen twice.

Random numbers come from numpy's Philox counter-based generator. Each setting
gets its own stream, keyed by ``(seed, setting index)``, so the settings are
independent and can be drawn in any order.
"""

from __future__ import annotations

import csv
import enum
import io
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSubmatrix, MissingPair, TooFewSamples, UnphysicalEstimate
from .gaussian import GaussianState, ppt_value, relative_entropy_coherence, symplectic_form

DEFAULT_SAMPLES = 1_000_000
DEFAULT_BLOCKS = 10
MIN_SAMPLES = 100
#: Raw estimates whose smallest symplectic eigenvalue is within this of 1 get repaired.
PROJECTION_EPS = 0.02


class QuadraturePair(enum.Enum):
    """Jointly measured (Conj, Pr) quadratures. Value = (conj index, pr index) in the 4x4 matrix."""

    XX = (0, 2)
    XY = (0, 3)
    YX = (1, 2)
    YY = (1, 3)

    @property
    def stream_id(self) -> int:
        return list(QuadraturePair).index(self)

    @property
    def indices(self) -> tuple[int, int]:
        return self.value


@dataclass(frozen=True, eq=False)
class QuadratureSampleSet:
    pair: QuadraturePair
    samples: np.ndarray  # shape (n, 2): columns q_conj, q_pr
    seed: int

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).reshape(-1, 2)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QuadratureSampleSet):
            return NotImplemented
        return (
            self.pair is other.pair
            and self.seed == other.seed
            and np.array_equal(self.samples, other.samples)
        )

    def to_csv(self) -> str:
        """CSV text with header ``index,q_conj,q_pr``; floats round-trip exactly."""
        buf = io.StringIO()
        buf.write("index,q_conj,q_pr\n")
        for i, (qc, qp) in enumerate(self.samples.tolist()):
            buf.write(f"{i},{qc!r},{qp!r}\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="ascii") as f:
            f.write(self.to_csv())

    @classmethod
    def read_csv(cls, path, pair: QuadraturePair, seed: int = -1) -> "QuadratureSampleSet":
        with open(path, newline="", encoding="ascii") as f:
            reader = csv.reader(f)
            header = next(reader)
            if header != ["index", "q_conj", "q_pr"]:
                raise ValueError(f"{path}: unexpected header {header}")
            rows = [(float(r[1]), float(r[2])) for r in reader if r]
        return cls(pair, np.array(rows).reshape(-1, 2), seed)


def _stream(seed: int, pair: QuadraturePair) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(pair.stream_id,))
    return np.random.Generator(np.random.Philox(ss))


def sample_pair(
    state: GaussianState, pair: QuadraturePair, n: int, seed: int
) -> QuadratureSampleSet:
    """Draw ``n`` joint homodyne outcomes for one quadrature setting."""
    if n < 2:
        raise TooFewSamples(f"need n >= 2, got {n}")
    if np.any(state.displacement != 0):
        raise ValueError("sampling assumes a zero-mean state")
    i, j = pair.indices
    v1, v2, c = state.cov[i, i], state.cov[j, j], state.cov[i, j]
    det = v1 * v2 - c * c
    if v1 < -1e-9 or v2 < -1e-9 or det < -1e-9:
        raise DegenerateSubmatrix(f"{pair.name} submatrix [[{v1}, {c}], [{c}, {v2}]] is not PSD")
    # explicit 2x2 Cholesky; tolerates the semidefinite edge
    l11 = np.sqrt(max(v1, 0.0))
    l21 = c / l11 if l11 > 0 else 0.0
    l22 = np.sqrt(max(v2 - l21 * l21, 0.0))
    z = _stream(seed, pair).standard_normal((n, 2))
    samples = np.empty_like(z)
    samples[:, 0] = l11 * z[:, 0]
    samples[:, 1] = l21 * z[:, 0] + l22 * z[:, 1]
    return QuadratureSampleSet(pair, samples, seed)


def sample_all(state: GaussianState, n: int, seed: int) -> dict[QuadraturePair, QuadratureSampleSet]:
    return {p: sample_pair(state, p, n, seed) for p in QuadraturePair}


class BlockStats(NamedTuple):
    mean: float
    std: float


def block_statistics(samples, blocks: int, statistic: Callable = np.mean) -> BlockStats:
    """Mean and one standard deviation of ``statistic`` over contiguous blocks.

    ``samples`` is split along its first axis into ``blocks`` equal chunks
    (the remainder is dropped). ``statistic`` maps a chunk to a number, or to
    an array, in which case mean and deviation are taken elementwise. The
    deviation is the sample standard deviation across chunks.
    """
    data = np.asarray(samples, dtype=float)
    if blocks < 2:
        raise TooFewSamples(f"need at least 2 blocks, got {blocks}")
    size = data.shape[0] // blocks
    if size < 1:
        raise TooFewSamples(f"{data.shape[0]} samples cannot fill {blocks} blocks")
    values = np.array([statistic(data[k * size : (k + 1) * size]) for k in range(blocks)], dtype=float)
    mean, std = values.mean(axis=0), values.std(axis=0, ddof=1)
    if values.ndim == 1:
        return BlockStats(float(mean), float(std))
    return BlockStats(mean, std)


def _pair_moments(samples: np.ndarray):
    """Sample variances of both columns and their covariance (ddof=1)."""
    n = samples.shape[0]
    x = samples[:, 0] - samples[:, 0].mean()
    y = samples[:, 1] - samples[:, 1].mean()
    return x @ x / (n - 1), y @ y / (n - 1), x @ y / (n - 1)


def _raw_covariance(sets: Mapping[QuadraturePair, np.ndarray]) -> np.ndarray:
    cov = np.zeros((4, 4))
    variance_sums = np.zeros(4)
    variance_counts = np.zeros(4)
    for pair, data in sets.items():
        i, j = pair.indices
        vi, vj, cij = _pair_moments(data)
        variance_sums[[i, j]] += (vi, vj)
        variance_counts[[i, j]] += 1
        cov[i, j] = cov[j, i] = cij
    # intra-mode X-Y entries (0,1) and (2,3) stay 0: no setting measures them
    cov[np.diag_indices(4)] = variance_sums / variance_counts
    return cov


def project_physical(cov: np.ndarray, eps: float = PROJECTION_EPS) -> tuple[np.ndarray, float]:
    """Add ``t * I`` with the smallest ``t >= 0`` that makes ``cov`` physical.

    Only small violations (smallest symplectic eigenvalue ``>= 1 - eps``) are
    repaired; anything worse raises :class:`UnphysicalEstimate`.
    """
    nu_min = _nu_min(cov)
    if nu_min >= 1.0:
        return cov, 0.0
    if nu_min < 1.0 - eps:
        raise UnphysicalEstimate(f"estimated matrix has symplectic eigenvalue {nu_min:.4f}")
    eye = np.eye(cov.shape[0])
    lo, hi = 0.0, 2.0 * (1.0 - nu_min)
    while _nu_min(cov + hi * eye) < 1.0:
        hi *= 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _nu_min(cov + mid * eye) < 1.0:
            lo = mid
        else:
            hi = mid
    return cov + hi * eye, hi


def _nu_min(cov) -> float:
    # unclamped: the public spectrum function rejects nu < 1 outright
    if np.linalg.eigvalsh(cov).min() <= 0.0:
        return 0.0
    omega = symplectic_form(cov.shape[0] // 2)
    return float(np.abs(np.linalg.eigvals(omega @ cov)).min())


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    state: GaussianState
    stderr: np.ndarray  # per-entry standard error of state.cov
    n: int
    projection: float  # multiple of the identity added to restore physicality
    raw_cov: np.ndarray


def _check_sets(sets) -> dict[QuadraturePair, QuadratureSampleSet]:
    if not isinstance(sets, Mapping):
        sets = {s.pair: s for s in sets}
    missing = [p.name for p in QuadraturePair if p not in sets]
    if missing:
        raise MissingPair(f"missing quadrature settings: {missing}")
    for p, s in sets.items():
        if s.n < MIN_SAMPLES:
            raise TooFewSamples(f"{p.name} has {s.n} samples, need >= {MIN_SAMPLES}")
    return dict(sets)


def _stack(sets) -> np.ndarray:
    """Records of all four settings side by side, shape (n, 4, 2), truncated to the shortest."""
    n = min(s.n for s in sets.values())
    return np.stack([sets[p].samples[:n] for p in QuadraturePair], axis=1)


def _stack_cov(chunk: np.ndarray) -> np.ndarray:
    return _raw_covariance({p: chunk[:, k] for k, p in enumerate(QuadraturePair)})


def estimate_covariance(
    sets: Mapping[QuadraturePair, QuadratureSampleSet] | Iterable[QuadratureSampleSet],
    blocks: int = DEFAULT_BLOCKS,
) -> CovarianceEstimate:
    """Reconstruct the 4x4 covariance matrix from the four homodyne settings.

    Diagonal entries average the two variance estimates available for each
    quadrature; cross-mode entries are the pair covariances. Standard errors
    come from the spread of per-block estimates divided by ``sqrt(blocks)``.
    """
    sets = _check_sets(sets)
    raw = _raw_covariance({p: s.samples for p, s in sets.items()})
    cov, shift = project_physical(raw)

    stacked = _stack(sets)
    stderr = block_statistics(stacked, blocks, _stack_cov).std / np.sqrt(blocks)
    return CovarianceEstimate(GaussianState(cov), stderr, stacked.shape[0], shift, raw)


@dataclass(frozen=True)
class EstimateReport:
    ppt: float
    ppt_std: float
    coherence: float
    coherence_std: float
    n: int
    blocks: int
    projection: float
    cov: list
    cov_stderr: list

    def as_dict(self) -> dict:
        return dict(vars(self))


def estimate_report(
    sets: Mapping[QuadraturePair, QuadratureSampleSet] | Iterable[QuadratureSampleSet],
    blocks: int = DEFAULT_BLOCKS,
) -> EstimateReport:
    """PPT value and coherence of the reconstructed state with one-sigma error bars.

    Point values use all samples. The error bars are the standard deviation
    of the same quantities over ``blocks`` sub-records, i.e. the spread a
    repeated measurement of ``n / blocks`` samples would show.
    """
    sets = _check_sets(sets)
    est = estimate_covariance(sets, blocks)
    stacked = _stack(sets)

    def block_state(chunk):
        return GaussianState(project_physical(_stack_cov(chunk))[0])

    ppt_stats = block_statistics(stacked, blocks, lambda ch: ppt_value(block_state(ch)))
    coh_stats = block_statistics(
        stacked, blocks, lambda ch: relative_entropy_coherence(block_state(ch))
    )
    return EstimateReport(
        ppt=ppt_value(est.state),
        ppt_std=ppt_stats.std,
        coherence=relative_entropy_coherence(est.state),
        coherence_std=coh_stats.std,
        n=est.n,
        blocks=blocks,
        projection=est.projection,
        cov=est.state.cov.tolist(),
        cov_stderr=est.stderr.tolist(),
    )


def write_sample_sets(sets: Mapping[QuadraturePair, QuadratureSampleSet], directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in QuadraturePair:
        path = directory / f"samples_{p.name}.csv"
        sets[p].write_csv(path)
        paths.append(path)
    return paths


def read_sample_sets(directory) -> dict[QuadraturePair, QuadratureSampleSet]:
    directory = Path(directory)
    out = {}
    for p in QuadraturePair:
        path = directory / f"samples_{p.name}.csv"
        if not path.exists():
            raise MissingPair(f"{path} not found")
        out[p] = QuadratureSampleSet.read_csv(path, p)
    return out
