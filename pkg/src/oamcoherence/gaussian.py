"""Gaussian states in quadrature phase space and the functions that score them.

Conventions: quadratures are ordered ``(X1, Y1, X2, Y2, ...)`` with
``X = a + a^dagger`` and ``Y = (a - a^dagger)/i``, so the vacuum has unit
variance in every quadrature (shot-noise units). Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, NonPhysicalCovariance, NumericalError

#: Symplectic eigenvalues in ``[1 - PHYS_TOL, 1)`` are rounding noise on a pure mode.
PHYS_TOL = 1e-9
#: Relative tolerance when pairing the ``2n`` moduli of ``eig(Omega V)``.
PAIR_RTOL = 1e-8


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an ``n``-mode Gaussian state.

    ``cov`` is symmetrised on construction. Physicality is *not* enforced here
    (use :func:`is_physical`); the scoring functions check it themselves.
    """

    cov: np.ndarray
    displacement: np.ndarray | None = None

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise DimensionMismatch(f"covariance must be 2n x 2n, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)):
            raise NonPhysicalCovariance("covariance has non-finite entries")
        cov = 0.5 * (cov + cov.T)
        if self.displacement is None:
            disp = np.zeros(cov.shape[0])
        else:
            disp = np.asarray(self.displacement, dtype=float).reshape(-1)
            if disp.shape != (cov.shape[0],):
                raise DimensionMismatch(
                    f"displacement length {disp.size} does not match {cov.shape[0]} quadratures"
                )
        object.__setattr__(self, "cov", _readonly(cov))
        object.__setattr__(self, "displacement", _readonly(disp))

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 sub-block coupling mode ``i`` to mode ``j`` (0-based)."""
        return self.cov[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return np.array_equal(self.cov, other.cov) and np.array_equal(
            self.displacement, other.displacement
        )

    def __hash__(self):
        return hash((self.cov.tobytes(), self.displacement.tobytes()))

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes}, cov={self.cov.tolist()!r})"

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "GaussianState":
        return cls(np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, variances) -> "GaussianState":
        """Product of thermal modes with the given per-mode variances."""
        v = np.repeat(np.asarray(variances, dtype=float).reshape(-1), 2)
        return cls(np.diag(v))


def _as_state(state) -> GaussianState:
    return state if isinstance(state, GaussianState) else GaussianState(state)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of ``[[0, 1], [-1, 0]]`` over ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _clamp_spectrum(nu: np.ndarray) -> np.ndarray:
    if nu.size and nu.min() < 1.0 - PHYS_TOL:
        raise NonPhysicalCovariance(
            f"symplectic eigenvalue {nu.min():.12g} below the vacuum bound"
        )
    return np.maximum(nu, 1.0)


def _require_positive(cov):
    # eig(Omega V) only yields symplectic eigenvalues for V > 0.
    if np.linalg.eigvalsh(cov).min() <= 0.0:
        raise NonPhysicalCovariance("covariance matrix is not positive definite")


def symplectic_eigenvalues(state) -> np.ndarray:
    """Symplectic spectrum of the covariance matrix, ascending.

    This is the generic route: the eigenvalues of ``Omega V`` come in pairs
    ``+-i nu_k``; their moduli are sorted and paired. It serves as the
    reference for the two-mode closed form in
    :func:`two_mode_symplectic_eigenvalues`.

    Raises
    ------
    NonPhysicalCovariance
        If the matrix is not positive definite or any ``nu_k < 1 - 1e-9``.
    NumericalError
        If the moduli do not pair up within ``PAIR_RTOL``.
    """
    state = _as_state(state)
    cov = state.cov
    _require_positive(cov)
    n = state.n_modes
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cov)))
    lo, hi = moduli[0::2], moduli[1::2]
    if np.any(np.abs(hi - lo) > PAIR_RTOL * np.maximum(hi, 1.0)):
        raise NumericalError(f"unpaired symplectic moduli: {moduli.tolist()}")
    return _clamp_spectrum(0.5 * (lo + hi))


def two_mode_symplectic_eigenvalues(state) -> np.ndarray:
    """Closed-form symplectic spectrum of a two-mode state.

    ``nu_{-+}^2 = (Delta -+ sqrt(Delta^2 - 4 det V)) / 2`` with
    ``Delta = det A + det B + 2 det C``.
    """
    state = _as_state(state)
    if state.n_modes != 2:
        raise DimensionMismatch(f"closed form needs 2 modes, got {state.n_modes}")
    _require_positive(state.cov)
    delta = (
        np.linalg.det(state.block(0, 0))
        + np.linalg.det(state.block(1, 1))
        + 2.0 * np.linalg.det(state.block(0, 1))
    )
    det_v = np.linalg.det(state.cov)
    disc = max(delta * delta - 4.0 * det_v, 0.0)
    root = np.sqrt(disc)
    # (delta - root)/2 rewritten to avoid cancellation
    nu_sq = np.array([2.0 * det_v / (delta + root), (delta + root) / 2.0])
    return _clamp_spectrum(np.sqrt(np.maximum(nu_sq, 0.0)))


def g_entropy(nu: float) -> float:
    """Entropy in bits of a thermal mode with symplectic eigenvalue ``nu``."""
    nu = float(nu)
    if nu < 1.0 - PHYS_TOL:
        raise DomainError(f"g_entropy needs nu >= 1, got {nu!r}")
    if nu <= 1.0:
        return 0.0
    plus, minus = (nu + 1.0) / 2.0, (nu - 1.0) / 2.0
    return float(plus * np.log2(plus) - minus * np.log2(minus))


def von_neumann_entropy(state) -> float:
    return float(sum(g_entropy(nu) for nu in symplectic_eigenvalues(state)))


def thermal_reference(state) -> GaussianState:
    """Incoherent (diagonal, zero-mean) state that the coherence is measured against.

    Each mode gets variance ``(V_xx + V_yy + xbar_x^2 + xbar_y^2) / 2`` in both
    quadratures.
    """
    state = _as_state(state)
    d = np.diag(state.cov) + state.displacement**2
    per_mode = 0.5 * (d[0::2] + d[1::2])
    return GaussianState.thermal(per_mode)


def relative_entropy_coherence(state) -> float:
    """Relative entropy of coherence in bits, ``S(thermal reference) - S(state)``.

    Negative results down to ``-1e-9`` are rounding and are returned as 0.
    """
    state = _as_state(state)
    c = von_neumann_entropy(thermal_reference(state)) - von_neumann_entropy(state)
    if c < -PHYS_TOL:
        raise NumericalError(f"negative coherence {c:.3e}")
    return max(c, 0.0)


def ppt_value(state) -> float:
    """Smallest symplectic eigenvalue of the partial transpose of a two-mode state.

    Values below 1 certify entanglement.
    """
    state = _as_state(state)
    if state.n_modes != 2:
        raise DimensionMismatch(f"PPT value needs 2 modes, got {state.n_modes}")
    gamma = (
        np.linalg.det(state.block(0, 0))
        + np.linalg.det(state.block(1, 1))
        - 2.0 * np.linalg.det(state.block(0, 1))
    )
    det_v = np.linalg.det(state.cov)
    disc = gamma * gamma - 4.0 * det_v
    if disc < -1e-6:
        raise NumericalError(f"negative PPT discriminant {disc:.3e}")
    root = np.sqrt(max(disc, 0.0))
    # (gamma - root)/2 == 2 det V / (gamma + root); the latter keeps precision
    inner = 2.0 * det_v / (gamma + root) if gamma + root > 0 else 0.0
    if inner < -PHYS_TOL:
        raise NumericalError(f"negative PPT radicand {inner:.3e}")
    return float(np.sqrt(max(inner, 0.0)))


def is_physical(state) -> bool:
    """True when the covariance satisfies the uncertainty relation ``V + i Omega >= 0``."""
    try:
        symplectic_eigenvalues(state)
    except (NonPhysicalCovariance, NumericalError, DimensionMismatch):
        return False
    return True
