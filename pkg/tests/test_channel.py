import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oamcoherence.channel import (
    ChannelParams,
    EprParams,
    apply_channel,
    epr_from_db,
    initial_state,
    sudden_death_threshold,
)
from oamcoherence.errors import NotEntangledAtUnity, UnphysicalSource
from oamcoherence.gaussian import GaussianState, is_physical, ppt_value, relative_entropy_coherence

from oracles import dense_scan_root, random_physical_cov


# roots of (ab - c^2 eta)^2 = a^2 + b^2 + 2 c^2 eta - 1, b = eta a + (1 - eta)(1 + delta),
# i.e. det V = Gamma - 1, the PPT = 1 condition; solved with mpmath at 40 digits
FROZEN_THRESHOLDS = {0.15: 0.10506026712998154, 0.5: 0.28125408799546505, 1.0: 0.43902937072456863}


def channel_state(epr, eta, delta):
    return apply_channel(initial_state(epr), ChannelParams(eta, delta))


class TestEprParams:
    def test_from_db_nominal(self):
        epr = epr_from_db(-3.3, 6.1)
        assert epr.v_corr == pytest.approx(0.468, abs=5e-4)
        assert epr.v_anti == pytest.approx(4.074, abs=5e-4)
        assert epr.v_corr == pytest.approx(0.47, rel=0.01)
        # 6.1 dB is 4.074, about 0.9% below the quoted 4.11
        assert epr.v_anti == pytest.approx(4.11, rel=0.01)

    def test_from_db_vacuum(self):
        assert epr_from_db(0, 0) == EprParams(1.0, 1.0)

    def test_from_db_pure(self):
        epr = epr_from_db(-3, 3)
        assert epr.v_corr == pytest.approx(0.501, abs=5e-4)
        assert epr.v_anti == pytest.approx(1.995, abs=5e-4)
        assert epr.v_corr * epr.v_anti == pytest.approx(1.0, abs=1e-12)

    def test_uncertainty_violation(self):
        with pytest.raises(UnphysicalSource):
            epr_from_db(-3, 2)
        with pytest.raises(UnphysicalSource):
            EprParams(0.5, 1.5)
        with pytest.raises(UnphysicalSource):
            EprParams(-0.1, 10)

    def test_channel_params_validation(self):
        with pytest.raises(ValueError):
            ChannelParams(1.1, 0)
        with pytest.raises(ValueError):
            ChannelParams(0.5, -0.1)


class TestInitialState:
    def test_nominal_blocks(self, nominal_epr):
        cov = initial_state(nominal_epr).cov
        z = np.diag([1.0, -1.0])
        assert np.allclose(cov[:2, :2], 2.29 * np.eye(2), atol=1e-12)
        assert np.allclose(cov[2:, 2:], 2.29 * np.eye(2), atol=1e-12)
        assert np.allclose(cov[:2, 2:], 1.82 * z, atol=1e-12)
        assert np.array_equal(initial_state(nominal_epr).displacement, np.zeros(4))

    def test_vacuum_source(self):
        assert np.array_equal(initial_state(EprParams(1, 1)).cov, np.eye(4))

    @given(st.floats(0.05, 1.0), st.floats(1.0, 20.0))
    def test_physical(self, v, excess):
        epr = EprParams(v, excess / v)
        assert is_physical(initial_state(epr))


class TestApplyChannel:
    def test_identity_channel_bitwise(self, nominal_state):
        out = apply_channel(nominal_state, ChannelParams(1.0, 0.0))
        assert np.array_equal(out.cov, nominal_state.cov)
        rng = np.random.default_rng(4)
        for _ in range(20):
            cov, _ = random_physical_cov(rng)
            state = GaussianState(cov, rng.normal(size=4))
            out = apply_channel(state, ChannelParams(1.0, 0.0))
            assert np.array_equal(out.cov, state.cov)
            assert np.array_equal(out.displacement, state.displacement)

    def test_matches_block_formulas(self, nominal_state):
        z = np.diag([1.0, -1.0])
        for eta, delta in [(0.3, 0.0), (0.7, 0.5), (0.44, 1.0)]:
            cov = apply_channel(nominal_state, ChannelParams(eta, delta)).cov
            assert np.allclose(cov[:2, :2], 2.29 * np.eye(2), atol=1e-12)
            b = eta * 2.29 + (1 - eta) * (1 + delta)
            assert np.allclose(cov[2:, 2:], b * np.eye(2), atol=1e-12)
            assert np.allclose(cov[:2, 2:], np.sqrt(eta) * 1.82 * z, atol=1e-12)
            assert np.allclose(cov[2:, :2], np.sqrt(eta) * 1.82 * z, atol=1e-12)

    def test_full_loss(self, nominal_state):
        cov = apply_channel(nominal_state, ChannelParams(0.0, 1.0)).cov
        assert np.array_equal(cov[2:, 2:], 2.0 * np.eye(2))
        assert np.array_equal(cov[:2, 2:], np.zeros((2, 2)))
        assert ppt_value(cov) == pytest.approx(2.0, abs=1e-12)

    def test_sudden_death_point(self, nominal_epr):
        assert ppt_value(channel_state(nominal_epr, 0.44, 1.0)) == pytest.approx(1.0, abs=0.002)

    def test_attenuates_displacement(self):
        state = GaussianState(np.eye(4), [1.0, 0.0, 2.0, -2.0])
        out = apply_channel(state, ChannelParams(0.25, 0.0))
        assert np.allclose(out.displacement, [1.0, 0.0, 1.0, -1.0])

    def test_physicality_preserved(self):
        rng = np.random.default_rng(12)
        for _ in range(1000):
            v = rng.uniform(0.05, 1.0)
            epr = EprParams(v, rng.uniform(1.0, 10.0) / v)
            ch = ChannelParams(rng.uniform(0, 1), rng.uniform(0, 5))
            assert is_physical(channel_state(epr, ch.eta, ch.delta))

    def test_physicality_on_nominal_grid(self, nominal_epr):
        for eta in np.linspace(0, 1, 51):
            for delta in (0.0, 0.15, 0.5, 1.0, 3.0):
                assert is_physical(channel_state(nominal_epr, eta, delta))

    def test_loss_composition(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            cov, _ = random_physical_cov(rng)
            state = GaussianState(cov)
            e1, e2 = rng.uniform(0, 1, size=2)
            twice = apply_channel(apply_channel(state, ChannelParams(e1, 0)), ChannelParams(e2, 0))
            once = apply_channel(state, ChannelParams(e1 * e2, 0))
            assert np.allclose(twice.cov, once.cov, atol=1e-12, rtol=0)


@pytest.fixture(scope="module")
def grids():
    """PPT and coherence on a 10 (delta) x 100 (eta) grid."""
    epr = EprParams(0.47, 4.11)
    states = [[channel_state(epr, e, d) for e in np.linspace(0, 1, 100)] for d in np.linspace(0, 2, 10)]
    ppt = np.array([[ppt_value(s) for s in row] for row in states])
    coh = np.array([[relative_entropy_coherence(s) for s in row] for row in states])
    return ppt, coh


class TestMonotonicity:
    def test_ppt(self, grids):
        ppt, _ = grids
        assert np.all(np.diff(ppt, axis=1) <= 1e-12)
        assert np.all(np.diff(ppt, axis=0) >= -1e-12)

    def test_coherence(self, grids):
        _, coh = grids
        assert np.all(np.diff(coh, axis=1) >= -1e-12)
        assert np.all(np.diff(coh, axis=0) <= 1e-12)
        assert np.all(coh[:, 1:] > 0)
        assert np.all(np.abs(coh[:, 0]) <= 1e-9)


class TestSuddenDeath:
    def test_nominal_delta_one(self, nominal_epr):
        star = sudden_death_threshold(nominal_epr, 1.0)
        assert star == pytest.approx(0.44, abs=0.005)
        assert star == pytest.approx(FROZEN_THRESHOLDS[1.0], abs=1e-6)

    def test_lossy_channel_has_no_death(self, nominal_epr):
        assert sudden_death_threshold(nominal_epr, 0.0) is None

    @pytest.mark.parametrize("delta", [0.15, 0.5, 1.0])
    def test_against_dense_scan(self, nominal_epr, delta):
        oracle = dense_scan_root(delta)
        assert oracle == pytest.approx(FROZEN_THRESHOLDS[delta], abs=1e-10)
        assert sudden_death_threshold(nominal_epr, delta) == pytest.approx(oracle, abs=1e-6)

    def test_ppt_is_one_at_threshold(self, nominal_epr):
        star = sudden_death_threshold(nominal_epr, 0.5)
        assert ppt_value(channel_state(nominal_epr, star, 0.5)) == pytest.approx(1.0, abs=1e-5)

    def test_increasing_in_delta(self, nominal_epr):
        stars = [sudden_death_threshold(nominal_epr, d) for d in (0.15, 0.5, 1.0)]
        assert stars[0] < stars[1] < stars[2]

    def test_not_entangled_source(self):
        with pytest.raises(NotEntangledAtUnity):
            sudden_death_threshold(EprParams(1.0, 1.0), 1.0)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.05, 3.0))
    def test_threshold_is_a_sign_change(self, delta):
        epr = EprParams(0.47, 4.11)
        star = sudden_death_threshold(epr, delta)
        if star is None:
            return
        assert ppt_value(channel_state(epr, min(star + 1e-4, 1.0), delta)) < 1.0
        assert ppt_value(channel_state(epr, max(star - 1e-4, 0.0), delta)) >= 1.0
