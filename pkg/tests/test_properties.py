import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheshire.dynamics import PeriodUnitary, apply_period, evolve, uniform_schedule
from cheshire.rotor_wall import run_shift_experiment
from cheshire.schemas import ExperimentConfig, RotorSpec
from cheshire.state import JointState, RotorPacket, mode_count, norm, rotor_marginal

seeds = st.integers(min_value=0, max_value=2**32 - 1)
epsilons = st.floats(min_value=0.0, max_value=math.pi / 4)


def random_joint(seed: int, n_rounds: int, rotor: RotorPacket) -> JointState:
    rng = np.random.default_rng(seed)
    shape = (mode_count(n_rounds), 2, rotor.support.size)
    amplitudes = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    amplitudes[-1] = 0
    amplitudes /= np.sqrt(np.sum(np.abs(amplitudes) ** 2))
    return JointState(amplitudes, n_rounds, rotor.grid_size, rotor.support)


ROTOR = RotorPacket.build(grid_size=128, delta_theta=0.35, family="skewed")


@settings(max_examples=20, deadline=None)
@given(seeds, epsilons, st.booleans(), st.booleans())
def test_period_preserves_norm(seed, epsilon, conditioned, ideal):
    state = random_joint(seed, 3, ROTOR)
    u = PeriodUnitary(epsilon=epsilon, wall_angle_conditioned=conditioned, ideal=ideal)
    assert norm(apply_period(state, u)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(seeds, epsilons, st.booleans())
def test_walls_never_change_the_angle_distribution(seed, epsilon, ideal):
    state = random_joint(seed, 3, ROTOR)
    after = apply_period(state, PeriodUnitary(epsilon=epsilon, ideal=ideal))
    np.testing.assert_allclose(rotor_marginal(after), rotor_marginal(state), atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([8, 64, 512]))
def test_parseval(seed, grid_size):
    rng = np.random.default_rng(seed)
    packet = RotorPacket.from_samples(rng.normal(size=grid_size) + 1j * rng.normal(size=grid_size))
    assert np.sum(np.abs(packet.fourier_view) ** 2) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(min_value=-5, max_value=5))
def test_phase_factor_shifts_the_spectrum(seed, k):
    rng = np.random.default_rng(seed)
    packet = RotorPacket.from_samples(rng.normal(size=64) + 1j * rng.normal(size=64))
    expected = (-1) ** k * np.roll(packet.fourier_view, -k)
    np.testing.assert_allclose(packet.times_phase(k).fourier_view, expected, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(
    st.sampled_from(["raised_cosine", "skewed"]),
    st.floats(min_value=0.15, max_value=0.35),
    st.floats(min_value=-3.0, max_value=3.0),
)
def test_ideal_shift_does_not_depend_on_packet_shape(family, delta_theta, center):
    spec = RotorSpec(grid_size=4096, delta_theta=delta_theta, family=family, center=center)
    edge = spec.build().edge_weight
    report = run_shift_experiment(ExperimentConfig(n_rounds=4, rotor=spec, ideal=True))
    assert report.shift.value == pytest.approx(-1.0, abs=1e-9 + 2 * 4096 * edge)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=2, max_value=30), st.sampled_from(["raised_cosine", "skewed"]))
def test_outcomes_shift_in_opposite_directions(n_rounds, family):
    base = ExperimentConfig(n_rounds=n_rounds, rotor=RotorSpec(grid_size=2048, delta_theta=0.3, family=family), ideal=True)
    up = run_shift_experiment(base).shift.value
    down = run_shift_experiment(base.model_copy(update={"postselect_spin": "down_x"})).shift.value
    edge = base.rotor.build().edge_weight
    assert up == pytest.approx(-down, abs=1e-9 + 4 * 2048 * edge)


@settings(max_examples=15, deadline=None)
@given(
    st.integers(min_value=2, max_value=40),
    st.floats(min_value=0.03, max_value=math.pi / 8),
    st.sampled_from(["gaussian", "raised_cosine", "skewed"]),
    st.booleans(),
)
def test_full_run_is_unitary(n_rounds, delta_theta, family, ideal):
    rotor = RotorSpec(grid_size=256, delta_theta=delta_theta, family=family)
    config = ExperimentConfig(n_rounds=n_rounds, rotor=rotor, ideal=ideal)
    final = evolve(JointState.initial(n_rounds, config.rotor.build()), uniform_schedule(config))
    assert norm(final) == pytest.approx(1.0, abs=1e-11)
