import logging
import math

import pytest

from cheshire.errors import PostSelectionFailed
from cheshire.rotor_wall import (
    backward_check,
    conditional_wall_state,
    postselect,
    run_shift_experiment,
    survival_ladder,
)
from cheshire.schemas import ExperimentConfig, RotorSpec, WallSpec
from cheshire.state import JointState, ParticleMode, RotorPacket, fidelity


@pytest.mark.parametrize("outcome, expected", [("up_x", -1.0), ("down_x", 1.0)])
def test_shift_is_one_hbar(default_config, outcome, expected):
    report = run_shift_experiment(default_config.model_copy(update={"postselect_spin": outcome}))
    assert report.shift.value == pytest.approx(expected, rel=0.02)
    assert report.shift.value == pytest.approx(report.lx_final.value - report.lx_initial.value, abs=0)
    assert report.deviation.value <= 2 * report.predicted_bound.value
    assert report.shift.unit == "hbar"
    assert 0 <= report.prob_left.value <= 1


def test_spin_outcome_is_even_given_left(default_config):
    report = run_shift_experiment(default_config)
    assert report.prob_spin_given_left.value == pytest.approx(0.5, abs=1e-12)


def test_opaque_partition_gives_no_shift(default_config):
    report = run_shift_experiment(default_config.model_copy(update={"epsilon": 0.0}))
    assert report.shift.value == pytest.approx(0.0, abs=1e-12)
    assert report.prob_left.value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("outcome, k", [("up_x", 1), ("down_x", -1)])
def test_ideal_limit_conditional_state(ideal_config, outcome, k):
    rotor = ideal_config.rotor.build()
    packet = conditional_wall_state(ideal_config, outcome)
    assert fidelity(packet, rotor.times_phase(k)) == pytest.approx(1.0, abs=1e-10)
    report = run_shift_experiment(ideal_config.model_copy(update={"postselect_spin": outcome}))
    assert report.shift.value == pytest.approx(-k, abs=1e-9)


def test_physical_conditional_state_is_close(default_config):
    rotor = default_config.rotor.build()
    assert fidelity(conditional_wall_state(default_config), rotor.times_phase(1)) >= 0.999


def test_sign_flips_with_outcome(ideal_config, default_config):
    up = run_shift_experiment(ideal_config).shift.value
    down = run_shift_experiment(ideal_config.model_copy(update={"postselect_spin": "down_x"})).shift.value
    assert up == pytest.approx(-down, abs=1e-9)

    c = default_config.survival_c
    up = run_shift_experiment(default_config).shift.value
    down = run_shift_experiment(default_config.model_copy(update={"postselect_spin": "down_x"})).shift.value
    assert abs(up + down) <= 2 * (1 - c)


@pytest.mark.parametrize("family", ["raised_cosine", "skewed"])
@pytest.mark.parametrize("center", [0.0, 0.8, -2.0])
def test_shift_does_not_depend_on_the_initial_wall(family, center):
    config = ExperimentConfig(
        n_rounds=10,
        rotor=RotorSpec(grid_size=4096, delta_theta=0.3, family=family, center=center),
        ideal=True,
    )
    assert run_shift_experiment(config).shift.value == pytest.approx(-1.0, abs=1e-9)


def test_shift_converges_with_n():
    deviations = [
        run_shift_experiment(ExperimentConfig(n_rounds=n)).deviation.value for n in (25, 50, 100, 200)
    ]
    assert all(a > b for a, b in zip(deviations, deviations[1:]))


@pytest.mark.parametrize("outcome", ["up_x", "down_x"])
def test_backward_check_ideal(ideal_config, outcome):
    report = backward_check(ideal_config.model_copy(update={"postselect_spin": outcome}))
    assert report.fidelity.value == pytest.approx(1.0, abs=1e-10)
    assert report.lx_difference.value == pytest.approx(0.0, abs=1e-9)


def test_backward_check_physical(default_config):
    assert backward_check(default_config).fidelity.value >= 0.999


def test_backward_check_opaque_partition(default_config):
    report = backward_check(default_config.model_copy(update={"epsilon": 0.0}))
    assert report.fidelity.value == pytest.approx(1.0, abs=1e-12)


def test_survival_ladder_rises_towards_one():
    table = survival_ladder(ExperimentConfig(), [25, 50, 100, 200])
    survival = [row.survival.value for row in table.rows]
    assert [row.n_rounds for row in table.rows] == [25, 50, 100, 200]
    assert all(a < b for a, b in zip(survival, survival[1:]))
    for row in table.rows:
        assert row.survival.value == pytest.approx(row.survival_analytic.value, abs=math.sin(0.05 / 2) ** 2)


def test_survival_ladder_parallel_matches_sequential(monkeypatch):
    from cheshire.config import get_settings

    sequential = survival_ladder(ExperimentConfig(), [10, 20, 40])
    monkeypatch.setenv("CHESHIRE_N_JOBS", "2")
    get_settings.cache_clear()
    parallel = survival_ladder(ExperimentConfig(), [10, 20, 40])
    assert parallel.model_dump() == sequential.model_dump()


def test_failed_postselection_reports_probabilities():
    rotor = RotorPacket.build(grid_size=64, delta_theta=0.3)
    state = JointState.initial(2, rotor, mode=ParticleMode.right())
    with pytest.raises(PostSelectionFailed) as excinfo:
        postselect(state, "up_x")
    assert excinfo.value.exit_code == 2
    assert "left" in excinfo.value.probabilities


def test_wall_packet_is_rejected():
    config = ExperimentConfig(n_rounds=4, wall_packet=WallSpec(grid_size=64))
    with pytest.raises(ValueError):
        run_shift_experiment(config)


def wrap_warnings(records):
    return [r for r in records if r.name == "cheshire.rotor_wall" and "edge weight" in r.message]


def test_ideal_run_warns_when_the_grid_cannot_hold_an_exact_shift(default_config, ideal_config, caplog):
    with caplog.at_level(logging.WARNING, logger="cheshire.rotor_wall"):
        run_shift_experiment(default_config)
    assert not wrap_warnings(caplog.records)

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="cheshire.rotor_wall"):
        report = run_shift_experiment(default_config.model_copy(update={"ideal": True}))
    assert wrap_warnings(caplog.records)
    assert abs(report.shift.value + 1) > 1e-9

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="cheshire.rotor_wall"):
        run_shift_experiment(ideal_config)
    assert not wrap_warnings(caplog.records)
