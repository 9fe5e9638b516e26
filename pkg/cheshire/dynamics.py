"""One period of the partitioned box, conditioned on the wall angle.

Within a period, in the spin basis of a wall at angle theta:

    up_theta:    Left  -> cos e Left + i sin e Out(1)
                 Right -> i sin e Left + cos e Out(1)
    down_theta:  Left  -> cos e Left + i sin e phi Right
                 Right -> i sin e Left + cos e phi Right

and every Out(k) moves on to Out(k+1) whatever its spin. ``phi`` is the reflection
phase exp(-i 2 p0 x_w) in per-period mode and 1 otherwise. In once-per-transit
mode the down branch instead receives a single kick ``phi`` on the box interior
together with the last period; at fixed theta that kick commutes with every
phase-free period.
"""
import logging
import math
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from cheshire.errors import ModeOverflowError
from cheshire.schemas import ExperimentConfig
from cheshire.state import FIRST_OUT, LEFT, RIGHT, JointState

logger = logging.getLogger("cheshire.dynamics")


class PeriodUnitary(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float
    # False: the wall is held at theta = 0 for this period.
    wall_angle_conditioned: bool = True
    reflection_phase_enabled: bool = False
    reflection_mode: Literal["once_per_transit", "per_period"] = "per_period"
    transit_imprint: bool = False
    ideal: bool = False


def spin_rotation(theta: float) -> np.ndarray:
    """Columns are |up_theta>, |down_theta> in the z basis."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _angle_factors(state: JointState, u: PeriodUnitary):
    if not u.wall_angle_conditioned:
        return None
    theta = state.theta
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if state.wall is not None:
        c, s = c[:, np.newaxis], s[:, np.newaxis]
    return c, s


def _reflection_phase(state: JointState, u: PeriodUnitary) -> np.ndarray | None:
    if not u.reflection_phase_enabled or state.wall is None or state.wall.box_momentum == 0.0:
        return None
    return state.wall.reflection_phase()


def _to_theta_basis(up, down, factors):
    if factors is None:
        return up, down
    c, s = factors
    return c * up + 1j * s * down, 1j * s * up + c * down


def _to_z_basis(alpha, beta, factors):
    if factors is None:
        return alpha, beta
    c, s = factors
    return c * alpha - 1j * s * beta, -1j * s * alpha + c * beta


def apply_period(state: JointState, u: PeriodUnitary) -> JointState:
    a = state.amplitudes
    if np.any(a[-1]):
        logger.error("Amplitude on the last Out mode would be pushed past the recorded range")
        raise ModeOverflowError(f"Out({2 * state.n_rounds}) would overflow")
    out = np.empty_like(a)
    out[FIRST_OUT + 1 :] = a[FIRST_OUT:-1]

    factors = _angle_factors(state, u)
    phase = _reflection_phase(state, u)
    c, s = math.cos(u.epsilon), math.sin(u.epsilon)

    alpha, beta = _to_theta_basis(a[:FIRST_OUT, 0], a[:FIRST_OUT, 1], factors)

    if u.ideal:
        alpha_left, alpha_right = alpha[LEFT], alpha[RIGHT]
        escaped = None
    else:
        alpha_left = c * alpha[LEFT] + 1j * s * alpha[RIGHT]
        alpha_right = np.zeros_like(alpha[RIGHT])
        escaped = 1j * s * alpha[LEFT] + c * alpha[RIGHT]

    beta_left = c * beta[LEFT] + 1j * s * beta[RIGHT]
    beta_right = 1j * s * beta[LEFT] + c * beta[RIGHT]
    if phase is not None:
        if u.reflection_mode == "per_period":
            beta_right = phase * beta_right
        elif u.transit_imprint:
            beta_left, beta_right = phase * beta_left, phase * beta_right

    out[LEFT, 0], out[LEFT, 1] = _to_z_basis(alpha_left, beta_left, factors)
    out[RIGHT, 0], out[RIGHT, 1] = _to_z_basis(alpha_right, beta_right, factors)
    if escaped is None:
        out[FIRST_OUT] = 0
    else:
        out[FIRST_OUT, 0], out[FIRST_OUT, 1] = _to_z_basis(escaped, np.zeros_like(escaped), factors)
    return state.with_amplitudes(out)


def apply_period_adjoint(state: JointState, u: PeriodUnitary) -> JointState:
    """Exact adjoint of ``apply_period`` (its inverse on the range it reaches)."""
    a = state.amplitudes
    out = np.empty_like(a)
    out[FIRST_OUT:-1] = a[FIRST_OUT + 1 :]
    out[-1] = 0

    factors = _angle_factors(state, u)
    phase = _reflection_phase(state, u)
    c, s = math.cos(u.epsilon), math.sin(u.epsilon)

    alpha, beta = _to_theta_basis(a[:FIRST_OUT, 0], a[:FIRST_OUT, 1], factors)
    alpha_escaped, _ = _to_theta_basis(a[FIRST_OUT, 0], a[FIRST_OUT, 1], factors)
    beta_left, beta_right = beta[LEFT], beta[RIGHT]

    if phase is not None and u.reflection_mode == "once_per_transit" and u.transit_imprint:
        beta_left, beta_right = phase.conj() * beta_left, phase.conj() * beta_right
    right_phase = phase.conj() if phase is not None and u.reflection_mode == "per_period" else None

    if u.ideal:
        alpha_left, alpha_right = alpha[LEFT], alpha[RIGHT]
    else:
        alpha_left = c * alpha[LEFT] - 1j * s * alpha_escaped
        alpha_right = -1j * s * alpha[LEFT] + c * alpha_escaped

    if right_phase is not None:
        beta_right = right_phase * beta_right
    new_beta_left = c * beta_left - 1j * s * beta_right
    new_beta_right = -1j * s * beta_left + c * beta_right

    out[LEFT, 0], out[LEFT, 1] = _to_z_basis(alpha_left, new_beta_left, factors)
    out[RIGHT, 0], out[RIGHT, 1] = _to_z_basis(alpha_right, new_beta_right, factors)
    return state.with_amplitudes(out)


def evolve(state: JointState, schedule: Sequence[PeriodUnitary]) -> JointState:
    if len(schedule) > 2 * state.n_rounds:
        raise ModeOverflowError(f"Schedule of {len(schedule)} periods exceeds 2N = {2 * state.n_rounds}")
    for u in schedule:
        state = apply_period(state, u)
    return state


def evolve_backward(state: JointState, schedule: Sequence[PeriodUnitary]) -> JointState:
    for u in reversed(schedule):
        state = apply_period_adjoint(state, u)
    return state


def survival_amplitude(n_rounds: int, epsilon: float) -> float:
    """cos^{2N}(epsilon), the Left amplitude of |L>|up> after 2N periods at a fixed wall."""
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    return math.cos(epsilon) ** (2 * n_rounds)


def period_for(config: ExperimentConfig, conditioned: bool = True, last: bool = False) -> PeriodUnitary:
    has_wall = config.wall_packet is not None
    return PeriodUnitary(
        epsilon=config.epsilon,
        wall_angle_conditioned=conditioned,
        reflection_phase_enabled=has_wall,
        reflection_mode=config.reflection_mode,
        transit_imprint=has_wall and last and config.reflection_mode == "once_per_transit",
        ideal=config.ideal,
    )


def uniform_schedule(config: ExperimentConfig) -> list[PeriodUnitary]:
    """2N periods with the rotor wall present throughout."""
    periods = 2 * config.n_rounds
    return [period_for(config, last=(j == periods - 1)) for j in range(periods)]


def flux_schedule(config: ExperimentConfig, wall_index: int) -> list[PeriodUnitary]:
    """Rotor wall only in period ``wall_index`` (1-based); fixed theta = 0 walls otherwise."""
    periods = 2 * config.n_rounds
    if not 1 <= wall_index <= periods:
        raise ValueError(f"wall_index must lie in 1..{periods}, got {wall_index}")
    return [period_for(config, conditioned=(j == wall_index - 1), last=(j == periods - 1)) for j in range(periods)]
