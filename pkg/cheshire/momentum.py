"""Linear momentum handed to the wall through the reflection phase, next to the angular shift.

The wall is infinitely heavy: its position packet never moves and only picks up
the phase exp(-i 2 p0 x_w) on the down-theta branch. Momentum received by the
wall is reported as -(<p>_final - <p>_initial), so one reflection off the right
wall pushes it by +2 p0.
"""
import logging
import math
from typing import Sequence

import numpy as np

from cheshire.constants import PHASE_BUDGET_MAX, PHASE_BUDGET_WARN, POSTSELECT_FLOOR
from cheshire.dynamics import evolve, uniform_schedule
from cheshire.errors import ModelValidityError
from cheshire.parallel import run_ordered
from cheshire.rotor_wall import postselect, warn_on_edge_weight, wrap_limit
from cheshire.schemas import (
    ExperimentConfig,
    MomentumReport,
    MomentumSweepRow,
    MomentumSweepTable,
    Quantity,
    dimensionless,
    hbar,
    p0_units,
    probability,
)
from cheshire.state import (
    JointState,
    ParticleMode,
    RotorPacket,
    SpinVector,
    WallPacket,
    expectation_Lx,
    expectation_p,
    fidelity,
    joint_expectation_Lx,
    joint_expectation_p,
    project,
    require_unit_norm,
)

logger = logging.getLogger("cheshire.momentum")


def analytic_p_transfer(rotor: RotorPacket, p0: float) -> float:
    """2 p0 sum sin^2(theta/2) |Phi|^2 over the rotor grid."""
    require_unit_norm(rotor.norm, "Rotor packet")
    return 2 * p0 * float(np.sum(np.sin(rotor.theta / 2) ** 2 * rotor.density()))


def check_phase_budget(config: ExperimentConfig) -> float:
    budget = config.phase_budget
    if budget is None:
        raise ValueError("The momentum probe needs a wall_packet")
    if budget > PHASE_BUDGET_MAX:
        logger.error(f"Phase budget {budget:.3f} exceeds {PHASE_BUDGET_MAX}: the reflection phases wash out the effect")
        raise ModelValidityError(f"Phase budget 2N p0 dx = {budget:.3f} exceeds {PHASE_BUDGET_MAX}")
    if budget > PHASE_BUDGET_WARN:
        logger.warning(f"Phase budget {budget:.3f} is above {PHASE_BUDGET_WARN}; results may be off the small-phase regime")
    return budget


def coherence_fidelity(config: ExperimentConfig, wall: WallPacket) -> float:
    """Overlap of the final Left wall packet with Psi on the down_z branch of a wall held at theta = 0."""
    at_zero = RotorPacket(np.array([0.0, 1.0], dtype=complex))
    state = JointState.initial(config.n_rounds, at_zero, spin=SpinVector.down_z(), wall=wall)
    final = evolve(state, uniform_schedule(config))
    packet = final.branch(ParticleMode.left(), SpinVector.down_z())[0]
    weight = float(np.sum(np.abs(packet) ** 2))
    if weight < POSTSELECT_FLOOR:
        return 0.0
    returned = WallPacket(packet / math.sqrt(weight), wall.extent, wall.delta_x, wall.box_momentum)
    return fidelity(returned, wall)


def run_momentum_experiment(config: ExperimentConfig) -> MomentumReport:
    budget = check_phase_budget(config)
    rotor = config.rotor.build()
    wall = config.wall_packet.build()
    warn_on_edge_weight(rotor, wrap_limit(config))
    p0 = wall.box_momentum

    initial = JointState.initial(config.n_rounds, rotor, wall=wall)
    logger.debug(f"Momentum probe state {initial}, p0={p0}, mode={config.reflection_mode}")
    final = evolve(initial, uniform_schedule(config))

    p_initial = expectation_p(wall)
    lx_initial = expectation_Lx(rotor)

    _, in_left = project(final, [ParticleMode.left()])
    p_left_only = -(joint_expectation_p(in_left) - p_initial)
    lx_left_only = joint_expectation_Lx(in_left) - lx_initial

    prob_left, prob_spin, conditioned = postselect(final, config.postselect_spin)
    p_transfer = -(joint_expectation_p(conditioned) - p_initial)
    lx_shift = joint_expectation_Lx(conditioned) - lx_initial

    analytic = analytic_p_transfer(rotor, p0)
    kappa = p_transfer / analytic if analytic != 0 else 0.0
    coherence = coherence_fidelity(config, wall)
    logger.info(
        f"Momentum probe N={config.n_rounds} ({config.reflection_mode}): p_transfer={p_transfer:.6e}, "
        f"analytic={analytic:.6e}, kappa={kappa:.4f}, lx_shift={lx_shift:+.6f}"
    )
    return MomentumReport(
        reflection_count_mode=config.reflection_mode,
        p_transfer=p0_units(p_transfer),
        p_transfer_analytic=p0_units(analytic),
        residual=p0_units(p_transfer - analytic),
        kappa=dimensionless(kappa),
        lx_shift=hbar(lx_shift),
        p_transfer_left_only=p0_units(p_left_only),
        lx_shift_left_only=hbar(lx_left_only),
        phase_budget=dimensionless(budget),
        coherence_fidelity=probability(coherence),
        prob_left=probability(prob_left),
        prob_spin_given_left=probability(prob_spin),
        config=config,
    )


def _rung_config(config: ExperimentConfig, delta_theta: float, delta_x: float) -> ExperimentConfig:
    scale = 2.0 ** round(math.log2(config.rotor.delta_theta / delta_theta))
    grid_size = max(2, int(config.rotor.grid_size * scale))
    rotor = config.rotor.model_copy(update={"delta_theta": delta_theta, "grid_size": grid_size})
    wall = config.wall_packet.model_copy(update={"delta_x": delta_x, "extent": None})
    return ExperimentConfig(**{**config.model_dump(), "rotor": rotor.model_dump(), "wall_packet": wall.model_dump()})


def _sweep_row(config: ExperimentConfig) -> MomentumSweepRow:
    report = run_momentum_experiment(config)
    return MomentumSweepRow(
        delta_theta=Quantity(value=config.rotor.delta_theta, unit="radians"),
        delta_x=Quantity(value=config.wall_packet.delta_x, unit="length"),
        grid_size=config.rotor.grid_size,
        phase_budget=report.phase_budget,
        p_transfer=report.p_transfer,
        p_transfer_analytic=report.p_transfer_analytic,
        kappa=report.kappa,
        lx_shift=report.lx_shift,
    )


def sweep_vanishing(config: ExperimentConfig, ladder: Sequence[tuple[float, float]]) -> MomentumSweepTable:
    """Momentum probe over shrinking (delta_theta, delta_x) rungs at fixed p0.

    The rotor grid doubles each time delta_theta halves, so every rung samples its
    packet at the same relative positions.
    """
    if config.wall_packet is None:
        raise ValueError("The momentum sweep needs a wall_packet")
    if not ladder:
        raise ValueError("Ladder is empty")
    for (theta_a, x_a), (theta_b, x_b) in zip(ladder, ladder[1:]):
        if theta_b > theta_a or x_b > x_a or (theta_b, x_b) == (theta_a, x_a):
            raise ValueError(f"Ladder must decrease monotonically, got {(theta_a, x_a)} then {(theta_b, x_b)}")
    rungs = [_rung_config(config, theta, x) for theta, x in ladder]
    rows = run_ordered(_sweep_row, [(rung,) for rung in rungs])
    return MomentumSweepTable(reflection_count_mode=config.reflection_mode, rows=rows)


def halving_ladder(delta_theta: float, delta_x: float, rungs: int = 4) -> list[tuple[float, float]]:
    return [(delta_theta / 2**k, delta_x / 2**k) for k in range(rungs)]
