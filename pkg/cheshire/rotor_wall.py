"""Angular-momentum shift of a rotor wall, its backward consistency check and the N ladder."""
import logging
from typing import Sequence

import numpy as np

from cheshire.constants import EDGE_WRAP_WARN, QUADRATURE_TOL
from cheshire.dynamics import evolve, evolve_backward, survival_amplitude, uniform_schedule
from cheshire.errors import PostSelectionFailed
from cheshire.parallel import run_ordered
from cheshire.schemas import (
    BackwardReport,
    ExperimentConfig,
    PostSelectSpin,
    ShiftReport,
    SurvivalRow,
    SurvivalTable,
    dimensionless,
    hbar,
    probability,
)
from cheshire.state import (
    JointState,
    ParticleMode,
    RotorPacket,
    SpinVector,
    expectation_Lx,
    fidelity,
    project,
)

logger = logging.getLogger("cheshire.rotor_wall")

EXPECTED_SHIFT = {"up_x": -1.0, "down_x": 1.0}


def postselect(state: JointState, outcome: str) -> tuple[float, float, JointState]:
    """Keep Left, then the spin outcome; returns P(Left), P(outcome | Left) and the conditioned state."""
    left = ParticleMode.left()
    try:
        prob_left, in_left = project(state, [left])
    except PostSelectionFailed as exc:
        raise PostSelectionFailed("Particle never found in Left", {"left": exc.probabilities["probability"]})
    try:
        prob_spin, conditioned = project(in_left, [left], SpinVector.named(outcome))
    except PostSelectionFailed as exc:
        raise PostSelectionFailed(
            f"Spin outcome {outcome} never observed",
            {"left": prob_left, f"{outcome}_given_left": exc.probabilities["probability"]},
        )
    logger.debug(f"Post-selection: P(Left)={prob_left:.12f}, P({outcome}|Left)={prob_spin:.12f}")
    return prob_left, prob_spin, conditioned


def extract_rotor(state: JointState, spin_name: str, like: RotorPacket) -> RotorPacket:
    """Rotor packet of a state post-selected onto Left and ``spin_name`` (no wall factor)."""
    columns = state.branch(ParticleMode.left(), SpinVector.named(spin_name))
    packet = RotorPacket(state.full_rotor(columns), delta_theta=like.delta_theta, center=like.center)
    return packet


def wrap_limit(config: ExperimentConfig) -> float:
    """Largest tolerated G * edge_weight: ideal runs promise exact shifts."""
    return QUADRATURE_TOL if config.ideal else EDGE_WRAP_WARN


def warn_on_edge_weight(rotor: RotorPacket, limit: float = EDGE_WRAP_WARN):
    wrap = rotor.grid_size * rotor.edge_weight
    if wrap > limit:
        logger.warning(
            f"Rotor packet has edge weight {rotor.edge_weight:.2e} on a {rotor.grid_size}-point grid; "
            f"<L_x> shifts may be off by about {wrap:.2e} hbar. Use a finer grid or a wider packet."
        )


def require_no_wall(config: ExperimentConfig):
    if config.wall_packet is not None:
        raise ValueError("This experiment runs without a wall-position packet; use the momentum probe instead")


def _conditional_run(config: ExperimentConfig, outcome: PostSelectSpin):
    require_no_wall(config)
    rotor = config.rotor.build()
    warn_on_edge_weight(rotor, wrap_limit(config))
    final = evolve(JointState.initial(config.n_rounds, rotor), uniform_schedule(config))
    prob_left, prob_spin, conditioned = postselect(final, outcome)
    return rotor, prob_left, prob_spin, extract_rotor(conditioned, outcome, rotor)


def conditional_wall_state(config: ExperimentConfig, outcome: PostSelectSpin | None = None) -> RotorPacket:
    outcome = outcome or config.postselect_spin
    _, _, _, packet = _conditional_run(config, outcome)
    return packet


def run_shift_experiment(config: ExperimentConfig) -> ShiftReport:
    outcome = config.postselect_spin
    rotor, prob_left, prob_spin, packet = _conditional_run(config, outcome)
    lx_initial = expectation_Lx(rotor)
    lx_final = expectation_Lx(packet)
    shift = lx_final - lx_initial
    expected = EXPECTED_SHIFT[outcome] if config.epsilon > 0 else 0.0
    c = config.survival_c
    # Leading-order deviation of the conditioned shift from -+1 at finite epsilon.
    bound = (1 - c) / (2 * c)
    logger.info(
        f"Shift experiment N={config.n_rounds}, {outcome}: shift={shift:+.6f} hbar "
        f"(expected {expected:+.1f}, bound {bound:.3e})"
    )
    return ShiftReport(
        postselect_spin=outcome,
        prob_left=probability(prob_left),
        prob_spin_given_left=probability(prob_spin),
        lx_initial=hbar(lx_initial),
        lx_final=hbar(lx_final),
        shift=hbar(shift),
        expected_shift=hbar(expected),
        deviation=hbar(abs(shift - expected)),
        predicted_bound=hbar(bound),
        survival_c=dimensionless(c),
        edge_weight=dimensionless(rotor.edge_weight),
        config=config,
    )


def backward_check(config: ExperimentConfig) -> BackwardReport:
    """Evolve the post-selected |L>|spin>|Phi_final> backwards and compare the |L>|up_z> wall state with Phi."""
    outcome = config.postselect_spin
    rotor, _, _, final_packet = _conditional_run(config, outcome)
    support = rotor.support
    amplitudes = np.zeros((2 * config.n_rounds + 2, 2, support.size), dtype=complex)
    amplitudes[ParticleMode.left().index(config.n_rounds)] = np.outer(
        SpinVector.named(outcome).coefficients, final_packet.theta_samples[support]
    )
    retro = JointState(amplitudes, config.n_rounds, rotor.grid_size, support)
    retro = evolve_backward(retro, uniform_schedule(config))

    _, conditioned = project(retro, [ParticleMode.left()], SpinVector.up_z())
    initial_packet = extract_rotor(conditioned, "up_z", rotor)
    value = fidelity(initial_packet, rotor)
    lx_initial = expectation_Lx(rotor)
    lx_conditioned = expectation_Lx(initial_packet)
    logger.info(f"Backward check N={config.n_rounds}: fidelity={value:.12f}")
    return BackwardReport(
        fidelity=probability(value),
        lx_initial=hbar(lx_initial),
        lx_conditioned_initial=hbar(lx_conditioned),
        lx_difference=hbar(lx_conditioned - lx_initial),
        config=config,
    )


def _survival_row(config: ExperimentConfig) -> SurvivalRow:
    report = run_shift_experiment(config)
    analytic = survival_amplitude(config.n_rounds, config.epsilon) ** 2
    return SurvivalRow(
        n_rounds=config.n_rounds,
        survival=report.prob_left,
        survival_analytic=probability(analytic),
        shift=report.shift,
        shift_deviation=report.deviation,
    )


def survival_ladder(config: ExperimentConfig, n_values: Sequence[int]) -> SurvivalTable:
    """Left survival and shift for each N, with epsilon reset to pi / (2N) on every rung."""
    base = config.model_dump(exclude={"n_rounds", "epsilon", "flux_wall_index"})
    rungs = [ExperimentConfig(**base, n_rounds=n) for n in n_values]
    rows = run_ordered(_survival_row, [(rung,) for rung in rungs])
    return SurvivalTable(rows=rows)
