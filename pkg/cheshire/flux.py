"""Per-period angular-momentum flux: one rotor wall in period n, fixed theta = 0 walls elsewhere."""
import logging
import math
from typing import Sequence

from cheshire.dynamics import evolve, flux_schedule
from cheshire.parallel import run_ordered
from cheshire.rotor_wall import require_no_wall, extract_rotor, postselect, warn_on_edge_weight
from cheshire.schemas import ExperimentConfig, FluxProfile, Series, hbar
from cheshire.state import JointState, RotorPacket, expectation_Lx

logger = logging.getLogger("cheshire.flux")

OUTCOME_SIGN = {"up_x": 1.0, "down_x": -1.0}


def _check_index(n_rounds: int, n: int):
    if not 1 <= n <= 2 * n_rounds:
        raise ValueError(f"Wall index must lie in 1..{2 * n_rounds}, got {n}")


def analytic_flux(n_rounds: int, n: int) -> float:
    """-sin((2n - 1) pi / 4N) sin(pi / 4N), in hbar, for the up_x outcome."""
    _check_index(n_rounds, n)
    quarter = math.pi / (4 * n_rounds)
    return -math.sin((2 * n - 1) * quarter) * math.sin(quarter)


def finite_epsilon_flux(n_rounds: int, n: int, epsilon: float | None = None) -> float:
    """Leading-order flux when the up branch leaks out of the box at every period."""
    _check_index(n_rounds, n)
    epsilon = math.pi / (2 * n_rounds) if epsilon is None else epsilon
    c = math.cos(epsilon)
    return -0.5 * math.sin(epsilon) * math.sin((2 * n_rounds - n) * epsilon) * c ** (n - 1) / c ** (2 * n_rounds)


def _flux_point(config: ExperimentConfig, rotor: RotorPacket, n: int) -> tuple[float, float, float]:
    initial = JointState.initial(config.n_rounds, rotor)
    final = evolve(initial, flux_schedule(config, n))
    prob_left, prob_spin, conditioned = postselect(final, config.postselect_spin)
    packet = extract_rotor(conditioned, config.postselect_spin, rotor)
    delta = expectation_Lx(packet) - expectation_Lx(rotor)
    logger.debug(f"Flux at wall {n}/{2 * config.n_rounds}: {delta:+.6e} hbar")
    return delta, prob_left, prob_spin


def run_flux_experiment(config: ExperimentConfig) -> float:
    """Change of <L_x> of the wall present only in period ``config.flux_wall_index``."""
    require_no_wall(config)
    if config.flux_wall_index is None:
        raise ValueError("flux_wall_index is required for a single flux run")
    rotor = config.rotor.build()
    warn_on_edge_weight(rotor)
    delta, _, _ = _flux_point(config, rotor, config.flux_wall_index)
    return delta


def flux_profile(config: ExperimentConfig, indices: Sequence[int] | None = None) -> FluxProfile:
    """Flux for every wall index 1..2N, or only for ``indices`` when given."""
    require_no_wall(config)
    rotor = config.rotor.build()
    warn_on_edge_weight(rotor)
    n_rounds = config.n_rounds
    indices = list(range(1, 2 * n_rounds + 1)) if indices is None else list(indices)
    for n in indices:
        _check_index(n_rounds, n)

    points = run_ordered(_flux_point, [(config, rotor, n) for n in indices])
    per_period = [p[0] for p in points]

    sign = OUTCOME_SIGN[config.postselect_spin]
    analytic = [sign * analytic_flux(n_rounds, n) for n in indices]
    finite = [sign * finite_epsilon_flux(n_rounds, n, config.epsilon) for n in indices]
    deviation = max(abs(a - b) for a, b in zip(per_period, analytic))
    total = math.fsum(per_period)
    logger.info(f"Flux profile N={n_rounds}: total={total:+.6f} hbar, max deviation {deviation:.3e}")

    return FluxProfile(
        n_rounds=n_rounds,
        wall_indices=indices,
        per_period=Series(values=per_period, unit="hbar"),
        analytic=Series(values=analytic, unit="hbar"),
        finite_epsilon=Series(values=finite, unit="hbar"),
        total=hbar(total),
        analytic_total=hbar(math.fsum(analytic)),
        max_deviation=hbar(deviation),
        prob_left=Series(values=[p[1] for p in points], unit="probability"),
        prob_spin_given_left=Series(values=[p[2] for p in points], unit="probability"),
        config=config,
    )
