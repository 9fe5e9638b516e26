import logging

import click

from cheshire.commands.common import build_config, emit, experiment_options, reserved_seed, timed
from cheshire.flux import flux_profile

logger = logging.getLogger("cheshire.commands.flux")


# Command: flux
# Description: One rotor wall per run, present only in period n; reports the per-period
# angular-momentum gain for every n (or for --wall-index only) next to the half-sine.
# The half-sine assumes the up_theta branch stays in the box, so the ideal model is the
# default here; --physical follows the finite_epsilon column instead.
@click.command("flux")
@experiment_options(n_rounds=20, delta_theta=0.02, grid=4096, ideal=True)
@click.option("--wall-index", type=int, default=None, help="Run a single wall index n in 1..2N.")
@reserved_seed
def command(output, out_path, svg_path, wall_index, **flags):
    config = build_config(**flags, flux_wall_index=wall_index)
    timings: dict[str, float] = {}
    with timed(timings, "run"):
        profile = flux_profile(config, None if wall_index is None else [wall_index])
    emit("flux", config, profile, timings, output, out_path, svg_path)
