import logging

import click

from cheshire.commands.common import build_config, emit, experiment_options, reserved_seed, timed
from cheshire.momentum import halving_ladder, run_momentum_experiment, sweep_vanishing
from cheshire.schemas import WallSpec

logger = logging.getLogger("cheshire.commands.momentum")


# Command: momentum
# Description: Gives the wall a position packet, imprints the reflection phase and reports the
# linear momentum the wall receives next to the angular shift. --sweep runs a 4-rung
# ladder halving delta_theta and delta_x together.
@click.command("momentum")
@experiment_options()
@click.option("--reflection-mode", type=click.Choice(["once-per-transit", "per-period"]), default="once-per-transit", show_default=True)
@click.option("--p0", type=float, default=None, help="Box momentum; by default chosen to meet --phase-budget.")
@click.option("--phase-budget", type=float, default=0.01, show_default=True, help="Target 2N p0 dx when --p0 is not given.")
@click.option("--delta-x", type=float, default=1.0, show_default=True, help="Wall position packet half-width.")
@click.option("--wall-grid", type=int, default=1024, show_default=True, help="Points P of the wall position grid.")
@click.option("--sweep", is_flag=True, help="Run the halving ladder instead of a single probe.")
@reserved_seed
def command(output, out_path, svg_path, reflection_mode, p0, phase_budget, delta_x, wall_grid, sweep, **flags):
    if p0 is None:
        p0 = phase_budget / (2 * flags["n_rounds"] * delta_x)
    wall = WallSpec(grid_size=wall_grid, delta_x=delta_x, box_momentum=p0)
    config = build_config(**flags, wall_packet=wall, reflection_mode=reflection_mode.replace("-", "_"))
    timings: dict[str, float] = {}
    with timed(timings, "run"):
        if sweep:
            results = sweep_vanishing(config, halving_ladder(config.rotor.delta_theta, delta_x))
        else:
            results = run_momentum_experiment(config)
    emit("momentum", config, results, timings, output, out_path, svg_path)
