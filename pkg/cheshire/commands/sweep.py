import logging

import click

from cheshire.commands.common import build_config, emit, experiment_options, reserved_seed, timed
from cheshire.rotor_wall import survival_ladder

logger = logging.getLogger("cheshire.commands.sweep")


def _parse_ladder(ctx, param, value: str) -> list[int]:
    try:
        values = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers, e.g. 25,50,100,200")
    if not values or any(n < 2 for n in values):
        raise click.BadParameter("every N must be at least 2")
    return values


# Command: sweep
# Description: Left survival probability and shift for each N of the ladder, with
# epsilon = pi/(2N) on every rung.
@click.command("sweep")
@experiment_options()
@click.option("--n-ladder", default="25,50,100,200", show_default=True, callback=_parse_ladder)
@reserved_seed
def command(output, out_path, svg_path, n_ladder, **flags):
    config = build_config(**flags)
    timings: dict[str, float] = {}
    with timed(timings, "run"):
        table = survival_ladder(config, n_ladder)
    emit("sweep", config, table, timings, output, out_path, svg_path)
