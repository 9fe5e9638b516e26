import logging

import click

from cheshire.commands.common import build_config, emit, experiment_options, reserved_seed, timed
from cheshire.rotor_wall import backward_check

logger = logging.getLogger("cheshire.commands.backward")


# Command: backward
# Description: Runs the post-selected final state back through the adjoint schedule and
# reports how closely the conditioned initial wall state matches Phi.
@click.command("backward")
@experiment_options()
@reserved_seed
def command(output, out_path, svg_path, **flags):
    config = build_config(**flags)
    timings: dict[str, float] = {}
    with timed(timings, "run"):
        report = backward_check(config)
    emit("backward", config, report, timings, output, out_path, svg_path)
