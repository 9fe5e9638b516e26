import logging

import click

from cheshire.commands.common import build_config, emit, experiment_options, reserved_seed, timed
from cheshire.rotor_wall import run_shift_experiment

logger = logging.getLogger("cheshire.commands.shift")


# Command: shift
# Description: Evolves |L>|up_z>|Phi> for 2N periods, post-selects Left and the chosen
# x spin, and reports the rotor wall's <L_x> before and after.
@click.command("shift")
@experiment_options()
@reserved_seed
def command(output, out_path, svg_path, **flags):
    config = build_config(**flags)
    timings: dict[str, float] = {}
    with timed(timings, "run"):
        report = run_shift_experiment(config)
    logger.info(
        f"shift = {report.shift.value:+.6f} hbar, deviation {report.deviation.value:.3e} "
        f"(predicted {report.predicted_bound.value:.3e})"
    )
    emit("shift", config, report, timings, output, out_path, svg_path)
