import functools
import logging
import pathlib
import time
from contextlib import contextmanager

import click

from cheshire.config import get_settings
from cheshire.report import build_envelope, to_csv, to_json, write_svg
from cheshire.schemas import ExperimentConfig, RotorSpec

logger = logging.getLogger("cheshire.commands")

FAMILIES = ("gaussian", "raised_cosine", "skewed")


def experiment_options(n_rounds: int = 100, delta_theta: float = 0.05, grid: int = 256, ideal: bool = False):
    """Flags shared by every subcommand; defaults differ per command."""

    def decorate(func):
        options = [
            click.option("--n-rounds", type=int, default=n_rounds, show_default=True, help="N; the run lasts 2N periods."),
            click.option("--epsilon", type=float, default=None, help="Partition parameter; defaults to pi/(2N)."),
            click.option("--delta-theta", type=float, default=delta_theta, show_default=True, help="Rotor packet half-width."),
            click.option("--grid", type=int, default=grid, show_default=True, help="Rotor grid size G (power of two)."),
            click.option("--family", type=click.Choice(FAMILIES), default="gaussian", show_default=True),
            click.option("--postselect", type=click.Choice(["up_x", "down_x"]), default="up_x", show_default=True),
            click.option(
                "--ideal/--physical",
                default=ideal,
                show_default=True,
                help="--ideal drops the finite-epsilon leakage of the up branch; --physical keeps it.",
            ),
            click.option("--output", type=click.Choice(["json", "csv"]), default="json", show_default=True),
            click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the report here."),
            click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None, help="Also write a plot."),
            click.option("--seed", type=int, default=None, help="Reserved; runs are deterministic."),
        ]
        for option in reversed(options):
            func = option(func)
        return func

    return decorate


def build_config(
    n_rounds: int,
    epsilon: float | None,
    delta_theta: float,
    grid: int,
    family: str,
    postselect: str,
    ideal: bool,
    **extra,
) -> ExperimentConfig:
    return ExperimentConfig(
        n_rounds=n_rounds,
        epsilon=epsilon,
        rotor=RotorSpec(grid_size=grid, delta_theta=delta_theta, family=family),
        postselect_spin=postselect,
        ideal=ideal,
        **extra,
    )


@contextmanager
def timed(timings: dict[str, float], phase: str):
    start = time.perf_counter()
    yield
    timings[phase] = time.perf_counter() - start


def _resolve(path: str) -> pathlib.Path:
    resolved = pathlib.Path(path)
    if not resolved.is_absolute():
        resolved = get_settings().output_dir / resolved
    resolved.parent.mkdir(parents=True, exist_ok=True)
    return resolved


def emit(command: str, config, results, timings, output: str, out_path: str | None, svg_path: str | None):
    envelope = build_envelope(command, config, results, timings)
    text = to_json(envelope) if output == "json" else to_csv(envelope)
    if out_path:
        target = _resolve(out_path)
        target.write_text(text)
        logger.info(f"Wrote {output} report to {target}")
    else:
        click.echo(text)
    if svg_path:
        try:
            write_svg(envelope, _resolve(svg_path))
        except ValueError as exc:
            raise click.UsageError(str(exc))
    return envelope


def reserved_seed(func):
    @functools.wraps(func)
    def wrapper(*args, seed=None, **kwargs):
        if seed is not None:
            logger.debug(f"--seed {seed} ignored: runs are deterministic")
        return func(*args, **kwargs)

    return wrapper
