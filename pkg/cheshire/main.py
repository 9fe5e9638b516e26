# main.py

import logging
import sys

from cheshire.config import get_settings, load_env

# ─── 1) Load .env before ANYTHING else that reads environment vars ───
env_path = load_env()

# ─── 2) Now safe to import modules that read settings ───
import click  # noqa: E402
from pydantic import ValidationError  # noqa: E402

from cheshire.commands import backward, flux, momentum, shift, sweep  # noqa: E402
from cheshire.errors import SimulationError  # noqa: E402

logger = logging.getLogger("cheshire.main")


def configure_logging(level: str):
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("cheshire").setLevel(level)
    if env_path is not None:
        logger.info(f"Loaded .env from {env_path}")
    else:
        logger.debug(".env not found; using system environment variables")


class CheshireGroup(click.Group):
    """Maps domain errors onto exit codes: 1 usage, 2 post-selection, 3 model validity."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
            code = result if isinstance(result, int) else 0
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            code = 1
        except click.ClickException as exc:
            exc.show()
            code = 1
        except ValidationError as exc:
            click.echo(f"Error: invalid configuration\n{exc}", err=True)
            code = 1
        except SimulationError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            click.echo(f"Error: {exc}", err=True)
            code = exc.exit_code
        except ValueError as exc:
            click.echo(f"Error: {exc}", err=True)
            code = 1
        if standalone_mode:
            sys.exit(code)
        return code


# ─── 3) Create and configure the command group ───
@click.group(cls=CheshireGroup, name="cheshire")
@click.option("--log-level", default=None, help="Overrides CHESHIRE_LOG_LEVEL.")
def cli(log_level):
    """Angular momentum carried by a particle's spin where the particle is not."""
    configure_logging((log_level or get_settings().log_level).upper())


# ─── 4) Mount the subcommands ───
for module in (shift, flux, momentum, sweep, backward):
    cli.add_command(module.command)


if __name__ == "__main__":
    cli()
