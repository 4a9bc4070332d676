"""CLI adapter wiring the run behaviors into a rich-click interface.

Purpose
-------
Expose every computation as a subcommand with a shared set of run flags.
The CLI only assembles configuration, calls :func:`solspec.behaviors.execute`
and writes the rendered report; all mathematics lives in the library.

Contents
--------
* :data:`CLICK_CONTEXT_SETTINGS` - shared Click settings for consistent help.
* :func:`cli` - root command group with global options.
* ``ball``, ``doubling``, ``algebra``, ``spectrum``, ``summability``,
  ``commutator``, ``mk-bound``, ``inductive``, ``wiener``, ``selftest`` -
  computation subcommands.
* ``info``, ``config-show`` - metadata and configuration inspection.
* :func:`main` - entry point for console scripts, mapping errors to exit codes.

Exit codes
----------
``0`` success, ``1`` failed checks or unexpected errors, ``2`` configuration
or usage errors, ``3`` resource caps.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import rich_click as click
from click.exceptions import Abort, ClickException
from rich.console import Console
from rich.style import Style
from rich.traceback import Traceback
from rich.traceback import install as install_rich_traceback

from . import __init__conf__
from .behaviors import Runtime, execute
from .config import (
    get_config,
    get_json_indent,
    get_limits,
    get_log_level,
    get_max_workers,
    get_numerics,
    get_run_defaults,
    get_schema_version,
    get_section,
)
from .errors import ConfigError, ResourceLimitError
from .logging_utils import log_dict, setup_logger
from .reports import render_csv, render_json, write_output
from .run_config import build_run_config

#: Shared Click context flags for consistent help output.
CLICK_CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}

#: Exit code for configuration and usage errors.
EXIT_CONFIG = 2
#: Exit code for resource cap violations.
EXIT_RESOURCE = 3

#: Console for rich output
console = Console()
error_console = Console(stderr=True)

logger = logging.getLogger(__name__)

_RUN_OPTIONS: list[Callable[[Callable[..., Any]], Callable[..., Any]]] = [
    click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Flat key = value run file"),
    click.option("--p", "p", type=int, default=None, help="The prime p (default: 2)"),
    click.option("--theta0", "theta0", default=None, help="Level-zero angle num/den in [0, 1)"),
    click.option("--digits", "period", default=None, help="Repeated digit block of theta, comma separated"),
    click.option("--preperiod", "preperiod", default=None, help="Leading digits of theta, comma separated"),
    click.option("--spec", "spec", default=None, help="Length: base | sum | restricted:n | restricted-base:n | z2:n"),
    click.option("--radius", "--R", "radius", default=None, help="Ball radius (exact rational)"),
    click.option("--radii", "radii", default=None, help="Comma separated radii"),
    click.option("--t", "t", type=float, default=None, help="Summability exponent or resolvent parameter"),
    click.option("--shells", "shells", type=int, default=None, help="Number of dyadic shells"),
    click.option("--level", "level", type=int, default=None, help="Level for the Weyl relation"),
    click.option("--j", "j", type=int, default=None, help="Source level of the inductive morphism"),
    click.option("--k", "k", type=int, default=None, help="Target level of the inductive morphism"),
    click.option("--order", "order", type=int, default=None, help="Highest commutator order"),
    click.option("--tol", "tol", type=float, default=None, help="Numerical tolerance"),
    click.option("--nmax", "nmax", type=int, default=None, help="Largest number of Neumann terms"),
    click.option("--q-schedule", "q_schedule", default=None, help="Tail exponents q, comma separated"),
    click.option("--s-schedule", "s_schedule", default=None, help="Norm weights s, comma separated"),
    click.option("--c-values", "c_values", default=None, help="Spectral consistency test points, comma separated"),
    click.option("--gamma", "gamma", default=None, help='Group element, e.g. "(1/2, 3)"'),
    click.option("--input", "input", default=None, help="Element file (JSON list of {gamma, re, im})"),
    click.option("--other", "other", default=None, help="Second element file for products"),
    click.option("--operation", "operation", type=click.Choice(["norm", "product", "adjoint"]), default=None, help="Algebra operation"),
    click.option("--out", "out", default=None, help="Write the report to this path instead of stdout"),
    click.option("--format", "format", type=click.Choice(["json", "csv"]), default=None, help="Report format (default: json)"),
    click.option(
        "--log-level",
        "log_level",
        type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
        default=None,
        help="Log level (default: general.log_level)",
    ),
]


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the shared run flags to a subcommand."""
    for option in reversed(_RUN_OPTIONS):
        func = option(func)
    return func


def _configure_logging(level_name: str | None) -> None:
    level = getattr(logging, level_name.upper()) if level_name else get_log_level()
    setup_logger(__init__conf__.name, level=level)


def _run(command: str, flags: dict[str, Any]) -> None:
    """Build the run config, execute ``command`` and emit its report."""
    config_file = flags.pop("config_file", None)
    config = build_run_config(get_run_defaults(), config_file, flags)
    _configure_logging(config.log_level)
    log_dict(logger, config.echo(), title=f"{command} configuration", level=logging.DEBUG)
    runtime = Runtime.from_settings(get_limits(), get_numerics(), get_max_workers())
    report, table = execute(command, config, runtime, get_schema_version())
    text = render_csv(table) if config.format == "csv" and table is not None else render_json(report, get_json_indent())
    if config.out:
        path = write_output(text, config.out)
        logger.info("report written to %s", path)
    else:
        click.echo(text, nl=False)
    if report.passed is False:
        raise SystemExit(1)


@click.group(
    help=__init__conf__.title,
    context_settings=CLICK_CONTEXT_SETTINGS,
    invoke_without_command=True,
)
@click.version_option(
    version=__init__conf__.version,
    prog_name=__init__conf__.shell_command,
    message=f"{__init__conf__.shell_command} version {__init__conf__.version}",
)
@click.option(
    "--traceback/--no-traceback",
    is_flag=True,
    default=False,
    help="Show full Python traceback on errors (default: enabled)",
)
@click.pass_context
def cli(ctx: click.Context, traceback: bool) -> None:
    """Root command storing global flags.

    Examples
    --------
    >>> from click.testing import CliRunner
    >>> runner = CliRunner()
    >>> result = runner.invoke(cli, ["ball", "--p", "2", "--R", "2"])
    >>> result.exit_code
    0
    """
    ctx.ensure_object(dict)
    ctx.obj["traceback"] = traceback

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command("info", context_settings=CLICK_CONTEXT_SETTINGS)
def cli_info() -> None:
    """Print resolved metadata so users can inspect installation details."""
    __init__conf__.print_info()


@cli.command("config-show", context_settings=CLICK_CONTEXT_SETTINGS)
@click.option(
    "--section",
    "-s",
    default=None,
    help="Show only specific section (e.g., 'limits', 'numerics')",
)
@click.option(
    "--json",
    "as_json",
    is_flag=True,
    help="Output as JSON instead of TOML-like format",
)
def cli_config_show(section: str | None, as_json: bool) -> None:
    """Show the effective layered configuration.

    Merges package defaults, user config, project config and environment
    variables (``SOLSPEC___<SECTION>__<KEY>``).
    """
    if section:
        data = get_section(section)
        if not data:
            console.print(f"[yellow]Section '{section}' not found or empty[/yellow]")
            return
    else:
        data = dict(get_config())

    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        _print_config_toml(data)


def _print_config_toml(data: dict[str, Any], prefix: str = "") -> None:
    """Print configuration in TOML-like format."""
    for key, value in data.items():
        if isinstance(value, dict):
            _print_config_toml(value, prefix=f"{prefix}{key}.")
        elif isinstance(value, bool):
            click.echo(f"{prefix}{key} = {'true' if value else 'false'}")
        elif isinstance(value, str):
            click.echo(f'{prefix}{key} = "{value}"')
        else:
            click.echo(f"{prefix}{key} = {value}")


@cli.command("ball", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_ball(**flags: Any) -> None:
    """Enumerate the ball B(R) of a length function (default spec: base)."""
    _run("ball", flags)


@cli.command("doubling", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_doubling(**flags: Any) -> None:
    """Check bounded doubling and p-dilation over --radii (default spec: base)."""
    _run("doubling", flags)


@cli.command("algebra", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_algebra(**flags: Any) -> None:
    """Norms, adjoints and twisted products of element files."""
    _run("algebra", flags)


@cli.command("spectrum", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_spectrum(**flags: Any) -> None:
    """Eigenvalues of the truncated Dirac operator on B(R)."""
    _run("spectrum", flags)


@cli.command("summability", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_summability(**flags: Any) -> None:
    """Partial traces of (1 + D^2)^(-t/2) over dyadic balls."""
    _run("summability", flags)


@cli.command("commutator", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_commutator(**flags: Any) -> None:
    """Norms of iterated commutators [D, .] against their weighted bounds."""
    _run("commutator", flags)


@cli.command("mk-bound", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_mk_bound(**flags: Any) -> None:
    """Certified lower bound on the Monge-Kantorovich distance of two states."""
    _run("mk-bound", flags)


@cli.command("inductive", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_inductive(**flags: Any) -> None:
    """Check the level-j to level-k morphism, resolvent gap and Weyl relation."""
    _run("inductive", flags)


@cli.command("wiener", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_wiener(**flags: Any) -> None:
    """Invert delta_e - f by its Neumann series and tabulate smoothness evidence."""
    _run("wiener", flags)


@cli.command("selftest", context_settings=CLICK_CONTEXT_SETTINGS)
@run_options
def cli_selftest(**flags: Any) -> None:
    """Run the small-scale acceptance suite; exits 1 if any check fails."""
    _run("selftest", flags)


def _print_error(exc: BaseException) -> None:
    error_console.print(f"Error: {type(exc).__name__}: {exc}", style=Style(color="red", bold=True))


def main(
    argv: Sequence[str] | None = None,
) -> int:
    """Execute the CLI and return the exit code.

    This is the entry point used by console scripts and python -m execution.

    Parameters
    ----------
    argv:
        Optional sequence of CLI arguments. None uses sys.argv.

    Returns
    -------
    int
        ``0`` on success, ``1`` for failed checks and unexpected errors,
        ``2`` for configuration errors, ``3`` for resource caps.
    """
    import sys as _sys

    argv_list = list(argv) if argv else _sys.argv[1:]
    show_traceback = "--no-traceback" not in argv_list

    if show_traceback:
        install_rich_traceback(show_locals=True)

    try:
        # Use standalone_mode=False to catch exceptions ourselves
        cli(args=argv, standalone_mode=False, prog_name=__init__conf__.shell_command)
        return 0
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (1 if e.code else 0)
    except ClickException as exc:
        exc.show()
        return exc.exit_code
    except Abort:
        return 1
    except ConfigError as exc:
        _print_error(exc)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        _print_error(exc)
        return EXIT_RESOURCE
    except Exception as exc:
        if show_traceback:
            tb = Traceback.from_exception(
                type(exc),
                exc,
                exc.__traceback__,
                show_locals=True,
                width=120,
            )
            error_console.print(tb)
        else:
            _print_error(exc)
        return 1
