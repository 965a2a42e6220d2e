# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""The tunnel_clock command-line tool: scans, working points, budgets and self-checks."""

from __future__ import annotations

import dataclasses
import io
import pathlib
import sys
import typing

import click

from . import config
from . import defs
from . import design
from . import diag
from . import presets
from . import report
from . import scan
from . import validate


if typing.TYPE_CHECKING:
    from typing import Final


@dataclasses.dataclass
class ConfigHolder:
    """Pass the context to the command-line subcommand handler."""

    verbose: bool = False


CONFIG_PATH: Final = click.Path(
    exists=True,
    file_okay=True,
    dir_okay=False,
    readable=True,
    resolve_path=True,
    path_type=pathlib.Path,
)

OUTPUT_PATH: Final = click.Path(
    dir_okay=False,
    file_okay=True,
    writable=True,
    resolve_path=True,
    path_type=pathlib.Path,
)


def _verbose(ctx: click.Context) -> bool:
    """Set up the diagnostic output, return the verbosity flag."""
    cfg_hold: Final = ctx.find_object(ConfigHolder)
    assert isinstance(cfg_hold, ConfigHolder)  # noqa: S101  # mypy needs this
    diag.setup_logger(verbose=cfg_hold.verbose)
    return cfg_hold.verbose


def _emit(text: str, out: pathlib.Path | None) -> None:
    """Write the output to a file or to the standard output stream."""
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    try:
        out.write_text(text if text.endswith("\n") else text + "\n", encoding="UTF-8")
    except OSError as err:
        raise defs.TunnelClockError(f"Could not write out {out}: {err}") from err


@click.command(name="scan")
@click.option("-c", "--config", "config_path", type=CONFIG_PATH, required=True, help="the run file")
@click.option("-o", "--out", type=OUTPUT_PATH, help="the file to write the data to")
@click.option("-f", "--format", "fmt", type=click.Choice(["csv", "json"]), help="the data format")
@click.option("-t", "--threads", type=click.IntRange(min=1), help="the number of worker threads")
@click.pass_context
def cmd_scan(
    ctx: click.Context,
    *,
    config_path: pathlib.Path,
    out: pathlib.Path | None,
    fmt: str | None,
    threads: int | None,
) -> None:
    """Evaluate a quantity over the grid described in a run file."""
    verbose: Final = _verbose(ctx)
    try:
        run: Final = config.load_config(config_path)
        settings: Final = config.resolve_numerics(run.numerics, threads=threads, verbose=verbose)
        result: Final = scan.run_scan(config.resolve_scan(run), config=settings)

        if (fmt or run.output.format) == "json":
            text = scan.to_json(result)
        else:
            stream = io.StringIO()
            scan.write_csv(result, stream)
            text = stream.getvalue()
        _emit(text, out or (pathlib.Path(run.output.path) if run.output.path else None))
    except defs.TunnelClockError as err:
        print(str(err), file=sys.stderr)
        sys.exit(1)


@click.command(name="working-point")
@click.option("-s", "--species", default="yb174", help="the species preset")
@click.option("-V", "--vbar", type=float, default=presets.WORKING_V_BAR, help="barrier parameter")
@click.option("-E", "--ebar", type=float, help="the scaled energy; the optimum if not specified")
@click.option("--spread", type=float, default=0.0, help="the relative momentum spread")
@click.option("-f", "--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def cmd_working_point(  # noqa: PLR0913  # the command-line options
    ctx: click.Context,
    *,
    species: str,
    vbar: float,
    ebar: float | None,
    spread: float,
    fmt: str,
) -> None:
    """Report the tunneling time, the transmission and its flatness at a working point."""
    _verbose(ctx)
    try:
        clock_species: Final = presets.get_species(species)
        if ebar is None:
            point = design.optimal_working_point(vbar, clock_species, spread=spread)
        else:
            point = design.working_point(ebar, vbar, clock_species, spread=spread)
        if fmt == "json":
            print(report.as_json({"species": clock_species, "point": point}))
        else:
            print(report.render_working_point(point, clock_species))
    except defs.TunnelClockError as err:
        print(str(err), file=sys.stderr)
        sys.exit(1)


@click.command(name="budget")
@click.option("-c", "--config", "config_path", type=CONFIG_PATH, required=True, help="the run file")
@click.option("-o", "--out", type=OUTPUT_PATH, help="the file to write the report to")
@click.option("-f", "--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def cmd_budget(
    ctx: click.Context,
    *,
    config_path: pathlib.Path,
    out: pathlib.Path | None,
    fmt: str,
) -> None:
    """Report the phase budget and the runs needed, with and without a boost."""
    verbose: Final = _verbose(ctx)
    try:
        run: Final = config.load_config(config_path)
        species: Final = config.resolve_species(run.species)
        budget: Final = report.budget_report(
            run.budget,
            species,
            config.resolve_perturbations(run.perturbations),
            split_barrier=config.resolve_barrier(run.barrier, species),
            config=config.resolve_numerics(run.numerics, verbose=verbose),
        )
        text: Final = report.as_json(budget) if fmt == "json" else report.render_budget(budget)
        _emit(text, out)
    except defs.TunnelClockError as err:
        print(str(err), file=sys.stderr)
        sys.exit(1)


@click.command(name="validate")
@click.option("-s", "--species", default="rb87", help="the species preset")
@click.option("-f", "--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def cmd_validate(ctx: click.Context, *, species: str, fmt: str) -> None:
    """Run the self-checks, exit with a non-zero code if any of them fail."""
    _verbose(ctx)
    try:
        clock_species: Final = presets.get_species(species)
        results: Final = validate.run_suite(clock_species)
        if fmt == "json":
            print(report.as_json(results))
        else:
            print(report.render_checks(results, clock_species))
    except defs.TunnelClockError as err:
        print(str(err), file=sys.stderr)
        sys.exit(1)

    if not all(res.passed for res in results):
        sys.exit(1)


@click.command(name="features")
def cmd_features() -> None:
    """Display the features supported by tunnel_clock."""
    print(
        f"Features: tunnel_clock={defs.VERSION} "
        f"format={defs.FORMAT_VERSION[0]}.{defs.FORMAT_VERSION[1]} "
        f"scan={'/'.join(item.value for item in scan.Quantity)}",
    )


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="verbose operation; display diagnostic output")
@click.pass_context
def main(ctx: click.Context, *, verbose: bool) -> None:
    """Simulate Ramsey clocks tunneling through potential barriers."""
    ctx.ensure_object(ConfigHolder)
    ctx.obj.verbose = verbose


main.add_command(cmd_budget)
main.add_command(cmd_features)
main.add_command(cmd_scan)
main.add_command(cmd_validate)
main.add_command(cmd_working_point)


if __name__ == "__main__":
    main()
