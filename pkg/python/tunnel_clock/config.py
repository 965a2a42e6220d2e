# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Load run configuration files and resolve them into model objects."""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
import sys
import typing

import typedload.dataloader

from . import defs
from . import presets
from . import scan
from . import units
from .barrier import BarrierProfile
from .clock import ClockSpecies
from .clock import PerturbationSet
from .units import CONSTANTS


if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

if typing.TYPE_CHECKING:
    import pathlib
    from typing import Any, Final


NANOKELVIN: Final = 1e-9


@dataclasses.dataclass(frozen=True)
class DataFormatVersion:
    """The version of the config file format."""

    major: int
    minor: int


@dataclasses.dataclass(frozen=True)
class DataFormat:
    """The format metadata, currently only the version."""

    version: DataFormatVersion


@dataclasses.dataclass(frozen=True)
class SpeciesSection:
    """The clock species: a preset name or explicit values."""

    preset: str | None = None
    name: str | None = None
    mass_u: float | None = None
    mean_frequency_hz: float | None = None
    clock_frequency_hz: float | None = None


@dataclasses.dataclass(frozen=True)
class BarrierSection:
    """The barrier: a preset name or a shape with its parameters."""

    preset: str | None = None
    shape: str | None = None
    height_j: float | None = None
    height_nk: float | None = None
    width_m: float | None = None
    sigma_m: float | None = None
    vbar: float | None = None
    delta_v_hz: float = 0.0
    samples: list[list[float]] | None = None


@dataclasses.dataclass(frozen=True)
class GridSection:
    """The scan grid and the quantity evaluated on it."""

    quantity: str = "transmission"
    e_min: float = 0.1
    e_max: float = 3.0
    e_count: int = 200
    v_min: float = 0.5
    v_max: float = 6.0
    v_count: int = 200
    t_min: float = 0.0
    t_max: float = 1e-14
    t_count: int = 200


@dataclasses.dataclass(frozen=True)
class PerturbationSection:
    """Relative state-dependent differences beyond the mass defect."""

    mass_rel: float = 0.0
    momentum_rel: float = 0.0
    barrier_rel: float = 0.0


@dataclasses.dataclass(frozen=True)
class PacketSection:
    """A Gaussian momentum packet, its spread relative to the central momentum."""

    spread: float = 0.01


@dataclasses.dataclass(frozen=True)
class BudgetSection:
    """The Ramsey sequence and the run budget."""

    e_bar: float = presets.WORKING_E_BAR
    v_bar: float = presets.WORKING_V_BAR
    lab_time: float = 0.0
    wavenumber: float = presets.YB_BRAGG_WAVENUMBER
    atoms: int = 100_000
    contrast: float = 1.0
    boost_shift_hz: float = 0.0
    larmor_height_j: float | None = None
    larmor_freq_hz: float | None = None


@dataclasses.dataclass(frozen=True)
class NumericsSection:
    """Overrides of the numerical settings."""

    guard_band: float | None = None
    gaussian_cutoff: float | None = None
    slab_start: int | None = None
    slab_max: int | None = None
    tm_rel_tol: float | None = None
    slab_edge_guard: float | None = None
    fd_step: float | None = None
    quad_abs_tol: float | None = None
    quad_rel_tol: float | None = None
    quad_limit: int | None = None
    packet_cutoff_sigmas: float | None = None
    scan_points: int | None = None
    scan_min: float | None = None
    scan_max: float | None = None
    golden_tol: float | None = None
    threads: int | None = None


@dataclasses.dataclass(frozen=True)
class OutputSection:
    """Where and how to write the results."""

    path: str | None = None
    format: str = "csv"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """A complete run configuration."""

    species: SpeciesSection
    barrier: BarrierSection | None = None
    grid: GridSection = GridSection()
    perturbations: PerturbationSection = PerturbationSection()
    packet: PacketSection | None = None
    budget: BudgetSection = BudgetSection()
    numerics: NumericsSection = NumericsSection()
    output: OutputSection = OutputSection()


@functools.lru_cache(maxsize=2)
def typed_loader(*, failonextra: bool = False) -> typedload.dataloader.Loader:
    """Prepare a loader that can parse annotated types."""
    return typedload.dataloader.Loader(pep563=True, failonextra=failonextra)


def parse_config(text: str, source: str) -> RunConfig:
    """Parse the TOML text of a run configuration."""
    try:
        raw: Final = tomllib.loads(text)
    except ValueError as err:
        raise defs.ConfigError(f"Could not parse the {source} config file as TOML: {err}") from err

    try:
        raw_format: Final = raw.pop("format")
    except KeyError as err:
        raise defs.ConfigError(f"No 'format' section in the {source} config file") from err
    try:
        data_format: Final = typed_loader().load(raw_format, DataFormat)
    except (TypeError, AttributeError, KeyError, ValueError) as err:
        raise defs.ConfigError(
            f"Could not read the 'format' section of the {source} config file: {err}",
        ) from err
    if data_format.version.major != defs.FORMAT_VERSION[0]:
        raise defs.ConfigError(
            f"Unsupported format version {data_format.version.major}."
            f"{data_format.version.minor} for the {source} config file, "
            f"only {defs.FORMAT_VERSION[0]}.x supported so far",
        )

    try:
        return typed_loader(failonextra=True).load(raw, RunConfig)
    except (TypeError, AttributeError, KeyError, ValueError) as err:
        raise defs.ConfigError(f"Invalid format for the {source} config file: {err}") from err


def load_config(path: pathlib.Path) -> RunConfig:
    """Read and parse a run configuration file."""
    logging.debug("Loading the run configuration from %(path)s", {"path": path})
    try:
        text: Final = path.read_text(encoding="UTF-8")
    except OSError as err:
        raise defs.ConfigError(f"Could not read the {path} config file: {err}") from err
    return parse_config(text, str(path))


def _explicit(section: Any) -> list[str]:  # noqa: ANN401  # any section dataclass
    """Return the names of the fields, other than the preset, that were changed."""
    return [
        field.name
        for field in dataclasses.fields(section)
        if field.name != "preset" and getattr(section, field.name) != field.default
    ]


def resolve_species(section: SpeciesSection) -> ClockSpecies:
    """Build the clock species described by a config section."""
    try:
        if section.preset is not None:
            if extra := _explicit(section):
                raise defs.ConfigError(
                    f"species: a preset cannot be combined with {', '.join(extra)}",
                )
            return presets.get_species(section.preset)

        if section.name is None or section.clock_frequency_hz is None:
            raise defs.ConfigError("species: either a preset or a name and a clock frequency")
        clock_frequency: Final = 2 * math.pi * section.clock_frequency_hz
        if section.mean_frequency_hz is not None:
            return ClockSpecies.from_mean_frequency(
                section.name,
                2 * math.pi * section.mean_frequency_hz,
                clock_frequency,
            )
        if section.mass_u is None:
            raise defs.ConfigError("species: either mass_u or mean_frequency_hz is needed")
        return ClockSpecies.from_mass_u(section.name, section.mass_u, clock_frequency)
    except defs.DomainError as err:
        raise defs.ConfigError(f"species: {err}") from err


def _barrier_height(section: BarrierSection) -> float:
    """Return the barrier height in J."""
    if section.height_j is not None:
        if section.height_nk is not None:
            raise defs.ConfigError("barrier: only one of height_j and height_nk may be given")
        return section.height_j
    if section.height_nk is not None:
        return CONSTANTS.k_b * section.height_nk * NANOKELVIN
    raise defs.ConfigError("barrier: the height is needed (height_j or height_nk)")


def _barrier_width(
    section: BarrierSection,
    shape: defs.BarrierShape,
    height: float,
    species: ClockSpecies,
) -> float:
    """Return the width (a or sigma) either directly or from the barrier parameter."""
    direct: Final = section.width_m if shape == defs.BarrierShape.RECTANGULAR else section.sigma_m
    if direct is not None:
        if section.vbar is not None:
            raise defs.ConfigError("barrier: either a width or vbar, not both")
        return direct
    if section.vbar is None:
        raise defs.ConfigError(f"barrier: a {shape.value} barrier needs a width or vbar")
    _, width = units.from_dimensionless(
        units.DimensionlessPoint(e_bar=1.0, v_bar=section.vbar),
        height,
        species,
        shape=shape,
    )
    return width


def resolve_barrier(
    section: BarrierSection | None,
    species: ClockSpecies,
) -> BarrierProfile | None:
    """Build the barrier profile described by a config section."""
    if section is None:
        return None
    try:
        if section.preset is not None:
            if extra := _explicit(section):
                raise defs.ConfigError(
                    f"barrier: a preset cannot be combined with {', '.join(extra)}",
                )
            return presets.get_barrier(section.preset)

        if section.shape is None:
            raise defs.ConfigError("barrier: either a preset or a shape is needed")
        try:
            shape: Final = defs.BarrierShape(section.shape)
        except ValueError as err:
            raise defs.ConfigError(f"barrier: unknown shape {section.shape!r}") from err
        delta_v: Final = CONSTANTS.hbar * section.delta_v_hz

        if shape == defs.BarrierShape.TABULATED:
            samples: Final = section.samples or []
            if len(samples) < 3 or any(len(pair) != 2 for pair in samples):
                raise defs.ConfigError("barrier: a tabulated barrier needs [x, V] samples")
            return BarrierProfile.tabulated(
                [pair[0] for pair in samples],
                [pair[1] for pair in samples],
                delta_v=delta_v,
            )

        height: Final = _barrier_height(section)
        width: Final = _barrier_width(section, shape, height, species)
        if shape == defs.BarrierShape.GAUSSIAN:
            return BarrierProfile.gaussian(height, width, delta_v=delta_v)
        return BarrierProfile.rectangular(height, width, delta_v=delta_v)
    except defs.DomainError as err:
        raise defs.ConfigError(f"barrier: {err}") from err


def resolve_perturbations(section: PerturbationSection) -> PerturbationSet:
    """Build the perturbation set described by a config section."""
    try:
        return PerturbationSet(
            mass_rel=section.mass_rel,
            momentum_rel=section.momentum_rel,
            barrier_rel=section.barrier_rel,
        )
    except defs.DomainError as err:
        raise defs.ConfigError(f"perturbations: {err}") from err


def resolve_numerics(
    section: NumericsSection,
    *,
    threads: int | None = None,
    verbose: bool = False,
) -> defs.Config:
    """Apply the overrides to the default numerical settings."""
    overrides: Final = {
        field.name: getattr(section, field.name)
        for field in dataclasses.fields(section)
        if getattr(section, field.name) is not None
    }
    if threads is not None:
        overrides["threads"] = threads
    try:
        return dataclasses.replace(defs.DEFAULT_CONFIG, verbose=verbose, **overrides)
    except defs.DomainError as err:
        raise defs.ConfigError(f"numerics: {err}") from err


def resolve_scan(run: RunConfig) -> scan.ScanRequest:
    """Build the scan request described by a whole run configuration."""
    try:
        quantity: Final = scan.Quantity(run.grid.quantity)
    except ValueError as err:
        known: Final = ", ".join(item.value for item in scan.Quantity)
        raise defs.ConfigError(
            f"grid: unknown quantity {run.grid.quantity!r}, known: {known}",
        ) from err

    species: Final = resolve_species(run.species)
    grid: Final = run.grid
    try:
        if quantity == scan.Quantity.FRINGE:
            return scan.ScanRequest(
                quantity=quantity,
                species=species,
                times=scan.time_grid(grid.t_min, grid.t_max, grid.t_count),
                barrier=resolve_barrier(run.barrier, species),
                perturb=resolve_perturbations(run.perturbations),
                e_bar=run.budget.e_bar,
                v_bar=run.budget.v_bar,
                wavenumber=run.budget.wavenumber,
            )
        return scan.ScanRequest(
            quantity=quantity,
            species=species,
            e_bars=scan.linear_grid(grid.e_min, grid.e_max, grid.e_count, name="scaled energy"),
            v_bars=scan.linear_grid(
                grid.v_min,
                grid.v_max,
                grid.v_count,
                name="barrier parameter",
            ),
            barrier=resolve_barrier(run.barrier, species),
            spread=(run.packet or PacketSection()).spread,
            atoms=run.budget.atoms,
        )
    except defs.DomainError as err:
        raise defs.ConfigError(f"grid: {err}") from err
