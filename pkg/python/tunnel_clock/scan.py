# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Evaluate a quantity over a parameter grid and write it out.

Rows are computed by a pool of worker threads, but are always assembled in
grid order: the barrier parameter varies slowest, the scaled energy fastest.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import enum
import functools
import json
import logging
import math
import typing
from typing import NamedTuple

import numpy as np

from . import clock
from . import defs
from . import design
from . import presets
from . import scatter_rect
from . import transfer_matrix
from . import wavepacket
from .defs import BarrierShape
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import IO, Callable, Final

    from .barrier import BarrierProfile
    from .clock import ClockSpecies
    from .clock import PerturbationSet


DEFAULT_HEIGHT_KELVIN: Final = 200e-9
"""The barrier height used for dimensional quantities if no barrier is configured."""


class Quantity(str, enum.Enum):
    """The quantities a scan can produce."""

    TRANSMISSION = "transmission"
    TUNNELING_TIME = "tunneling-time"
    PHASE = "phase"
    PACKET_TAU = "packet-tau"
    BUDGET = "budget"
    RIDGE = "ridge"
    FRINGE = "fringe"
    COMPARE = "compare"


COLUMNS: Final = {
    Quantity.TRANSMISSION: ("eBar", "vBar", "T"),
    Quantity.TUNNELING_TIME: ("eBar", "vBar", "T", "omega_tau"),
    Quantity.PHASE: ("eBar", "vBar", "phase_rad", "phase_free_rad"),
    Quantity.PACKET_TAU: ("eBar", "vBar", "N_T", "omega_tau_packet", "omega_tau"),
    Quantity.BUDGET: ("eBar", "vBar", "tau_s", "phase_rad", "runs"),
    Quantity.RIDGE: ("vBar", "eStar", "omega_tau_max", "tau_max_s"),
    Quantity.FRINGE: ("t_s", "phase_rad", "intensity"),
    Quantity.COMPARE: ("eBar", "vBar", "T_rect", "T_smooth", "omega_tau_rect", "omega_tau_smooth"),
}
"""The column contract of every quantity."""


def linear_grid(lower: float, upper: float, count: int, *, name: str) -> tuple[float, ...]:
    """Return `count` evenly spaced positive values from `lower` to `upper`."""
    if count < 2:
        raise defs.DomainError(f"The {name} grid needs at least two points, got {count}")
    if not (math.isfinite(lower) and math.isfinite(upper) and 0 < lower < upper):
        raise defs.DomainError(
            f"The {name} range must be positive and ordered, got [{lower!r}, {upper!r}]",
        )
    return tuple(float(value) for value in np.linspace(lower, upper, count))


def time_grid(lower: float, upper: float, count: int) -> tuple[float, ...]:
    """Return `count` evenly spaced non-negative Ramsey times."""
    if count < 2:
        raise defs.DomainError(f"The time grid needs at least two points, got {count}")
    if not (math.isfinite(lower) and math.isfinite(upper) and 0 <= lower < upper):
        raise defs.DomainError(
            f"The time range must be non-negative and ordered, got [{lower!r}, {upper!r}]",
        )
    return tuple(float(value) for value in np.linspace(lower, upper, count))


@dataclasses.dataclass(frozen=True)
class ScanRequest:
    """Everything needed to evaluate one scan."""

    quantity: Quantity
    """The quantity to evaluate."""

    species: ClockSpecies
    """The clock species."""

    e_bars: tuple[float, ...] = ()
    """The scaled energies of the grid."""

    v_bars: tuple[float, ...] = ()
    """The barrier parameters of the grid."""

    times: tuple[float, ...] = ()
    """The Ramsey times of a fringe scan."""

    barrier: BarrierProfile | None = None
    """The barrier the packet and comparison scans stretch to each barrier parameter.

    Its peak height fixes the dimensional quantities, its height split enters
    the fringe scan.
    """

    perturb: PerturbationSet = clock.NO_PERTURBATION
    """The state-dependent perturbations of a fringe scan."""

    spread: float = 0.01
    """The relative momentum spread of a packet scan."""

    e_bar: float = presets.WORKING_E_BAR
    """The scaled energy of a fringe scan."""

    v_bar: float = presets.WORKING_V_BAR
    """The barrier parameter of a fringe scan."""

    wavenumber: float = presets.YB_BRAGG_WAVENUMBER
    """The clock momentum hbar k of a fringe scan, in 1/m."""

    atoms: int = design.DEFAULT_ATOMS
    """The atoms per run of a budget scan."""

    def __post_init__(self) -> None:
        """Make sure the grid fits the quantity."""
        if self.quantity == Quantity.FRINGE:
            if len(self.times) < 2:
                raise defs.DomainError("A fringe scan needs at least two Ramsey times")
            defs.check_positive("wavenumber", self.wavenumber)
            return
        if len(self.v_bars) < 2:
            raise defs.DomainError("A scan needs at least two barrier parameters")
        if self.quantity != Quantity.RIDGE and len(self.e_bars) < 2:
            raise defs.DomainError("A scan needs at least two scaled energies")
        if self.quantity == Quantity.PACKET_TAU:
            defs.check_positive("momentum spread", self.spread)
        if (
            self.quantity == Quantity.COMPARE
            and self.barrier is not None
            and self.barrier.shape == BarrierShape.RECTANGULAR
        ):
            raise defs.DomainError("A comparison needs a smooth barrier, not a rectangular one")

    @property
    def height(self) -> float:
        """The barrier height used for dimensional quantities in J."""
        if self.barrier is not None:
            return self.barrier.peak_height
        return CONSTANTS.k_b * DEFAULT_HEIGHT_KELVIN


class ScanResult(NamedTuple):
    """The evaluated grid in deterministic row order."""

    quantity: Quantity
    """The quantity that was evaluated."""

    columns: tuple[str, ...]
    """The column names, with units where applicable."""

    rows: list[tuple[float, ...]]
    """The grid rows."""


def _guarded(point: dict[str, float], func: Callable[[], tuple[float, ...]]) -> tuple[float, ...]:
    """Evaluate one grid point, refusing non-finite values and naming failures."""
    try:
        values: Final = func()
    except defs.NumericalError:
        raise
    except defs.TunnelClockError as err:
        raise defs.NumericalError(point, str(err)) from err
    if not all(math.isfinite(value) for value in values):
        raise defs.NumericalError(point, f"Non-finite values {values!r}")
    return values


def _matched_barrier(req: ScanRequest, v_bar: float, default: BarrierShape) -> BarrierProfile:
    """Stretch the configured barrier, or build a default-shaped one, to the barrier parameter."""
    if req.barrier is None:
        if default == BarrierShape.GAUSSIAN:
            return design.matched_gaussian(v_bar, req.species, req.height)
        return design.matched_rectangular(v_bar, req.species, req.height)
    return req.barrier.stretched(v_bar / req.barrier.opacity(req.species.mean_mass))


def _packet_point(
    req: ScanRequest,
    config: defs.Config,
    e_bar: float,
    v_bar: float,
) -> tuple[float, ...]:
    """Average over a Gaussian packet centered at the grid point."""
    barrier: Final = _matched_barrier(req, v_bar, BarrierShape.RECTANGULAR)
    p0: Final = math.sqrt(2 * req.species.mean_mass * e_bar * barrier.peak_height)
    dist: Final = wavepacket.MomentumDistribution.gaussian(p0, req.spread * p0)
    model: Final = wavepacket.transmission_model(dist, barrier, req.species, config=config)
    tau: Final = wavepacket.packet_tunneling_time(dist, barrier, req.species, config=config)
    return (
        e_bar,
        v_bar,
        wavepacket.transmitted_number(dist, barrier, req.species, config=config),
        tau * req.species.mean_frequency,
        model.tunneling_time(p0) * req.species.mean_frequency,
    )


def _compare_point(
    req: ScanRequest,
    config: defs.Config,
    e_bar: float,
    v_bar: float,
) -> tuple[float, ...]:
    """Evaluate the rectangular and the matched smooth barrier side by side."""
    smooth: Final = _matched_barrier(req, v_bar, BarrierShape.GAUSSIAN)
    smooth_t: Final = transfer_matrix.adaptive_amplitude(
        smooth,
        e_bar * smooth.peak_height,
        req.species.mean_mass,
        config=config,
    ).solution.transmission
    smooth_tau: Final = transfer_matrix.gaussian_tunneling_time(
        smooth,
        e_bar,
        req.species,
        config=config,
    )
    return (
        e_bar,
        v_bar,
        scatter_rect.mean_transmission(e_bar, v_bar, config=config),
        smooth_t,
        scatter_rect.scaled_tunneling_time(e_bar, v_bar, config=config),
        smooth_tau * req.species.mean_frequency,
    )


def _grid_point(
    req: ScanRequest,
    config: defs.Config,
    e_bar: float,
    v_bar: float,
) -> tuple[float, ...]:
    """Evaluate the requested quantity at one (Ebar, Vbar) point."""
    match req.quantity:
        case Quantity.TRANSMISSION:
            return (e_bar, v_bar, scatter_rect.mean_transmission(e_bar, v_bar, config=config))

        case Quantity.TUNNELING_TIME:
            return (
                e_bar,
                v_bar,
                scatter_rect.mean_transmission(e_bar, v_bar, config=config),
                scatter_rect.scaled_tunneling_time(e_bar, v_bar, config=config),
            )

        case Quantity.PHASE:
            return (
                e_bar,
                v_bar,
                scatter_rect.rect_phase(e_bar, v_bar, config=config),
                scatter_rect.rect_phase_free(e_bar, v_bar, config=config),
            )

        case Quantity.PACKET_TAU:
            return _packet_point(req, config, e_bar, v_bar)

        case Quantity.BUDGET:
            tau = scatter_rect.tunneling_time(e_bar, v_bar, req.species, config=config)
            phase = tau * req.species.clock_frequency
            runs = design.runs_to_resolve(phase, req.atoms).runs
            return (e_bar, v_bar, tau, phase, float(runs))

        case Quantity.COMPARE:
            return _compare_point(req, config, e_bar, v_bar)

        case _:
            raise NotImplementedError(repr(req.quantity))


def _grid_row(req: ScanRequest, config: defs.Config, v_bar: float) -> list[tuple[float, ...]]:
    """Evaluate all the scaled energies for one barrier parameter."""
    return [
        _guarded(
            {"eBar": e_bar, "vBar": v_bar},
            functools.partial(_grid_point, req, config, e_bar, v_bar),
        )
        for e_bar in req.e_bars
    ]


def _ridge_row(req: ScanRequest, config: defs.Config, v_bar: float) -> list[tuple[float, ...]]:
    """Locate the maximal tunneling time for one barrier parameter."""

    def evaluate() -> tuple[float, ...]:
        """Run the optimizer."""
        found = design.max_tunneling_time(v_bar, req.species, config=config)
        return (v_bar, found.e_star, found.scaled_tau_max, found.tau_max)

    return [_guarded({"vBar": v_bar}, evaluate)]


def _fringe_row(req: ScanRequest, config: defs.Config, t: float) -> list[tuple[float, ...]]:
    """Evaluate the exact Ramsey signal at one lab time."""

    def evaluate() -> tuple[float, ...]:
        """Scatter both states and interfere them."""
        states = clock.transmitted_states(
            req.e_bar,
            req.v_bar,
            CONSTANTS.hbar * req.wavenumber,
            t,
            req.species,
            req.perturb,
            barrier=req.barrier,
            config=config,
        )
        signal = clock.ramsey_signal(states)
        return (t, signal.phase, signal.intensity)

    return [_guarded({"t": t}, evaluate)]


def run_scan(req: ScanRequest, *, config: defs.Config = defs.DEFAULT_CONFIG) -> ScanResult:
    """Evaluate the requested quantity over the whole grid."""
    row_func: Callable[[ScanRequest, defs.Config, float], list[tuple[float, ...]]]
    if req.quantity == Quantity.FRINGE:
        row_func, outer = _fringe_row, req.times
    elif req.quantity == Quantity.RIDGE:
        row_func, outer = _ridge_row, req.v_bars
    else:
        row_func, outer = _grid_row, req.v_bars
    logging.debug(
        "Scanning %(quantity)s over %(rows)d rows using %(threads)d threads",
        {"quantity": req.quantity.value, "rows": len(outer), "threads": config.threads},
    )

    with concurrent.futures.ThreadPoolExecutor(max_workers=config.threads) as pool:
        chunks: Final = list(pool.map(functools.partial(row_func, req, config), outer))
    return ScanResult(
        quantity=req.quantity,
        columns=COLUMNS[req.quantity],
        rows=[row for chunk in chunks for row in chunk],
    )


def format_value(value: float) -> str:
    """Format a value so that it reads back bit-exactly."""
    return f"{value:.17g}"


def write_csv(result: ScanResult, stream: IO[str]) -> None:
    """Write the scan as CSV, preceded by a version stamp comment."""
    stream.write(f"# tunnel_clock {defs.VERSION} {result.quantity.value}\n")
    writer: Final = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    writer.writerows([format_value(value) for value in row] for row in result.rows)


def to_json(result: ScanResult) -> str:
    """Represent the scan as a JSON document."""
    return json.dumps(
        {
            "version": defs.VERSION,
            "quantity": result.quantity.value,
            "columns": list(result.columns),
            "rows": [list(row) for row in result.rows],
        },
        sort_keys=True,
        indent=2,
    )
