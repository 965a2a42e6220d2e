# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Experiment design: differential phases, working points and shot-noise run budgets."""

from __future__ import annotations

import logging
import math
import typing
from typing import NamedTuple

import numpy as np

from . import clock
from . import defs
from . import numerics
from . import scatter_rect
from . import transfer_matrix
from . import units
from .barrier import BarrierProfile
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from collections.abc import Iterable
    from typing import Callable, Final

    from .clock import ClockSpecies
    from .clock import PhaseBudget


MAX_RUNS: Final = 2**63 - 1
"""The run count reported when the required number does not fit."""

DEFAULT_ATOMS: Final = 100_000
"""The number of atoms per run assumed by the budgets."""


class WorkingPoint(NamedTuple):
    """The quantities that decide whether a point is worth measuring at."""

    e_bar: float
    """The scaled kinetic energy."""

    v_bar: float
    """The barrier parameter."""

    tau: float
    """The tunneling time in s."""

    scaled_tau: float
    """The tunneling time in units of the inverse mean frequency."""

    t_bar: float
    """The mean transmission."""

    flatness: float
    """|dT/dp| dp for the requested relative momentum spread."""


class RunBudget(NamedTuple):
    """The number of shot-noise limited runs needed to resolve a phase."""

    atoms_per_run: int
    """The number of detected atoms per run."""

    phase: float
    """The phase to resolve in rad."""

    contrast: float
    """The interference contrast the sensitivity is scaled by."""

    runs: int
    """The required number of runs, saturated at MAX_RUNS."""

    saturated: bool
    """True if the required number of runs did not fit and was saturated."""

    assumptions: str = "shot-noise limited, uncorrelated atoms"
    """The noise model."""


class BoostedBudget(NamedTuple):
    """The run budget with an artificially increased clock frequency."""

    omega_eff: float
    """The effective clock frequency in rad/s."""

    boost: float
    """omega_eff / dw."""

    phase: float
    """tau omega_eff in rad."""

    budget: RunBudget
    """The runs needed to resolve the boosted phase."""


class RidgePoint(NamedTuple):
    """The maximal tunneling time for one barrier parameter."""

    v_bar: float
    """The barrier parameter."""

    e_star: float
    """The scaled energy of the maximum."""

    scaled_tau_max: float
    """The maximal tunneling time times the mean frequency."""

    tau_max: float
    """The maximal tunneling time in s."""


def differential_phase(tunnel: PhaseBudget, reference: PhaseBudget) -> float:
    """Subtract the reference arm's budget term by term.

    Common terms cancel exactly, not just numerically.
    """
    if tunnel.lab_time != reference.lab_time:
        raise defs.DomainError(
            f"The budgets were computed for different Ramsey times: "
            f"{tunnel.lab_time!r} s and {reference.lab_time!r} s",
        )
    if tunnel.species != reference.species:
        raise defs.DomainError(
            f"The budgets were computed for different species: "
            f"{tunnel.species.name} and {reference.species.name}",
        )
    if not math.isclose(tunnel.momentum, reference.momentum, rel_tol=1e-12):
        raise defs.DomainError(
            f"The budgets were computed for different momenta: "
            f"{tunnel.momentum!r} and {reference.momentum!r}",
        )
    return (
        (tunnel.clock_term - reference.clock_term)
        + (tunnel.dilation_term - reference.dilation_term)
        + (tunnel.tunnel_term - reference.tunnel_term)
        + (tunnel.larmor_term - reference.larmor_term)
        + (tunnel.doppler_term - reference.doppler_term)
        + (tunnel.laser_term - reference.laser_term)
    )


def rect_scaled_time(
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> Callable[[float], float]:
    """Return the scaled tunneling time of a rectangular barrier as a function of Ebar."""
    defs.check_positive("barrier parameter", v_bar)

    def scaled(e_bar: float) -> float:
        """The closed form at this energy."""
        return scatter_rect.scaled_tunneling_time(e_bar, v_bar, config=config)

    return scaled


def matched_rectangular(v_bar: float, species: ClockSpecies, v0: float) -> BarrierProfile:
    """Build the rectangular barrier of height v0 with the given barrier parameter."""
    _, width = units.from_dimensionless(
        units.DimensionlessPoint(e_bar=1.0, v_bar=v_bar),
        v0,
        species,
    )
    return BarrierProfile.rectangular(v0, width)


def matched_gaussian(v_bar: float, species: ClockSpecies, v0: float) -> BarrierProfile:
    """Build the Gaussian barrier of height v0 with the given barrier parameter."""
    _, sigma = units.from_dimensionless(
        units.DimensionlessPoint(e_bar=1.0, v_bar=v_bar),
        v0,
        species,
        shape=defs.BarrierShape.GAUSSIAN,
    )
    return BarrierProfile.gaussian(v0, sigma)


def gaussian_scaled_time(
    v_bar: float,
    species: ClockSpecies,
    v0: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> Callable[[float], float]:
    """Return the scaled tunneling time of a Gaussian barrier with the given opacity."""
    profile: Final = matched_gaussian(v_bar, species, v0)

    def scaled(e_bar: float) -> float:
        """The transfer-matrix result at this energy."""
        tau = transfer_matrix.gaussian_tunneling_time(profile, e_bar, species, config=config)
        return tau * species.mean_frequency

    return scaled


def max_scaled_tunneling_time(
    scaled_time: Callable[[float], float],
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> numerics.Extremum:
    """Maximize a scaled tunneling time over Ebar.

    A logarithmic scan over [scan_min, scan_max] brackets the largest sample,
    then a golden-section search refines it.
    """
    grid: Final = np.geomspace(config.scan_min, config.scan_max, config.scan_points)
    values: Final = np.array([scaled_time(float(e_bar)) for e_bar in grid])
    best: Final = int(np.argmax(values))
    lower: Final = float(grid[max(best - 1, 0)])
    upper: Final = float(grid[min(best + 1, grid.size - 1)])
    logging.debug(
        "Tunneling time scan: largest sample %(value).9g at Ebar = %(e_bar).9g",
        {"value": values[best], "e_bar": grid[best]},
    )
    found: Final = numerics.golden_section_max(scaled_time, lower, upper, tol=config.golden_tol)
    if found.value < values[best]:
        return numerics.Extremum(x=float(grid[best]), value=float(values[best]))
    return found


def max_tunneling_time(
    v_bar: float,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> RidgePoint:
    """Return the position and value of the maximal rectangular-barrier tunneling time."""
    found: Final = max_scaled_tunneling_time(rect_scaled_time(v_bar, config=config), config=config)
    return RidgePoint(
        v_bar=v_bar,
        e_star=found.x,
        scaled_tau_max=found.value,
        tau_max=found.value / species.mean_frequency,
    )


def ridge(
    v_bars: Iterable[float],
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> list[RidgePoint]:
    """Trace the locus of the maximal tunneling time over several barrier parameters."""
    return [max_tunneling_time(v_bar, species, config=config) for v_bar in v_bars]


def runs_to_resolve(
    phase: float,
    atoms_per_run: int,
    *,
    contrast: float = 1.0,
) -> RunBudget:
    """Return the runs needed for a shot-noise sensitivity 1 / (C sqrt(N runs)) to reach `phase`."""
    defs.check_positive("phase", phase)
    if atoms_per_run < 1:
        raise defs.DomainError(f"At least one atom per run is needed, got {atoms_per_run}")
    if not 0 < contrast <= 1:
        raise defs.DomainError(f"The contrast must lie in (0, 1], got {contrast!r}")

    needed: Final = 1 / (atoms_per_run * (phase * contrast) ** 2)
    if not math.isfinite(needed) or needed >= MAX_RUNS:
        logging.warning(
            "Resolving a phase of %(phase).3g rad needs more than %(max)d runs",
            {"phase": phase, "max": MAX_RUNS},
        )
        return RunBudget(
            atoms_per_run=atoms_per_run,
            phase=phase,
            contrast=contrast,
            runs=MAX_RUNS,
            saturated=True,
        )
    return RunBudget(
        atoms_per_run=atoms_per_run,
        phase=phase,
        contrast=contrast,
        runs=max(math.ceil(needed), 1),
        saturated=False,
    )


def boosted_budget(  # noqa: PLR0913  # the experiment's knobs
    point: WorkingPoint,
    species: ClockSpecies,
    delta_v: float,
    *,
    v_bar_dim: float,
    atoms_per_run: int = DEFAULT_ATOMS,
    contrast: float = 1.0,
) -> BoostedBudget:
    """Boost the clock frequency by a differential barrier shift and redo the run budget."""
    defs.check_positive("mean barrier height", v_bar_dim)
    if not abs(delta_v) < defs.PERTURBATION_CAP * v_bar_dim:
        raise defs.DomainError(
            f"The differential shift {delta_v!r} J is outside the first-order regime "
            f"for a barrier of {v_bar_dim!r} J",
        )
    omega_eff: Final = clock.effective_clock_frequency(species, v_bar_dim, delta_v)
    phase: Final = point.tau * omega_eff
    return BoostedBudget(
        omega_eff=omega_eff,
        boost=omega_eff / species.clock_frequency if species.clock_frequency > 0 else math.inf,
        phase=phase,
        budget=runs_to_resolve(phase, atoms_per_run, contrast=contrast),
    )


def working_point(
    e_bar: float,
    v_bar: float,
    species: ClockSpecies,
    *,
    spread: float = 0.0,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> WorkingPoint:
    """Evaluate tau, T and the transmission flatness for a relative momentum spread."""
    if not (math.isfinite(spread) and spread >= 0):
        raise defs.DomainError(f"The momentum spread must be non-negative, got {spread!r}")
    scaled: Final = scatter_rect.scaled_tunneling_time(e_bar, v_bar, config=config)

    def trans(delta: float) -> float:
        """The transmission after a relative momentum change."""
        shifted_e, shifted_v = scatter_rect.perturbed_point(e_bar, v_bar, momentum=delta)
        return scatter_rect.mean_transmission(shifted_e, shifted_v, config=config)

    slope: Final = numerics.central_difference(trans, 0.0, config.fd_step)
    return WorkingPoint(
        e_bar=e_bar,
        v_bar=v_bar,
        tau=scaled / species.mean_frequency,
        scaled_tau=scaled,
        t_bar=scatter_rect.mean_transmission(e_bar, v_bar, config=config),
        flatness=abs(slope) * spread,
    )


def optimal_working_point(
    v_bar: float,
    species: ClockSpecies,
    *,
    spread: float = 0.0,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> WorkingPoint:
    """Evaluate the working point at the maximal tunneling time for this barrier."""
    best: Final = max_tunneling_time(v_bar, species, config=config)
    return working_point(best.e_star, v_bar, species, spread=spread, config=config)


def yb_working_barrier(
    e_bar: float,
    v_bar: float,
    wavenumber: float,
    species: ClockSpecies,
) -> BarrierProfile:
    """Build the rectangular barrier for a clock moving at hbar k after a double Bragg pulse.

    The height follows from the scaled energy, the width from the barrier parameter.
    """
    defs.check_positive("wavenumber", wavenumber)
    point: Final = units.DimensionlessPoint(e_bar=e_bar, v_bar=v_bar)
    p: Final = CONSTANTS.hbar * wavenumber
    v0: Final = p * p / (2 * species.mean_mass * e_bar)
    _, width = units.from_dimensionless(point, v0, species)
    return BarrierProfile.rectangular(v0, width)
