# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Named clock species, barriers and the numbers of the reference scenarios."""

from __future__ import annotations

import math
import typing

from . import defs
from . import design
from . import units
from .barrier import BarrierProfile
from .clock import ClockSpecies
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Callable, Final


YB_MEAN_FREQUENCY: Final = 2 * math.pi * 3.92e25
"""The Compton angular frequency of Yb-174 in rad/s."""

YB_CLOCK_FREQUENCY: Final = 2 * math.pi * 522e12
"""The optical clock transition of Yb-174 in rad/s."""

YB_MAGIC_WAVELENGTH: Final = 759.35e-9
"""The magic wavelength of the Yb clock transition in m."""

YB_BRAGG_WAVENUMBER: Final = 2 * 2 * math.pi / YB_MAGIC_WAVELENGTH
"""The effective wavenumber transferred by a double Bragg pulse in 1/m."""

YB_BOOST_SHIFT: Final = CONSTANTS.hbar * 1.0
"""The differential light shift hbar x (1 / s) that boosts the clock frequency, in J."""

RB_MASS_U: Final = 86.91
"""The mass of Rb-87 in atomic mass units."""

RB_CLOCK_FREQUENCY: Final = 2 * math.pi * 6.8e9
"""The hyperfine clock transition of Rb-87 in rad/s."""

RB_BARRIER_TEMPERATURE: Final = 200e-9
"""The barrier height of the Rb-87 comparison in K."""

RB_LARMOR_HEIGHT: Final = 1.3e-31
"""The mean barrier height of the Rb-87 Larmor-clock estimate in J."""

RB_LARMOR_FREQUENCY: Final = 2 * math.pi * 200
"""The Larmor frequency of the Rb-87 estimate in rad/s."""

WORKING_E_BAR: Final = 1.4
"""The scaled energy of the reference working point."""

WORKING_V_BAR: Final = 4.0
"""The barrier parameter of the reference working point."""


def yb174() -> ClockSpecies:
    """The ytterbium optical clock."""
    return ClockSpecies.from_mean_frequency("Yb-174", YB_MEAN_FREQUENCY, YB_CLOCK_FREQUENCY)


def rb87() -> ClockSpecies:
    """The rubidium hyperfine clock."""
    return ClockSpecies.from_mass_u("Rb-87", RB_MASS_U, RB_CLOCK_FREQUENCY)


SPECIES: Final[dict[str, Callable[[], ClockSpecies]]] = {
    "rb87": rb87,
    "yb174": yb174,
}


def _rb_barrier(shape: defs.BarrierShape, v_bar: float) -> BarrierProfile:
    """A barrier of height k_B x 200 nK with the given opacity for Rb-87."""
    height: Final = CONSTANTS.k_b * RB_BARRIER_TEMPERATURE
    _, width = units.from_dimensionless(
        units.DimensionlessPoint(e_bar=1.0, v_bar=v_bar),
        height,
        rb87(),
        shape=shape,
    )
    if shape == defs.BarrierShape.GAUSSIAN:
        return BarrierProfile.gaussian(height, width)
    return BarrierProfile.rectangular(height, width)


def rb87_200nk_gaussian() -> BarrierProfile:
    """The Gaussian Rb-87 barrier at the working-point opacity."""
    return _rb_barrier(defs.BarrierShape.GAUSSIAN, WORKING_V_BAR)


def rb87_200nk_rectangular() -> BarrierProfile:
    """The rectangular Rb-87 barrier with the same opacity as the Gaussian one."""
    return _rb_barrier(defs.BarrierShape.RECTANGULAR, WORKING_V_BAR)


def yb174_working_point() -> BarrierProfile:
    """The rectangular barrier putting an Yb-174 clock at the reference working point."""
    return design.yb_working_barrier(WORKING_E_BAR, WORKING_V_BAR, YB_BRAGG_WAVENUMBER, yb174())


BARRIERS: Final[dict[str, Callable[[], BarrierProfile]]] = {
    "rb87-200nk-gaussian": rb87_200nk_gaussian,
    "rb87-200nk-rectangular": rb87_200nk_rectangular,
    "yb174-working-point": yb174_working_point,
}


def get_species(name: str) -> ClockSpecies:
    """Look up a species preset by name."""
    try:
        return SPECIES[name]()
    except KeyError as err:
        raise defs.DomainError(
            f"Unknown species preset {name!r}, known: {', '.join(sorted(SPECIES))}",
        ) from err


def get_barrier(name: str) -> BarrierProfile:
    """Look up a barrier preset by name."""
    try:
        return BARRIERS[name]()
    except KeyError as err:
        raise defs.DomainError(
            f"Unknown barrier preset {name!r}, known: {', '.join(sorted(BARRIERS))}",
        ) from err
