# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Physical constants and the mapping to the scaled (Ebar, Vbar) parameters.

Everything dimensional is in SI units. The scaled kinetic energy
`Ebar = p^2 / (2 m V0)` and the barrier parameter `Vbar` (the opacity integral)
are carried in a `DimensionlessPoint` so that they are never mixed up with
dimensional quantities.
"""

from __future__ import annotations

import dataclasses
import math
import typing
from typing import NamedTuple

from scipy import constants as sc

from . import defs


if typing.TYPE_CHECKING:
    from typing import Final

    from .barrier import BarrierProfile
    from .clock import ClockSpecies


class PhysicalConstants(NamedTuple):
    """The CODATA constants used throughout the package."""

    hbar: float
    """The reduced Planck constant in J s."""

    c: float
    """The speed of light in m/s."""

    k_b: float
    """The Boltzmann constant in J/K."""

    u: float
    """The atomic mass constant in kg."""


CONSTANTS: Final = PhysicalConstants(
    hbar=sc.hbar,
    c=sc.c,
    k_b=sc.k,
    u=sc.physical_constants["atomic mass constant"][0],
)


@dataclasses.dataclass(frozen=True)
class DimensionlessPoint:
    """A point in the scaled parameter plane."""

    e_bar: float
    """The kinetic energy in units of the barrier height."""

    v_bar: float
    """The barrier parameter (opacity) int sqrt(2 m V(x)) dx / hbar."""

    def __post_init__(self) -> None:
        """Both coordinates must be finite and positive."""
        defs.check_positive("scaled kinetic energy", self.e_bar)
        defs.check_positive("barrier parameter", self.v_bar)


def to_dimensionless(
    p: float,
    barrier: BarrierProfile,
    species: ClockSpecies,
) -> DimensionlessPoint:
    """Scale a momentum and a barrier profile by the barrier's peak height."""
    if p == 0 or not math.isfinite(p):
        raise defs.DomainError(f"The momentum must be finite and nonzero, got {p!r}")
    height: Final = barrier.peak_height
    if not height > 0:
        raise defs.DomainError(f"The barrier peak height must be positive, got {height!r}")
    return DimensionlessPoint(
        e_bar=p * p / (2 * species.mean_mass * height),
        v_bar=barrier.opacity(species.mean_mass),
    )


def from_dimensionless(
    point: DimensionlessPoint,
    v0: float,
    species: ClockSpecies,
    *,
    shape: defs.BarrierShape = defs.BarrierShape.RECTANGULAR,
) -> tuple[float, float]:
    """Return the momentum and the barrier width (a, or sigma for a Gaussian)."""
    defs.check_positive("barrier height", v0)
    scale: Final = math.sqrt(2 * species.mean_mass * v0)
    p: Final = scale * math.sqrt(point.e_bar)
    if shape == defs.BarrierShape.RECTANGULAR:
        return p, point.v_bar * CONSTANTS.hbar / scale
    if shape == defs.BarrierShape.GAUSSIAN:
        return p, point.v_bar * CONSTANTS.hbar / (2 * math.sqrt(math.pi) * scale)
    raise defs.DomainError(f"A {shape.value} barrier has no single width parameter")
