# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Barrier profiles, their state-dependent splitting and their opacity."""

from __future__ import annotations

import dataclasses
import enum
import itertools
import logging
import math
import typing

import numpy as np
from scipy import integrate

from . import defs
from .defs import BarrierShape
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Final

    import numpy.typing as npt

    from .clock import ClockSpecies


__all__ = (
    "BarrierProfile",
    "BarrierShape",
    "ClockState",
    "StatePotential",
    "opacity",
    "opacity_quadrature",
    "solve_gaussian_width",
)


@dataclasses.dataclass(frozen=True)
class BarrierProfile:
    """A one-dimensional potential barrier with an optional state-dependent split.

    Rectangular barriers occupy [0, a], Gaussian ones are centered at x = 0 and
    tabulated ones span their first to last sample. The split `delta_v` is the
    difference between the excited- and ground-state peak heights; it scales
    the whole profile uniformly.
    """

    shape: BarrierShape
    """The functional form of the profile."""

    height: float = 0.0
    """The peak height V0 in J (rectangular and Gaussian profiles)."""

    width: float = 0.0
    """The width a or the standard deviation sigma in m."""

    xs: tuple[float, ...] = ()
    """The sample positions in m (tabulated profiles)."""

    vs: tuple[float, ...] = ()
    """The sampled potential values in J (tabulated profiles)."""

    delta_v: float = 0.0
    """The excited-minus-ground peak height difference in J."""

    def __post_init__(self) -> None:
        """Validate the profile parameters."""
        if self.shape == BarrierShape.TABULATED:
            self._check_samples()
        else:
            defs.check_positive("barrier height", self.height)
            defs.check_positive("barrier width", self.width)

        if not math.isfinite(self.delta_v) or abs(self.delta_v) >= 2 * self.peak_height:
            raise defs.DomainError(
                f"The height split {self.delta_v!r} J would make a state potential negative "
                f"for a peak height of {self.peak_height!r} J",
            )

    def _check_samples(self) -> None:
        """Validate a tabulated profile."""
        if len(self.xs) != len(self.vs) or len(self.xs) < 3:
            raise defs.DomainError("A tabulated barrier needs at least three (x, V) samples")
        xs: Final = np.asarray(self.xs)
        vs: Final = np.asarray(self.vs)
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
            raise defs.DomainError("Non-finite tabulated barrier samples")
        if np.any(np.diff(xs) <= 0):
            raise defs.DomainError("The tabulated barrier positions must be strictly increasing")
        if np.any(vs < 0):
            raise defs.DomainError("The tabulated barrier contains negative potential samples")
        peak: Final = float(vs.max())
        if not peak > 0:
            raise defs.DomainError("The tabulated barrier has no positive samples")
        if max(vs[0], vs[-1]) > defs.DEFAULT_CONFIG.gaussian_cutoff * peak:
            raise defs.DomainError("The tabulated barrier must vanish at both ends")

    @classmethod
    def rectangular(cls, height: float, width: float, *, delta_v: float = 0.0) -> BarrierProfile:
        """Build a rectangular barrier of height V0 over [0, a]."""
        return cls(BarrierShape.RECTANGULAR, height=height, width=width, delta_v=delta_v)

    @classmethod
    def gaussian(cls, height: float, sigma: float, *, delta_v: float = 0.0) -> BarrierProfile:
        """Build a Gaussian barrier V0 exp(-x^2 / 2 sigma^2)."""
        return cls(BarrierShape.GAUSSIAN, height=height, width=sigma, delta_v=delta_v)

    @classmethod
    def tabulated(
        cls,
        xs: typing.Iterable[float],
        vs: typing.Iterable[float],
        *,
        delta_v: float = 0.0,
    ) -> BarrierProfile:
        """Build a piecewise-linear barrier from (x, V) samples."""
        return cls(
            BarrierShape.TABULATED,
            xs=tuple(float(x) for x in xs),
            vs=tuple(float(v) for v in vs),
            delta_v=delta_v,
        )

    @property
    def peak_height(self) -> float:
        """The largest value of the mean potential in J."""
        if self.shape == BarrierShape.TABULATED:
            return max(self.vs) if self.vs else 0.0
        return self.height

    def support(self, *, config: defs.Config = defs.DEFAULT_CONFIG) -> tuple[float, float]:
        """Return the interval the numerics treat as the barrier's extent."""
        if self.shape == BarrierShape.RECTANGULAR:
            return 0.0, self.width
        if self.shape == BarrierShape.GAUSSIAN:
            x_c: Final = self.width * math.sqrt(-2 * math.log(config.gaussian_cutoff))
            return -x_c, x_c
        return self.xs[0], self.xs[-1]

    def potential(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Evaluate the mean potential in J at the specified positions."""
        pos: Final = np.asarray(x, dtype=np.float64)
        if self.shape == BarrierShape.RECTANGULAR:
            return np.where((pos >= 0) & (pos <= self.width), self.height, 0.0)
        if self.shape == BarrierShape.GAUSSIAN:
            return self.height * np.exp(-0.5 * (pos / self.width) ** 2)
        return np.interp(pos, self.xs, self.vs, left=0.0, right=0.0)

    def scaled(self, factor: float) -> BarrierProfile:
        """Return the same profile with every height multiplied by `factor`, unsplit."""
        if self.shape == BarrierShape.TABULATED:
            return dataclasses.replace(
                self,
                vs=tuple(v * factor for v in self.vs),
                delta_v=0.0,
            )
        return dataclasses.replace(self, height=self.height * factor, delta_v=0.0)

    def stretched(self, factor: float) -> BarrierProfile:
        """Return the same profile with every length multiplied by `factor`.

        The heights and the split stay, so the opacity scales by `factor`.
        """
        defs.check_positive("stretch factor", factor)
        if self.shape == BarrierShape.TABULATED:
            return dataclasses.replace(self, xs=tuple(x * factor for x in self.xs))
        return dataclasses.replace(self, width=self.width * factor)

    def mirrored(self) -> BarrierProfile:
        """Return the profile reflected about x = 0, as seen by a right-incident wave."""
        if self.shape == BarrierShape.TABULATED:
            return dataclasses.replace(
                self,
                xs=tuple(-x for x in reversed(self.xs)),
                vs=tuple(reversed(self.vs)),
            )
        return self

    def opacity(self, mass: float) -> float:
        """Return the barrier parameter int sqrt(2 m V(x)) dx / hbar in closed form."""
        defs.check_positive("mass", mass)
        if self.shape == BarrierShape.RECTANGULAR:
            return self.width * math.sqrt(2 * mass * self.height) / CONSTANTS.hbar
        if self.shape == BarrierShape.GAUSSIAN:
            return 2 * self.width * math.sqrt(2 * math.pi * mass * self.height) / CONSTANTS.hbar
        return math.sqrt(2 * mass) * _tabulated_root_integral(self.xs, self.vs) / CONSTANTS.hbar


def _tabulated_root_integral(xs: tuple[float, ...], vs: tuple[float, ...]) -> float:
    """Integrate sqrt(V) exactly over each linear segment."""
    x: Final = np.asarray(xs)
    v: Final = np.asarray(vs)
    h: Final = np.diff(x)
    left: Final = v[:-1]
    right: Final = v[1:]
    rise: Final = right - left
    flat: Final = np.abs(rise) <= 1e-14 * max(float(v.max()), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        sloped = h * (2.0 / 3.0) * (right**1.5 - left**1.5) / rise
    segments: Final = np.where(flat, h * np.sqrt(0.5 * (left + right)), sloped)
    return float(segments.sum())


class ClockState(enum.Enum):
    """The internal clock state a potential is realized for."""

    GROUND = -1
    EXCITED = 1


@dataclasses.dataclass(frozen=True)
class StatePotential:
    """The barrier as seen by one internal state: mean height +/- delta_v / 2."""

    base: BarrierProfile
    """The profile carrying the mean height and the split."""

    state: ClockState
    """The internal state selecting the sign of the split."""

    def __post_init__(self) -> None:
        """The realized peak height must stay positive."""
        if not self.peak_height > 0:
            raise defs.DomainError(
                f"The {self.state.name.lower()} state potential has a non-positive peak height",
            )

    @property
    def factor(self) -> float:
        """The relative scaling applied to the mean profile."""
        return 1 + self.state.value * self.base.delta_v / (2 * self.base.peak_height)

    @property
    def peak_height(self) -> float:
        """The realized peak height in J."""
        return self.base.peak_height * self.factor

    def realize(self) -> BarrierProfile:
        """Return the unsplit profile this state scatters on."""
        return self.base.scaled(self.factor)


def opacity(profile: BarrierProfile, species: ClockSpecies) -> float:
    """Return the dimensionless barrier parameter for the species' mean mass."""
    return profile.opacity(species.mean_mass)


def opacity_quadrature(
    profile: BarrierProfile,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Evaluate the opacity integral by adaptive Gauss-Kronrod quadrature.

    The integrand is sqrt(V(x) / V0) and the absolute tolerance is scaled by
    the length of the support, so that it is relative to the integral of the
    integrand's peak value of one. Gaussian barriers are integrated over
    their truncated support.
    """
    v0: Final = profile.peak_height
    scale: Final = math.sqrt(2 * species.mean_mass * v0) / CONSTANTS.hbar
    lower, upper = profile.support(config=config)
    epsabs: Final = config.quad_abs_tol * (upper - lower)

    def integrand(x: float) -> float:
        """The scaled square root of the potential."""
        return math.sqrt(max(float(profile.potential(x)), 0.0) / v0)

    edges: Final = profile.xs if profile.shape == BarrierShape.TABULATED else (lower, upper)
    value, error = 0.0, 0.0
    for left, right in itertools.pairwise(edges):
        seg_value, seg_error = integrate.quad(
            integrand,
            left,
            right,
            epsabs=epsabs,
            limit=config.quad_limit,
        )
        value += seg_value
        error += seg_error

    logging.debug(
        "Opacity quadrature for a %(shape)s barrier: %(value).12g +/- %(error).3g",
        {"shape": profile.shape.value, "value": value, "error": error},
    )
    return value * scale


def solve_gaussian_width(target_v_bar: float, v0: float, species: ClockSpecies) -> float:
    """Return the standard deviation of a Gaussian barrier with the given opacity."""
    defs.check_positive("target barrier parameter", target_v_bar)
    defs.check_positive("barrier height", v0)
    return target_v_bar * CONSTANTS.hbar / (2 * math.sqrt(2 * math.pi * species.mean_mass * v0))
