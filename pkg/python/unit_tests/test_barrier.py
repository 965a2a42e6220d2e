# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Test the barrier profiles, their state splitting and their opacity."""

from __future__ import annotations

import math
import typing

import numpy as np
import pytest

from tunnel_clock import barrier
from tunnel_clock import defs
from tunnel_clock import presets
from tunnel_clock.barrier import BarrierProfile
from tunnel_clock.barrier import ClockState
from tunnel_clock.barrier import StatePotential
from tunnel_clock.units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Callable, Final


HEIGHT: Final = CONSTANTS.k_b * 200e-9

INVALID_PROFILES: Final[list[tuple[str, Callable[[], BarrierProfile]]]] = [
    ("zero height", lambda: BarrierProfile.rectangular(0.0, 1e-6)),
    ("negative width", lambda: BarrierProfile.gaussian(HEIGHT, -1e-6)),
    ("too few samples", lambda: BarrierProfile.tabulated([0.0, 1.0], [0.0, 0.0])),
    ("unsorted", lambda: BarrierProfile.tabulated([0.0, 2.0, 1.0], [0.0, HEIGHT, 0.0])),
    ("negative sample", lambda: BarrierProfile.tabulated([0.0, 1.0, 2.0], [0.0, -HEIGHT, 0.0])),
    ("open end", lambda: BarrierProfile.tabulated([0.0, 1.0, 2.0], [0.0, HEIGHT, HEIGHT])),
    ("large split", lambda: BarrierProfile.rectangular(HEIGHT, 1e-6, delta_v=2 * HEIGHT)),
]


@pytest.mark.parametrize(("name", "build"), INVALID_PROFILES)
def test_invalid(name: str, build: Callable[[], BarrierProfile]) -> None:
    """Refuse profiles that make no sense."""
    print(f"\n{name}")
    with pytest.raises(defs.DomainError):
        build()


def test_potential() -> None:
    """Evaluate the three shapes at a few positions."""
    rect: Final = BarrierProfile.rectangular(HEIGHT, 1e-6)
    assert list(rect.potential([-1e-7, 0.5e-6, 1.1e-6])) == [0.0, HEIGHT, 0.0]

    gauss: Final = BarrierProfile.gaussian(HEIGHT, 1e-6)
    assert float(gauss.potential(0.0)) == HEIGHT
    assert float(gauss.potential(1e-6)) == pytest.approx(HEIGHT * math.exp(-0.5), rel=1e-14)

    tab: Final = BarrierProfile.tabulated([0.0, 1e-6, 3e-6], [0.0, HEIGHT, 0.0])
    assert float(tab.potential(0.5e-6)) == pytest.approx(HEIGHT / 2, rel=1e-14)
    assert float(tab.potential(2e-6)) == pytest.approx(HEIGHT / 2, rel=1e-14)
    assert float(tab.potential(4e-6)) == 0.0
    assert tab.peak_height == HEIGHT
    assert tab.support() == (0.0, 3e-6)


def test_gaussian_support() -> None:
    """The Gaussian is truncated where it drops to the cutoff."""
    gauss: Final = BarrierProfile.gaussian(HEIGHT, 1e-6)
    lower, upper = gauss.support()
    assert lower == -upper
    assert float(gauss.potential(upper)) == pytest.approx(
        defs.DEFAULT_CONFIG.gaussian_cutoff * HEIGHT,
        rel=1e-10,
    )


def test_opacity_closed_forms() -> None:
    """Compare the closed forms against the definition."""
    species: Final = presets.rb87()
    scale: Final = math.sqrt(2 * species.mean_mass * HEIGHT) / CONSTANTS.hbar

    rect: Final = BarrierProfile.rectangular(HEIGHT, 2e-6)
    assert barrier.opacity(rect, species) == pytest.approx(2e-6 * scale, rel=1e-14)
    assert barrier.opacity_quadrature(rect, species) == pytest.approx(2e-6 * scale, rel=1e-8)

    # Integral of sqrt(V) over a triangle: 2 L (2/3) sqrt(V0).
    triangle: Final = BarrierProfile.tabulated([-1e-6, 0.0, 1e-6], [0.0, HEIGHT, 0.0])
    assert barrier.opacity(triangle, species) == pytest.approx(4e-6 / 3 * scale, rel=1e-12)
    assert barrier.opacity_quadrature(triangle, species) == pytest.approx(
        4e-6 / 3 * scale,
        rel=1e-7,
    )

    gauss: Final = BarrierProfile.gaussian(HEIGHT, 1e-6)
    assert barrier.opacity(gauss, species) == pytest.approx(
        2 * math.sqrt(math.pi) * 1e-6 * scale,
        rel=1e-14,
    )
    # The quadrature stops at the truncated support.
    _, upper = gauss.support()
    assert barrier.opacity_quadrature(gauss, species) == pytest.approx(
        barrier.opacity(gauss, species) * math.erf(upper / 2e-6),
        rel=1e-7,
    )


def test_tabulated_flat_segments() -> None:
    """A trapezoid with a flat top integrates exactly."""
    species: Final = presets.rb87()
    trapezoid: Final = BarrierProfile.tabulated(
        [0.0, 1e-6, 3e-6, 4e-6],
        [0.0, HEIGHT, HEIGHT, 0.0],
    )
    scale: Final = math.sqrt(2 * species.mean_mass * HEIGHT) / CONSTANTS.hbar
    expected: Final = (2e-6 + 2 * 2e-6 / 3) * scale
    assert trapezoid.opacity(species.mean_mass) == pytest.approx(expected, rel=1e-12)


def test_solve_gaussian_width() -> None:
    """The solved width reproduces the requested opacity."""
    species: Final = presets.rb87()
    sigma: Final = barrier.solve_gaussian_width(4.0, HEIGHT, species)
    assert barrier.opacity(BarrierProfile.gaussian(HEIGHT, sigma), species) == pytest.approx(
        4.0,
        rel=1e-12,
    )
    with pytest.raises(defs.DomainError):
        barrier.solve_gaussian_width(-1.0, HEIGHT, species)


def test_state_potentials() -> None:
    """The two states see the mean height plus or minus half the split."""
    base: Final = BarrierProfile.rectangular(HEIGHT, 1e-6, delta_v=0.1 * HEIGHT)
    ground: Final = StatePotential(base, ClockState.GROUND)
    excited: Final = StatePotential(base, ClockState.EXCITED)
    assert ground.peak_height == pytest.approx(0.95 * HEIGHT, rel=1e-14)
    assert excited.peak_height == pytest.approx(1.05 * HEIGHT, rel=1e-14)
    assert excited.peak_height - ground.peak_height == pytest.approx(base.delta_v, rel=1e-12)

    realized: Final = excited.realize()
    assert realized.delta_v == 0.0
    assert realized.width == base.width
    assert realized.peak_height == excited.peak_height

    tab: Final = BarrierProfile.tabulated(
        [0.0, 1e-6, 2e-6],
        [0.0, HEIGHT, 0.0],
        delta_v=-0.2 * HEIGHT,
    )
    assert np.allclose(
        StatePotential(tab, ClockState.GROUND).realize().vs,
        [0.0, 1.1 * HEIGHT, 0.0],
        rtol=1e-14,
        atol=0.0,
    )


SHAPES: Final[list[BarrierProfile]] = [
    BarrierProfile.rectangular(HEIGHT, 1e-6, delta_v=1e-6 * HEIGHT),
    BarrierProfile.gaussian(HEIGHT, 1e-6, delta_v=1e-6 * HEIGHT),
    BarrierProfile.tabulated(
        [0.0, 1e-6, 1.5e-6, 3e-6],
        [0.0, HEIGHT, 0.4 * HEIGHT, 0.0],
        delta_v=1e-6 * HEIGHT,
    ),
]


@pytest.mark.parametrize("profile", SHAPES)
def test_stretched(profile: BarrierProfile) -> None:
    """Stretching keeps the heights and the split and scales the opacity."""
    mass: Final = presets.rb87().mean_mass
    wide: Final = profile.stretched(2.5)
    assert wide.peak_height == profile.peak_height
    assert wide.delta_v == profile.delta_v
    assert wide.opacity(mass) == pytest.approx(2.5 * profile.opacity(mass), rel=1e-12)

    with pytest.raises(defs.DomainError):
        profile.stretched(0.0)


@pytest.mark.parametrize("profile", SHAPES)
def test_state_opacity_mean(profile: BarrierProfile) -> None:
    """The squared opacities of the two states average to the mean one."""
    mass: Final = presets.rb87().mean_mass
    mean: Final = profile.opacity(mass)
    ground: Final = StatePotential(profile, ClockState.GROUND).realize().opacity(mass)
    excited: Final = StatePotential(profile, ClockState.EXCITED).realize().opacity(mass)
    assert (excited**2 + ground**2) / 2 == pytest.approx(mean**2, rel=1e-12)
    assert abs((excited + ground) / (2 * mean) - 1) < 1e-11
    assert excited / ground - 1 == pytest.approx(0.5e-6, rel=1e-5)


def test_tabulated_additivity() -> None:
    """The opacity of a tabulated profile is the sum over its pieces."""
    mass: Final = presets.rb87().mean_mass
    xs: Final = np.linspace(0.0, 2e-6, 41)
    vs: Final = HEIGHT * np.sin(np.pi * xs / 1e-6) ** 2 * (1 + xs / 2e-6)
    vs[[0, 20, 40]] = 0.0
    whole: Final = BarrierProfile.tabulated(xs, vs)
    left: Final = BarrierProfile.tabulated(xs[:21], vs[:21])
    right: Final = BarrierProfile.tabulated(xs[20:], vs[20:])
    assert left.opacity(mass) + right.opacity(mass) == pytest.approx(
        whole.opacity(mass),
        rel=1e-9,
    )
    assert left.opacity(mass) < right.opacity(mass)


def test_mirrored() -> None:
    """Mirroring reverses a tabulated profile and leaves symmetric ones alone."""
    tab: Final = BarrierProfile.tabulated([0.0, 1e-6, 3e-6], [0.0, HEIGHT, 0.0])
    mirror: Final = tab.mirrored()
    assert mirror.xs == (-3e-6, -1e-6, -0.0)
    assert mirror.vs == (0.0, HEIGHT, 0.0)
    assert mirror.opacity(1e-25) == pytest.approx(tab.opacity(1e-25), rel=1e-14)

    gauss: Final = BarrierProfile.gaussian(HEIGHT, 1e-6)
    assert gauss.mirrored() is gauss
