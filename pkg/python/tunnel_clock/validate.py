# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Self-checks of the solvers: conservation laws, limits, oracles and reference numbers.

Every check evaluates a worst-case deviation over a small grid and compares it
to a fixed tolerance. The checks never raise for a failed comparison; they
report it in their result so that the whole suite always runs to the end.
"""

from __future__ import annotations

import logging
import math
import typing
from typing import NamedTuple

import numpy as np

from . import clock
from . import defs
from . import design
from . import numerics
from . import presets
from . import scatter_rect
from . import transfer_matrix
from . import wavepacket
from .barrier import BarrierProfile
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Callable, Final

    from .clock import ClockSpecies


UNITARITY_TOLERANCE: Final = 1e-10
CONTINUITY_TOLERANCE: Final = 1e-4
EIGENSTATE_TOLERANCE: Final = 1e-6
RECIPROCITY_TOLERANCE: Final = 1e-10
ORACLE_TOLERANCE: Final = 1e-12
CANCELLATION_TOLERANCE: Final = 1e-12
EXPANSION_TOLERANCE: Final = 1e-5
REFERENCE_TOLERANCE: Final = 0.02

CHECK_E_BARS: Final = (0.2, 0.5, 0.8, 0.95, 1.05, 1.3, 1.8, 2.6)
CHECK_V_BARS: Final = (0.5, 1.5, 3.0, 4.5, 6.0)

ORACLE_E_BARS: Final = tuple(float(value) for value in np.linspace(0.05, 3.0, 50))
ORACLE_V_BARS: Final = tuple(float(value) for value in np.linspace(0.1, 6.0, 50))


class CheckResult(NamedTuple):
    """The outcome of a single self-check."""

    name: str
    """A short identifier of the check."""

    passed: bool
    """True if the worst deviation stayed within the tolerance."""

    worst: float
    """The largest deviation found."""

    tolerance: float
    """The largest deviation allowed."""

    detail: str
    """What was compared, and where the worst deviation occurred."""


def _verdict(name: str, worst: float, tolerance: float, detail: str) -> CheckResult:
    """Compare the worst deviation to the tolerance."""
    passed: Final = math.isfinite(worst) and worst <= tolerance
    logging.debug(
        "%(name)s: worst deviation %(worst).3g, tolerance %(tol).3g",
        {"name": name, "worst": worst, "tol": tolerance},
    )
    return CheckResult(name=name, passed=passed, worst=worst, tolerance=tolerance, detail=detail)


def _grid_worst(
    func: Callable[[float, float], float],
    e_bars: tuple[float, ...] = CHECK_E_BARS,
    v_bars: tuple[float, ...] = CHECK_V_BARS,
) -> tuple[float, tuple[float, float]]:
    """Evaluate a deviation over a grid, return the worst one and where."""
    worst = 0.0
    where = (e_bars[0], v_bars[0])
    for v_bar in v_bars:
        for e_bar in e_bars:
            value = func(e_bar, v_bar)
            if not value <= worst:
                worst, where = value, (e_bar, v_bar)
    return worst, where


def check_unitarity(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> CheckResult:
    """|t|^2 + |r|^2 = 1 for the closed forms and for a sliced Gaussian barrier."""

    def closed(e_bar: float, v_bar: float) -> float:
        """The rectangular amplitudes."""
        sol = scatter_rect.rect_amplitude(e_bar, v_bar, config=config)
        return abs(abs(sol.t) ** 2 + abs(sol.r) ** 2 - 1)

    worst_closed, where = _grid_worst(closed)
    height: Final = CONSTANTS.k_b * presets.RB_BARRIER_TEMPERATURE
    decomp: Final = transfer_matrix.decompose(
        design.matched_gaussian(3.0, species, height),
        4 * config.slab_start,
        config=config,
    )
    worst_sliced = 0.0
    for e_bar in CHECK_E_BARS:
        sol = transfer_matrix.amplitude(decomp, e_bar * height, species.mean_mass, config=config)
        worst_sliced = max(worst_sliced, abs(sol.transmission + abs(sol.r) ** 2 - 1))
    return _verdict(
        "unitarity",
        max(worst_closed, worst_sliced),
        UNITARITY_TOLERANCE,
        f"rectangular worst at Ebar={where[0]}, Vbar={where[1]}: {worst_closed:.3g}; "
        f"sliced Gaussian at Vbar=3: {worst_sliced:.3g}",
    )


def check_continuity(*, config: defs.Config = defs.DEFAULT_CONFIG) -> CheckResult:
    """The tunneling time and the transmission are continuous across Ebar = 1."""
    step: Final = 1e-6
    worst = 0.0
    for v_bar in CHECK_V_BARS:
        at_top = scatter_rect.scaled_tunneling_time(1.0, v_bar, config=config)
        trans_top = scatter_rect.mean_transmission(1.0, v_bar, config=config)
        for e_bar in (1 - step, 1 + step):
            tau = scatter_rect.scaled_tunneling_time(e_bar, v_bar, config=config)
            trans = scatter_rect.mean_transmission(e_bar, v_bar, config=config)
            worst = max(worst, abs(tau / at_top - 1), abs(trans / trans_top - 1))
    return _verdict(
        "continuity",
        worst,
        CONTINUITY_TOLERANCE,
        f"omega tau and T at Ebar = 1 +/- {step:g}",
    )


def check_eigenstate(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> CheckResult:
    """A very narrow momentum packet behaves like the plane wave at its center."""
    height: Final = CONSTANTS.k_b * presets.RB_BARRIER_TEMPERATURE
    worst = 0.0
    for e_bar, v_bar in ((0.8, 2.0), (1.4, 4.0), (2.0, 1.0)):
        barrier = design.matched_rectangular(v_bar, species, height)
        p0 = math.sqrt(2 * species.mean_mass * e_bar * height)
        dist = wavepacket.MomentumDistribution.gaussian(p0, 1e-7 * p0)
        n_t = wavepacket.transmitted_number(dist, barrier, species, config=config)
        tau = wavepacket.packet_tunneling_time(dist, barrier, species, config=config)
        expected_t = scatter_rect.mean_transmission(e_bar, v_bar, config=config)
        expected_tau = scatter_rect.tunneling_time(e_bar, v_bar, species, config=config)
        worst = max(worst, abs(n_t / expected_t - 1), abs(tau / expected_tau - 1))
    return _verdict(
        "eigenstate",
        worst,
        EIGENSTATE_TOLERANCE,
        "packet N_T and tau for dp = 1e-7 p0 against the plane-wave values",
    )


def check_cancellation(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> CheckResult:
    """The reference arm removes the clock, dilation and laser terms exactly."""
    p: Final = CONSTANTS.hbar * presets.YB_BRAGG_WAVENUMBER
    t: Final = 1e-3

    def laser(time: float) -> float:
        """A slowly drifting laser phase."""
        return 0.25 * time * time

    worst = 0.0
    for v_bar in CHECK_V_BARS:
        for e_bar in CHECK_E_BARS:
            tunnel = clock.phase_budget(e_bar, v_bar, p, t, species, laser=laser, config=config)
            reference = clock.reference_budget(p, t, species, laser=laser)
            diff = design.differential_phase(tunnel, reference)
            if diff != tunnel.tunnel_term:
                worst = math.inf
            tau = scatter_rect.tunneling_time(e_bar, v_bar, species, config=config)
            worst = max(worst, abs(diff - tau * species.clock_frequency) / max(abs(diff), 1e-300))
    return _verdict(
        "cancellation",
        worst,
        CANCELLATION_TOLERANCE,
        "differential phase against the tunneling term (bit-exact) and dw tau",
    )


def check_reciprocity(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> CheckResult:
    """An asymmetric barrier transmits the same amplitude in both directions."""
    height: Final = CONSTANTS.k_b * presets.RB_BARRIER_TEMPERATURE
    width: Final = design.matched_rectangular(3.0, species, height).width
    xs: Final = np.linspace(0.0, width, 41)
    tilted: Final = np.sin(np.pi * xs / width) ** 2 * (1 + xs / width) / 2
    profile: Final = BarrierProfile.tabulated(xs, height * tilted)
    forward: Final = transfer_matrix.decompose(profile, 2 * config.slab_start, config=config)
    backward: Final = transfer_matrix.SlabDecomposition(
        boundaries=-forward.boundaries[::-1],
        heights=forward.heights[::-1],
    )
    worst = 0.0
    for e_bar in CHECK_E_BARS:
        energy = e_bar * profile.peak_height
        t_fwd = transfer_matrix.amplitude(forward, energy, species.mean_mass, config=config).t
        t_bwd = transfer_matrix.amplitude(backward, energy, species.mean_mass, config=config).t
        worst = max(worst, abs(t_bwd / t_fwd - 1))
    return _verdict(
        "reciprocity",
        worst,
        RECIPROCITY_TOLERANCE,
        "t of a tilted tabulated barrier against its mirror image",
    )


def check_single_slab(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> CheckResult:
    """The one-slab transfer matrix reproduces the closed rectangular amplitude."""
    height: Final = CONSTANTS.k_b * presets.RB_BARRIER_TEMPERATURE

    def deviation(e_bar: float, v_bar: float) -> float:
        """Compare the complex amplitudes."""
        decomp = transfer_matrix.decompose(design.matched_rectangular(v_bar, species, height), 1)
        sliced = transfer_matrix.amplitude(decomp, e_bar * height, species.mean_mass, config=config)
        closed = scatter_rect.rect_amplitude(e_bar, v_bar, config=config)
        return abs(sliced.t / closed.t - 1)

    worst, where = _grid_worst(deviation, ORACLE_E_BARS, ORACLE_V_BARS)
    return _verdict(
        "single-slab",
        worst,
        ORACLE_TOLERANCE,
        f"relative t difference, worst at Ebar={where[0]}, Vbar={where[1]}",
    )


def check_expansion(*, config: defs.Config = defs.DEFAULT_CONFIG) -> CheckResult:
    """The closed phase coefficients match differences of the unexpanded phase."""
    step: Final = 1e-6

    def deviation(e_bar: float, v_bar: float) -> float:
        """Compare both coefficients at one point."""

        def along(which: str) -> Callable[[float], float]:
            """The exact phase after a relative change of m or p."""

            def phase(delta: float) -> float:
                """Evaluate it."""
                shifted = scatter_rect.perturbed_point(e_bar, v_bar, **{which: delta})
                return scatter_rect.rect_phase(*shifted, config=config)

            return phase

        phi_m = scatter_rect.phi_mass(e_bar, v_bar, config=config)
        phi_p = scatter_rect.phi_momentum(e_bar, v_bar, config=config)
        fd_m = numerics.central_difference(along("mass"), 0.0, step)
        fd_p = numerics.central_difference(along("momentum"), 0.0, step)
        return max(
            abs(fd_m - phi_m) / max(abs(phi_m), 1.0),
            abs(fd_p - phi_p) / max(abs(phi_p), 1.0),
        )

    worst, where = _grid_worst(deviation)
    return _verdict(
        "expansion",
        worst,
        EXPANSION_TOLERANCE,
        f"phi_m and phi_p against central differences, worst at Ebar={where[0]}, Vbar={where[1]}",
    )


def _relative(value: float, expected: float) -> float:
    """The relative deviation from a reference value."""
    return abs(value / expected - 1)


def check_reference_numbers(*, config: defs.Config = defs.DEFAULT_CONFIG) -> CheckResult:
    """The working point, the Yb-174 budgets and the Rb-87 Larmor ratio."""
    yb: Final = presets.yb174()
    point: Final = design.working_point(
        presets.WORKING_E_BAR,
        presets.WORKING_V_BAR,
        yb,
        config=config,
    )
    v0: Final = presets.yb174_working_point().peak_height
    plain: Final = design.runs_to_resolve(point.tau * yb.clock_frequency, design.DEFAULT_ATOMS)
    boosted: Final = design.boosted_budget(point, yb, presets.YB_BOOST_SHIFT, v_bar_dim=v0)
    ratio: Final = clock.larmor_ratio(
        presets.rb87(),
        presets.RB_LARMOR_HEIGHT,
        presets.RB_LARMOR_FREQUENCY,
    )
    deviations: Final = {
        "omega_tau": _relative(point.scaled_tau, 3.6573),
        "T": _relative(point.t_bar, 0.87165),
        "tau": _relative(point.tau, 1.4849e-26),
        "tau_dw": _relative(point.tau * yb.clock_frequency, 4.87e-11),
        "runs": _relative(plain.runs, 4.216e15),
        "boost": _relative(boosted.boost, 2.104e6),
        "boosted_runs": _relative(boosted.budget.runs, 953),
        "larmor_ratio": _relative(ratio, 2.9345e15),
    }
    worst_name: Final = max(deviations, key=lambda name: deviations[name])
    return _verdict(
        "reference-numbers",
        deviations[worst_name],
        REFERENCE_TOLERANCE,
        f"Yb-174 working point, run budgets and Rb-87 Larmor ratio; worst: {worst_name}",
    )


def run_suite(
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> list[CheckResult]:
    """Run all the checks, the dimensional ones for the specified species."""
    results: Final = [
        check_unitarity(species, config=config),
        check_continuity(config=config),
        check_eigenstate(species, config=config),
        check_cancellation(species, config=config),
        check_reciprocity(species, config=config),
        check_single_slab(species, config=config),
        check_expansion(config=config),
        check_reference_numbers(config=config),
    ]
    failed: Final = [res.name for res in results if not res.passed]
    if failed:
        logging.warning("Failed checks: %(failed)s", {"failed": ", ".join(failed)})
    return results


__all__ = (
    "CheckResult",
    "check_cancellation",
    "check_continuity",
    "check_eigenstate",
    "check_expansion",
    "check_reciprocity",
    "check_reference_numbers",
    "check_single_slab",
    "check_unitarity",
    "run_suite",
)
