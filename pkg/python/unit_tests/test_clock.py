# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Test the clock model: exact transmitted states against the first-order budget."""

from __future__ import annotations

import math
import typing

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tunnel_clock import clock
from tunnel_clock import defs
from tunnel_clock import presets
from tunnel_clock import scatter_rect
from tunnel_clock.barrier import BarrierProfile
from tunnel_clock.clock import ClockSpecies
from tunnel_clock.clock import PerturbationSet
from tunnel_clock.units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Final


TEST_MEAN_FREQUENCY: Final = 2 * math.pi * 1e25
"""A heavy test clock with an exaggerated mass defect."""

P_TEST: Final = 1e-27


def _test_species(ratio: float = 5e-7) -> ClockSpecies:
    """Build a clock with a large relative splitting."""
    return ClockSpecies.from_mean_frequency(
        "test",
        TEST_MEAN_FREQUENCY,
        ratio * TEST_MEAN_FREQUENCY,
    )


def _exact(e_bar: float, v_bar: float, perturb: PerturbationSet, t: float = 0.0) -> float:
    """The unexpanded phase difference."""
    return clock.exact_phase_difference(
        clock.transmitted_states(e_bar, v_bar, P_TEST, t, _test_species(), perturb),
    )


def _budget(e_bar: float, v_bar: float, perturb: PerturbationSet, t: float = 0.0) -> float:
    """The first-order phase difference."""
    return clock.phase_budget(e_bar, v_bar, P_TEST, t, _test_species(), perturb).total


def test_species() -> None:
    """The presets and the consistency checks."""
    yb: Final = presets.yb174()
    assert yb.mean_mass == pytest.approx(173.94 * CONSTANTS.u, rel=2e-3)
    assert yb.mass_ratio == pytest.approx(522e12 / 3.92e25, rel=1e-12)

    rb: Final = presets.rb87()
    assert rb.mean_frequency == pytest.approx(
        rb.mean_mass * CONSTANTS.c**2 / CONSTANTS.hbar,
        rel=1e-15,
    )
    assert ClockSpecies.from_mass("x", rb.mean_mass, 0.0).clock_frequency == 0.0

    with pytest.raises(defs.DomainError):
        ClockSpecies("bad", rb.mean_mass, rb.clock_frequency, 2 * rb.mean_frequency)
    with pytest.raises(defs.DomainError):
        ClockSpecies.from_mass("bad", rb.mean_mass, -1.0)
    with pytest.raises(defs.DomainError):
        ClockSpecies.from_mass("bad", rb.mean_mass, 1e-5 * rb.mean_frequency)


@pytest.mark.parametrize("field", ["mass_rel", "momentum_rel", "barrier_rel"])
def test_perturbation_cap(field: str) -> None:
    """Refuse perturbations beyond the first-order regime."""
    PerturbationSet(**{field: 9e-4})
    with pytest.raises(defs.DomainError):
        PerturbationSet(**{field: 1e-3})
    with pytest.raises(defs.DomainError):
        PerturbationSet(**{field: math.nan})


def test_state_masses() -> None:
    """The two masses straddle the mean and differ by the mass defect."""
    species: Final = _test_species()
    ground, excited = clock.state_masses(species)
    assert (ground + excited) / 2 == pytest.approx(species.mean_mass, rel=1e-15)
    assert (excited - ground) / species.mean_mass == pytest.approx(5e-7, rel=1e-8)


def test_time_dilation() -> None:
    """dt = (p / m c)^2 t / 2."""
    species: Final = presets.rb87()
    p: Final = 1e-3 * species.mean_mass * CONSTANTS.c
    assert clock.time_dilation(p, 2.0, species) == pytest.approx(1e-6, rel=1e-12)
    with pytest.raises(defs.DomainError):
        clock.time_dilation(p, -1.0, species)


@pytest.mark.parametrize(
    "which",
    ["mass_rel", "momentum_rel", "barrier_rel"],
)
def test_budget_second_order(which: str) -> None:
    """The first-order budget misses the exact phase by a term of third order."""

    def error(eps: float) -> float:
        """The relative deviation for one perturbation size."""
        perturb = PerturbationSet(**{which: eps})
        exact = _exact(0.8, 3.0, perturb)
        return abs(_budget(0.8, 3.0, perturb) / exact - 1)

    coarse: Final = error(9e-4)
    fine: Final = error(4.5e-4)
    assert coarse <= 1e3 * 9e-4**2
    assert coarse / fine > 3


@given(
    e_bar=st.floats(min_value=0.05, max_value=4.0),
    v_bar=st.floats(min_value=0.2, max_value=6.0),
    mass_rel=st.floats(min_value=-1e-4, max_value=1e-4),
    momentum_rel=st.floats(min_value=-1e-4, max_value=1e-4),
    barrier_rel=st.floats(min_value=-1e-4, max_value=1e-4),
)
def test_budget_matches_exact(
    e_bar: float,
    v_bar: float,
    mass_rel: float,
    momentum_rel: float,
    barrier_rel: float,
) -> None:
    """The first-order budget agrees with the exact phase difference."""
    perturb: Final = PerturbationSet(
        mass_rel=mass_rel,
        momentum_rel=momentum_rel,
        barrier_rel=barrier_rel,
    )
    scale: Final = max(abs(5e-7 + mass_rel), abs(momentum_rel), abs(barrier_rel))
    assert abs(_budget(e_bar, v_bar, perturb) - _exact(e_bar, v_bar, perturb)) <= 1e-5 * scale


def test_budget_terms() -> None:
    """Each term of the budget has its textbook form."""
    species: Final = presets.yb174()
    e_bar, v_bar, t = 1.4, 4.0, 2e-3
    p: Final = CONSTANTS.hbar * presets.YB_BRAGG_WAVENUMBER
    v0: Final = p * p / (2 * species.mean_mass * e_bar)
    perturb: Final = PerturbationSet(barrier_rel=1e-4)

    budget: Final = clock.phase_budget(
        e_bar,
        v_bar,
        p,
        t,
        species,
        perturb,
        larmor_freq=1e-4 * v0 / CONSTANTS.hbar,
        laser=lambda time: 3 * time,
    )
    assert budget.clock_term == species.clock_frequency * t
    assert budget.dilation_term == pytest.approx(
        species.clock_frequency * clock.time_dilation(p, t, species),
        rel=1e-12,
    )
    assert budget.tunnel_term == pytest.approx(
        scatter_rect.tunneling_time(e_bar, v_bar, species) * species.clock_frequency,
        rel=1e-12,
    )
    assert budget.larmor_term == pytest.approx(
        1e-4 * scatter_rect.scaled_tunneling_time(e_bar, v_bar),
        rel=1e-12,
    )
    assert budget.doppler_term == 0.0
    assert budget.laser_term == pytest.approx(-3 * t, rel=1e-15)
    assert budget.total == pytest.approx(
        budget.clock_term
        + budget.dilation_term
        + budget.tunnel_term
        + budget.larmor_term
        + budget.doppler_term
        + budget.laser_term,
        rel=1e-15,
    )

    with pytest.raises(defs.DomainError):
        clock.phase_budget(e_bar, v_bar, p, t, species, perturb, larmor_freq=1.0)


def test_barrier_split() -> None:
    """A barrier's height split acts like the relative barrier perturbation."""
    species: Final = _test_species()
    e_bar, v_bar = 0.8, 3.0
    v0: Final = P_TEST * P_TEST / (2 * species.mean_mass * e_bar)
    split: Final = BarrierProfile.rectangular(v0, 1e-6, delta_v=1e-4 * v0)
    perturb: Final = PerturbationSet(barrier_rel=1e-4)

    assert clock.phase_budget(e_bar, v_bar, P_TEST, 0.0, species).larmor_term == 0.0
    budget: Final = clock.phase_budget(e_bar, v_bar, P_TEST, 0.0, species, barrier=split)
    assert budget.larmor_term > 0
    assert budget.larmor_term == pytest.approx(
        clock.phase_budget(e_bar, v_bar, P_TEST, 0.0, species, perturb).larmor_term,
        rel=1e-9,
    )
    assert budget.larmor_term == pytest.approx(
        scatter_rect.larmor_time(e_bar, v_bar, v0) * 1e-4 * v0 / CONSTANTS.hbar,
        rel=1e-9,
    )

    from_barrier: Final = clock.transmitted_states(
        e_bar,
        v_bar,
        P_TEST,
        0.0,
        species,
        barrier=split,
    )
    from_perturb: Final = clock.transmitted_states(e_bar, v_bar, P_TEST, 0.0, species, perturb)
    assert clock.exact_phase_difference(from_barrier) == pytest.approx(
        clock.exact_phase_difference(from_perturb),
        rel=1e-9,
    )

    agreeing: Final = clock.phase_budget(
        e_bar,
        v_bar,
        P_TEST,
        0.0,
        species,
        perturb,
        barrier=split,
    )
    assert agreeing.larmor_term == pytest.approx(budget.larmor_term, rel=1e-9)
    with pytest.raises(defs.DomainError):
        clock.phase_budget(
            e_bar,
            v_bar,
            P_TEST,
            0.0,
            species,
            PerturbationSet(barrier_rel=2e-4),
            barrier=split,
        )
    with pytest.raises(defs.DomainError):
        clock.phase_budget(
            e_bar,
            v_bar,
            P_TEST,
            0.0,
            species,
            barrier=BarrierProfile.rectangular(v0, 1e-6, delta_v=1e-2 * v0),
        )


def test_reference_budget() -> None:
    """The reference arm shares everything but the barrier terms."""
    species: Final = presets.yb174()
    p: Final = CONSTANTS.hbar * presets.YB_BRAGG_WAVENUMBER
    perturb: Final = PerturbationSet(momentum_rel=1e-5)
    tunnel: Final = clock.phase_budget(1.4, 4.0, p, 1e-3, species, perturb)
    reference: Final = clock.reference_budget(p, 1e-3, species, perturb)
    assert reference.tunnel_term == 0.0
    assert reference.larmor_term == 0.0
    assert reference.clock_term == tunnel.clock_term
    assert reference.dilation_term == tunnel.dilation_term
    assert reference.phase_rate == tunnel.phase_rate

    # Without any free flight only the Wigner delay carries a Doppler phase.
    v0: Final = p * p / (2 * species.mean_mass * 1.4)
    at_start: Final = clock.phase_budget(1.4, 4.0, p, 0.0, species, perturb)
    assert at_start.doppler_term == pytest.approx(
        -scatter_rect.wigner_phase_time(1.4, 4.0, v0)
        * (p * p / (CONSTANTS.hbar * species.mean_mass))
        * 1e-5,
        rel=1e-12,
    )
    assert clock.reference_budget(p, 0.0, species, perturb).doppler_term == 0.0


def test_ramsey_signal() -> None:
    """Number, contrast and intensity of the transmitted interference."""
    species: Final = _test_species()
    states: Final = clock.transmitted_states(0.8, 3.0, P_TEST, 0.0, species)
    signal: Final = clock.ramsey_signal(states)
    assert signal.n_t == pytest.approx(scatter_rect.mean_transmission(0.8, 3.0), rel=1e-6)
    assert 0.999 < signal.contrast <= 1
    assert signal.phase == pytest.approx(
        scatter_rect.scaled_tunneling_time(0.8, 3.0) * species.mass_ratio,
        rel=1e-6,
    )
    assert signal.intensity == pytest.approx(
        0.5 * signal.n_t * (1 + signal.contrast * math.cos(signal.phase)),
        rel=1e-15,
    )
    overlap: Final = states.ground * states.excited.conjugate()
    assert abs(overlap) == pytest.approx(signal.contrast * signal.n_t, rel=1e-12)


def test_degenerate_transmission() -> None:
    """Refuse to interfere states that never make it through."""
    states: Final = clock.transmitted_states(0.1, 2000.0, P_TEST, 0.0, _test_species())
    assert states.transmission_g == 0.0
    assert states.transmission_e == 0.0
    with pytest.raises(defs.DegenerateTransmissionError):
        clock.ramsey_signal(states)


def test_fringe() -> None:
    """The fringe scan passes through the budget's own intensity."""
    species: Final = presets.yb174()
    p: Final = CONSTANTS.hbar * presets.YB_BRAGG_WAVENUMBER
    budget: Final = clock.phase_budget(1.4, 4.0, p, 1e-15, species)
    times: Final = np.array([0.0, 1e-15, 2e-15])
    values: Final = clock.fringe(budget, times, 0.8, 0.9)
    assert values[1] == pytest.approx(clock.ramsey_intensity(budget, 0.8, 0.9), rel=1e-12)
    assert np.all(values >= 0)
    assert np.all(values <= 0.8)

    with pytest.raises(defs.DomainError):
        clock.fringe(budget, times, 0.8, 1.5)
    with pytest.raises(defs.DomainError):
        clock.fringe(budget, [-1.0], 0.8, 0.5)
    with pytest.raises(defs.DomainError):
        clock.ramsey_intensity(budget, -1.0, 0.5)


def test_effective_frequency_and_larmor_ratio() -> None:
    """The boost and the Larmor comparison of the reference scenarios."""
    yb: Final = presets.yb174()
    v0: Final = presets.yb174_working_point().peak_height
    omega_eff: Final = clock.effective_clock_frequency(yb, v0, presets.YB_BOOST_SHIFT)
    assert omega_eff / yb.clock_frequency == pytest.approx(2.104e6, rel=1e-3)
    assert clock.effective_clock_frequency(yb, v0, 0.0) == yb.clock_frequency

    ratio: Final = clock.larmor_ratio(
        presets.rb87(),
        presets.RB_LARMOR_HEIGHT,
        presets.RB_LARMOR_FREQUENCY,
    )
    assert ratio == pytest.approx(2.9345e15, rel=1e-3)
