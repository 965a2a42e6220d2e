# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""The Ramsey-clock model: mass defect, transmitted states and the phase budget.

The internal states carry the rest masses `m_e/g = m (1 +/- dw / 2w)`, so the
same barrier scatters them differently. The exact route evaluates the closed
rectangular amplitudes for each state separately; the budget route uses the
first-order expansion coefficients. All phases are arg<e_T|g_T>, i.e. the
excited-state phase subtracted from the ground-state one.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import typing
from typing import NamedTuple

import numpy as np

from . import defs
from . import scatter_rect
from .barrier import ClockState
from .barrier import StatePotential
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Final

    import numpy.typing as npt

    from .barrier import BarrierProfile


LaserPhase = typing.Callable[[float], float]
"""The laser phase phi(t) of the second Ramsey pulse relative to the first one."""


@dataclasses.dataclass(frozen=True)
class ClockSpecies:
    """An atomic species used as a two-level clock."""

    name: str
    """A short label, e.g. "Yb-174"."""

    mean_mass: float
    """The mean rest mass of the two clock states in kg."""

    clock_frequency: float
    """The transition angular frequency dw in rad/s."""

    mean_frequency: float
    """The mean (Compton) angular frequency m c^2 / hbar in rad/s."""

    def __post_init__(self) -> None:
        """Check the mass-frequency relation and the size of the splitting."""
        defs.check_positive("mean mass", self.mean_mass)
        defs.check_positive("mean frequency", self.mean_frequency)
        expected: Final = self.mean_mass * CONSTANTS.c**2 / CONSTANTS.hbar
        if not math.isclose(self.mean_frequency, expected, rel_tol=1e-12):
            raise defs.DomainError(
                f"{self.name}: the mean frequency {self.mean_frequency!r} rad/s does not "
                f"match m c^2 / hbar = {expected!r} rad/s",
            )
        if not math.isfinite(self.clock_frequency) or self.clock_frequency < 0:
            raise defs.DomainError(
                f"{self.name}: the clock frequency must be finite and non-negative, "
                f"got {self.clock_frequency!r}",
            )
        if self.clock_frequency >= defs.CLOCK_RATIO_CAP * self.mean_frequency:
            raise defs.DomainError(
                f"{self.name}: the clock splitting is not small compared to the rest energy",
            )

    @classmethod
    def from_mass(cls, name: str, mass: float, clock_frequency: float) -> ClockSpecies:
        """Build a species from its mean mass in kg."""
        defs.check_positive("mean mass", mass)
        return cls(
            name=name,
            mean_mass=mass,
            clock_frequency=clock_frequency,
            mean_frequency=mass * CONSTANTS.c**2 / CONSTANTS.hbar,
        )

    @classmethod
    def from_mass_u(cls, name: str, mass_u: float, clock_frequency: float) -> ClockSpecies:
        """Build a species from its mean mass in atomic mass units."""
        return cls.from_mass(name, mass_u * CONSTANTS.u, clock_frequency)

    @classmethod
    def from_mean_frequency(
        cls,
        name: str,
        mean_frequency: float,
        clock_frequency: float,
    ) -> ClockSpecies:
        """Build a species from its Compton angular frequency."""
        defs.check_positive("mean frequency", mean_frequency)
        return cls(
            name=name,
            mean_mass=mean_frequency * CONSTANTS.hbar / CONSTANTS.c**2,
            clock_frequency=clock_frequency,
            mean_frequency=mean_frequency,
        )

    @property
    def mass_ratio(self) -> float:
        """The relative mass defect dw / w."""
        return self.clock_frequency / self.mean_frequency


@dataclasses.dataclass(frozen=True)
class PerturbationSet:
    """Relative state-dependent differences beyond the mass defect (excited minus ground)."""

    mass_rel: float = 0.0
    """An additional relative mass difference dm / m."""

    momentum_rel: float = 0.0
    """The relative momentum difference dp / p."""

    barrier_rel: float = 0.0
    """The relative barrier height difference dV / V."""

    def __post_init__(self) -> None:
        """Stay within the first-order regime."""
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (math.isfinite(value) and abs(value) < defs.PERTURBATION_CAP):
                raise defs.DomainError(
                    f"The {field.name} perturbation {value!r} is outside the first-order "
                    f"regime (|value| < {defs.PERTURBATION_CAP})",
                )


NO_PERTURBATION: Final = PerturbationSet()


def barrier_split(
    perturb: PerturbationSet,
    barrier: BarrierProfile | None,
) -> PerturbationSet:
    """Take the relative height split dV / V0 of a barrier into the perturbations.

    A perturbation set that already carries a different height split is refused.
    """
    if barrier is None or barrier.delta_v == 0:
        return perturb
    split: Final = (
        StatePotential(barrier, ClockState.EXCITED).factor
        - StatePotential(barrier, ClockState.GROUND).factor
    )
    if perturb.barrier_rel != 0 and not math.isclose(perturb.barrier_rel, split, rel_tol=1e-9):
        raise defs.DomainError(
            f"The barrier height split {split!r} conflicts with the barrier_rel "
            f"perturbation {perturb.barrier_rel!r}",
        )
    return dataclasses.replace(perturb, barrier_rel=split)


class PhaseBudget(NamedTuple):
    """The first-order decomposition of arg<e_T|g_T> after a Ramsey sequence."""

    clock_term: float
    """dw t, the free clock phase."""

    dilation_term: float
    """The special-relativistic time dilation phase dw dt."""

    tunnel_term: float
    """The mass-defect scattering phase dw tau."""

    larmor_term: float
    """The barrier-height scattering phase tau_L omega_L."""

    doppler_term: float
    """The differential Doppler phase of a state-dependent momentum."""

    laser_term: float
    """-(phi(t) - phi(0)), the laser phase difference of the two pulses."""

    total: float
    """The sum of all the terms above."""

    lab_time: float
    """The Ramsey time t in s."""

    momentum: float
    """The mean momentum |p| in kg m / s."""

    phase_rate: float
    """d(total) / dt in rad / s, with the laser phase held fixed."""

    species: ClockSpecies
    """The clock species the budget was computed for."""


class TransmittedStates(NamedTuple):
    """The two transmitted internal states, computed without any expansion.

    The amplitudes are relative to the common factor exp(-i (w - p^2 / 2 m hbar) t)
    of the mean state.
    """

    ground: complex
    """The ground-state amplitude."""

    excited: complex
    """The excited-state amplitude."""

    transmission_g: float
    """The ground-state transmission probability."""

    transmission_e: float
    """The excited-state transmission probability."""

    clock_phase: float
    """(w_e - w_g) t."""

    kinetic_phase: float
    """-(K_e - K_g) t / hbar."""

    scattering_phase: float
    """-(phase_e - phase_g), the scattering phase difference."""

    laser_phase: float
    """-(phi(t) - phi(0))."""


class RamseySignal(NamedTuple):
    """The interference signal of the transmitted states."""

    n_t: float
    """The mean transmitted number per incident atom."""

    contrast: float
    """|<e_T|g_T>| / N_T."""

    phase: float
    """arg<e_T|g_T> in rad."""

    intensity: float
    """The ground-state population after the second pulse."""


def _laser_term(laser: LaserPhase | None, t: float) -> float:
    """Evaluate -(phi(t) - phi(0)), zero for locked Ramsey fields."""
    if laser is None:
        return 0.0
    return -(laser(t) - laser(0.0))


def _check_time(t: float) -> float:
    """The Ramsey time must be finite and non-negative."""
    if not (math.isfinite(t) and t >= 0):
        raise defs.DomainError(f"The Ramsey time must be finite and non-negative, got {t!r}")
    return t


def state_masses(species: ClockSpecies) -> tuple[float, float]:
    """Return the ground- and excited-state rest masses in kg."""
    half: Final = species.mass_ratio / 2
    return species.mean_mass * (1 - half), species.mean_mass * (1 + half)


def time_dilation(p: float, t: float, species: ClockSpecies) -> float:
    """Return the time dilation dt = (p / m c)^2 t / 2 of a moving clock."""
    _check_time(t)
    beta: Final = p / (species.mean_mass * CONSTANTS.c)
    return 0.5 * beta * beta * t


def _splitting(species: ClockSpecies, perturb: PerturbationSet) -> float:
    """The total relative mass splitting of the two states."""
    return species.mass_ratio + perturb.mass_rel


def transmitted_states(  # noqa: PLR0913  # the physical inputs, all of them
    e_bar: float,
    v_bar: float,
    p: float,
    t: float,
    species: ClockSpecies,
    perturb: PerturbationSet = NO_PERTURBATION,
    *,
    barrier: BarrierProfile | None = None,
    laser: LaserPhase | None = None,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> TransmittedStates:
    """Scatter each state on a rectangular barrier with its own mass, momentum and height.

    The scaled parameters and `p` describe the mean state. The height split of
    `barrier`, if any, acts as the `barrier_rel` perturbation.
    """
    _check_time(t)
    perturb = barrier_split(perturb, barrier)
    defs.check_positive("momentum", abs(p))
    x: Final = _splitting(species, perturb)
    mean_kinetic: Final = p * p / (2 * species.mean_mass)

    def scatter(sign: int) -> tuple[scatter_rect.ScatteringSolution, float]:
        """Return the solution and K_j - K for one state."""
        mass = 1 + sign * x / 2
        mom = 1 + sign * perturb.momentum_rel / 2
        height = 1 + sign * perturb.barrier_rel / 2
        stiffness = mass * height
        solution = scatter_rect.rect_amplitude(
            e_bar * mom * mom / stiffness,
            v_bar * math.sqrt(stiffness),
            config=config,
        )
        return solution, mean_kinetic * (mom * mom / mass - 1)

    ground, kin_g = scatter(-1)
    excited, kin_e = scatter(1)
    delta_k: Final = mean_kinetic * (
        (2 * perturb.momentum_rel - x * (1 + perturb.momentum_rel**2 / 4)) / (1 - x * x / 4)
    )
    half_clock: Final = species.clock_frequency * t / 2

    def state(solution: scatter_rect.ScatteringSolution, kin: float, clock: float) -> complex:
        """Attach the state's clock and kinetic phases to its transmitted amplitude."""
        arg = solution.phase + kin * t / CONSTANTS.hbar - clock
        return cmath.rect(math.sqrt(solution.transmission), arg)

    return TransmittedStates(
        ground=state(ground, kin_g, -half_clock),
        excited=state(excited, kin_e, half_clock),
        transmission_g=ground.transmission,
        transmission_e=excited.transmission,
        clock_phase=species.clock_frequency * t,
        kinetic_phase=-delta_k * t / CONSTANTS.hbar,
        scattering_phase=-(excited.phase - ground.phase),
        laser_phase=_laser_term(laser, t),
    )


def exact_phase_difference(states: TransmittedStates) -> float:
    """Return arg<e_T|g_T> on the continuous branch, from its components."""
    return states.clock_phase + states.kinetic_phase + states.scattering_phase + states.laser_phase


def ramsey_signal(states: TransmittedStates) -> RamseySignal:
    """Return the number, contrast, phase and intensity of the interference signal."""
    n_t: Final = (states.transmission_e + states.transmission_g) / 2
    if n_t <= 0:
        raise defs.DegenerateTransmissionError("Neither clock state is transmitted")
    overlap: Final = math.sqrt(states.transmission_e * states.transmission_g)
    contrast: Final = min(overlap / n_t, 1.0)
    phase: Final = exact_phase_difference(states)
    return RamseySignal(
        n_t=n_t,
        contrast=contrast,
        phase=phase,
        intensity=0.5 * n_t * (1 + contrast * math.cos(phase)),
    )


def phase_budget(  # noqa: PLR0913  # the physical inputs, all of them
    e_bar: float,
    v_bar: float,
    p: float,
    t: float,
    species: ClockSpecies,
    perturb: PerturbationSet = NO_PERTURBATION,
    larmor_freq: float | None = None,
    *,
    barrier: BarrierProfile | None = None,
    laser: LaserPhase | None = None,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> PhaseBudget:
    """Expand arg<e_T|g_T> to first order in the state-dependent differences.

    The barrier height is recovered from the momentum and the scaled energy.
    If `larmor_freq` is given, it must agree with dV / hbar. The height split
    of `barrier`, if any, acts as the `barrier_rel` perturbation.
    """
    _check_time(t)
    perturb = barrier_split(perturb, barrier)
    defs.check_positive("momentum", abs(p))
    p_squared: Final = p * p
    v0: Final = p_squared / (2 * species.mean_mass * e_bar)
    expected_larmor: Final = perturb.barrier_rel * v0 / CONSTANTS.hbar
    if larmor_freq is not None and not math.isclose(
        larmor_freq,
        expected_larmor,
        rel_tol=1e-9,
    ):
        raise defs.DomainError(
            f"The Larmor frequency {larmor_freq!r} rad/s does not match "
            f"dV / hbar = {expected_larmor!r} rad/s",
        )

    x: Final = _splitting(species, perturb)
    phi_m: Final = scatter_rect.phi_mass(e_bar, v_bar, config=config)
    kinetic_rate: Final = p_squared / (CONSTANTS.hbar * species.mean_mass)
    tau_p: Final = scatter_rect.wigner_phase_time(e_bar, v_bar, v0, config=config)

    clock_term: Final = species.clock_frequency * t
    dilation_term: Final = x * kinetic_rate * t / 2
    tunnel_term: Final = abs(phi_m) * x
    larmor_term: Final = (
        scatter_rect.larmor_time(e_bar, v_bar, v0, config=config) * expected_larmor
    )
    doppler_term: Final = -(t + tau_p) * kinetic_rate * perturb.momentum_rel
    laser_term: Final = _laser_term(laser, t)
    return PhaseBudget(
        clock_term=clock_term,
        dilation_term=dilation_term,
        tunnel_term=tunnel_term,
        larmor_term=larmor_term,
        doppler_term=doppler_term,
        laser_term=laser_term,
        total=clock_term + dilation_term + tunnel_term + larmor_term + doppler_term + laser_term,
        lab_time=t,
        momentum=abs(p),
        phase_rate=species.clock_frequency + kinetic_rate * (x / 2 - perturb.momentum_rel),
        species=species,
    )


def reference_budget(
    p: float,
    t: float,
    species: ClockSpecies,
    perturb: PerturbationSet = NO_PERTURBATION,
    *,
    laser: LaserPhase | None = None,
) -> PhaseBudget:
    """Return the budget of the barrier-free reference arm with the same |p|."""
    _check_time(t)
    defs.check_positive("momentum", abs(p))
    x: Final = _splitting(species, perturb)
    kinetic_rate: Final = p * p / (CONSTANTS.hbar * species.mean_mass)

    clock_term: Final = species.clock_frequency * t
    dilation_term: Final = x * kinetic_rate * t / 2
    doppler_term: Final = -t * kinetic_rate * perturb.momentum_rel
    laser_term: Final = _laser_term(laser, t)
    return PhaseBudget(
        clock_term=clock_term,
        dilation_term=dilation_term,
        tunnel_term=0.0,
        larmor_term=0.0,
        doppler_term=doppler_term,
        laser_term=laser_term,
        total=clock_term + dilation_term + doppler_term + laser_term,
        lab_time=t,
        momentum=abs(p),
        phase_rate=species.clock_frequency + kinetic_rate * (x / 2 - perturb.momentum_rel),
        species=species,
    )


def effective_clock_frequency(species: ClockSpecies, v_bar_dim: float, delta_v: float) -> float:
    """Return dw + w dV / V, the clock frequency boosted by a differential barrier shift."""
    defs.check_positive("mean barrier height", v_bar_dim)
    return species.clock_frequency + species.mean_frequency * delta_v / v_bar_dim


def ramsey_intensity(
    budget: PhaseBudget,
    n_t: float,
    contrast: float,
    laser_phase: float = 0.0,
) -> float:
    """Return the ground-state population N_T / 2 (1 + C cos(phase)).

    The `laser_phase` is an additional constant offset subtracted from the budget.
    """
    if not 0 <= contrast <= 1:
        raise defs.DomainError(f"The contrast must lie in [0, 1], got {contrast!r}")
    if not (math.isfinite(n_t) and n_t >= 0):
        raise defs.DomainError(f"The transmitted number must be non-negative, got {n_t!r}")
    return 0.5 * n_t * (1 + contrast * math.cos(budget.total - laser_phase))


def fringe(
    budget: PhaseBudget,
    times: npt.ArrayLike,
    n_t: float,
    contrast: float,
    laser_phase: float = 0.0,
) -> npt.NDArray[np.float64]:
    """Return the Ramsey intensity over a scan of the lab time."""
    if not 0 <= contrast <= 1:
        raise defs.DomainError(f"The contrast must lie in [0, 1], got {contrast!r}")
    lab: Final = np.asarray(times, dtype=np.float64)
    if np.any(lab < 0) or not np.all(np.isfinite(lab)):
        raise defs.DomainError("The Ramsey times must be finite and non-negative")
    phase: Final = budget.total + budget.phase_rate * (lab - budget.lab_time) - laser_phase
    return 0.5 * n_t * (1 + contrast * np.cos(phase))


def larmor_ratio(species: ClockSpecies, v_bar_dim: float, omega_l: float) -> float:
    """Return tau_L omega_L / (tau dw) = (hbar w / V) (omega_L / dw)."""
    defs.check_positive("mean barrier height", v_bar_dim)
    defs.check_positive("clock frequency", species.clock_frequency)
    hbar_w: Final = CONSTANTS.hbar * species.mean_frequency
    return hbar_w / v_bar_dim * (omega_l / species.clock_frequency)


__all__ = (
    "NO_PERTURBATION",
    "ClockSpecies",
    "LaserPhase",
    "PerturbationSet",
    "PhaseBudget",
    "RamseySignal",
    "TransmittedStates",
    "effective_clock_frequency",
    "exact_phase_difference",
    "fringe",
    "larmor_ratio",
    "phase_budget",
    "ramsey_intensity",
    "ramsey_signal",
    "reference_budget",
    "state_masses",
    "time_dilation",
    "transmitted_states",
)
