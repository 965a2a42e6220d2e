# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Closed-form scattering on a rectangular barrier in scaled parameters.

With `w = 1 - Ebar` and `u = Vbar sqrt(w)` the transmission amplitude is

    t = exp(-i Vbar sqrt(Ebar)) / [cosh(u) + i (1 - 2 Ebar) Vbar / (2 sqrt(Ebar)) sinh(u) / u]

which continues to cos/sin above the barrier. The hyperbolic functions are
evaluated with an exponential scale factor pulled out for Ebar < 1 and by
their Taylor series within the guard band around Ebar = 1.
"""

from __future__ import annotations

import cmath
import math
import typing
from typing import NamedTuple

import numpy as np

from . import defs
from . import numerics
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Callable, Final

    import numpy.typing as npt

    from .clock import ClockSpecies


IMAG_RESIDUE: Final = 1e-10


class ScatteringSolution(NamedTuple):
    """The transmitted and reflected amplitudes for one energy and one state."""

    t: complex
    """The transmission amplitude, referenced to the barrier's left edge."""

    r: complex
    """The reflection amplitude, referenced to the barrier's left edge."""

    transmission: float
    """The transmission probability |t|^2."""

    phase: float
    """The transmission phase arg(t) on the branch continuous in energy."""

    kappa0: float
    """The free wavenumber (1/m, or 1/a for the scaled closed forms)."""

    kappa1: complex
    """The wavenumber inside the barrier, imaginary for tunneling."""


class ExpansionCoefficients(NamedTuple):
    """First-order sensitivities of the transmission phase and probability."""

    phi_m: float
    """d(phase) / d(ln m) at fixed momentum; equal to the barrier-height coefficient."""

    phi_p: float
    """d(phase) / d(ln p), including the free-propagation term."""

    t_m: float
    """d(T) / d(ln m) at fixed momentum."""

    t_v: float
    """d(T) / d(ln V0) at fixed momentum."""

    t_p: float
    """d(T) / d(ln p)."""

    @property
    def phi_v(self) -> float:
        """The barrier-height phase coefficient, identical to the mass one."""
        return self.phi_m


class _Kernel(NamedTuple):
    """cosh(u), sinh(u)/u and sinh(2u)/(2u), each divided by exp(scale) or exp(2 scale)."""

    cosh: float
    sinhc: float
    sinhc2: float
    scale: float
    w: float
    guarded: bool


def _real(value: complex) -> float:
    """Return the real part of a value that must be real."""
    if abs(value.imag) > IMAG_RESIDUE * max(1.0, abs(value.real)):
        raise defs.NumericalError(
            {"re": value.real, "im": value.imag},
            "Unexpected imaginary residue in a closed-form expression",
        )
    return value.real


def _check_point(e_bar: float, v_bar: float) -> None:
    """Both scaled parameters must be finite and positive."""
    defs.check_positive("scaled kinetic energy", e_bar)
    defs.check_positive("barrier parameter", v_bar)


def _kernel(e_bar: float, v_bar: float, config: defs.Config) -> _Kernel:
    """Evaluate the hyperbolic building blocks on the appropriate branch."""
    w: Final = 1.0 - e_bar
    if abs(w) < config.guard_band:
        z2: Final = v_bar * v_bar * w
        return _Kernel(
            cosh=1 + z2 / 2 + z2 * z2 / 24 + z2**3 / 720,
            sinhc=1 + z2 / 6 + z2 * z2 / 120 + z2**3 / 5040,
            sinhc2=1 + 2 * z2 / 3 + 2 * z2 * z2 / 15 + 4 * z2**3 / 315,
            scale=0.0,
            w=w,
            guarded=True,
        )

    if w > 0:
        u: Final = v_bar * math.sqrt(w)
        q: Final = math.expm1(-2 * u)
        return _Kernel(
            cosh=(2 + q) / 2,
            sinhc=-q / (2 * u),
            sinhc2=-math.expm1(-4 * u) / (4 * u),
            scale=u,
            w=w,
            guarded=False,
        )

    uc: Final = v_bar * cmath.sqrt(complex(w))
    return _Kernel(
        cosh=_real(cmath.cosh(uc)),
        sinhc=_real(cmath.sinh(uc) / uc),
        sinhc2=_real(cmath.sinh(2 * uc) / (2 * uc)),
        scale=0.0,
        w=w,
        guarded=False,
    )


def _transmission(e_bar: float, v_bar: float, kern: _Kernel) -> tuple[float, float]:
    """Return T and T sinh(2u)/(2u), both free of overflow."""
    damping: Final = math.exp(-2 * kern.scale)
    denom: Final = damping + v_bar * v_bar * kern.sinhc * kern.sinhc / (4 * e_bar)
    return damping / denom, kern.sinhc2 / denom


def rect_amplitude(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> ScatteringSolution:
    """Compute the transmission and reflection amplitudes of a rectangular barrier."""
    _check_point(e_bar, v_bar)
    kern: Final = _kernel(e_bar, v_bar, config)
    root_e: Final = math.sqrt(e_bar)
    coupling: Final = (1 - 2 * e_bar) * v_bar / (2 * root_e)
    denom: Final = complex(kern.cosh, coupling * kern.sinhc)
    t: Final = cmath.exp(complex(-kern.scale, -v_bar * root_e)) / denom
    r: Final = complex(0, -v_bar / (2 * root_e)) * kern.sinhc / denom
    transmission, _ = _transmission(e_bar, v_bar, kern)
    return ScatteringSolution(
        t=t,
        r=r,
        transmission=transmission,
        phase=_phase_free(e_bar, v_bar, kern) - v_bar * root_e,
        kappa0=v_bar * root_e,
        kappa1=v_bar * cmath.sqrt(complex(-kern.w)),
    )


def mean_transmission(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return T = 1 / (1 + Vbar^2 sinhc(u)^2 / (4 Ebar)), zero when it underflows."""
    _check_point(e_bar, v_bar)
    transmission, _ = _transmission(e_bar, v_bar, _kernel(e_bar, v_bar, config))
    return transmission


def _phase_free(e_bar: float, v_bar: float, kern: _Kernel) -> float:
    """The transmission phase without the free-propagation term, continuous in energy."""
    root_e: Final = math.sqrt(e_bar)
    if kern.w > 0 or kern.guarded:
        # cosh(u) > 0 here, so the principal arctan is the continuous branch
        return math.atan((2 * e_bar - 1) * v_bar * kern.sinhc / (2 * root_e * kern.cosh))

    theta: Final = v_bar * math.sqrt(-kern.w)
    ratio: Final = (2 * e_bar - 1) / (2 * root_e * math.sqrt(-kern.w))
    return math.atan(ratio * math.tan(theta)) + math.pi * math.floor(theta / math.pi + 0.5)


def rect_phase(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return arg(t), the arctan part minus the free-propagation phase Vbar sqrt(Ebar)."""
    _check_point(e_bar, v_bar)
    return _phase_free(e_bar, v_bar, _kernel(e_bar, v_bar, config)) - v_bar * math.sqrt(e_bar)


def rect_phase_free(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the transmission phase without the free-propagation term."""
    _check_point(e_bar, v_bar)
    return _phase_free(e_bar, v_bar, _kernel(e_bar, v_bar, config))


def scan_phase(
    e_bars: npt.ArrayLike,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> npt.NDArray[np.float64]:
    """Return arg(t) along an energy scan, unwrapped onto the nearest branch."""
    raw: Final = np.array(
        [cmath.phase(rect_amplitude(float(e), v_bar, config=config).t) for e in np.ravel(e_bars)],
    )
    return np.unwrap(raw)


def phi_mass(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the mass (and barrier-height) phase coefficient; always negative."""
    _check_point(e_bar, v_bar)
    kern: Final = _kernel(e_bar, v_bar, config)
    transmission, t_sinhc2 = _transmission(e_bar, v_bar, kern)
    root_e: Final = math.sqrt(e_bar)
    if kern.guarded:
        v2: Final = v_bar * v_bar
        bracket_w = -(2 + 2 * v2 / 3) - 2 * v2 * v2 * kern.w / 15 - 4 * v2**3 * kern.w**2 / 315
        return v_bar * transmission * bracket_w / (4 * root_e)
    return v_bar * (transmission * (2 * e_bar - 1) - t_sinhc2) / (4 * root_e * kern.w)


def phi_momentum(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the momentum phase coefficient p d(phase)/dp."""
    _check_point(e_bar, v_bar)
    kern: Final = _kernel(e_bar, v_bar, config)
    transmission, t_sinhc2 = _transmission(e_bar, v_bar, kern)
    root_e: Final = math.sqrt(e_bar)
    if kern.guarded:
        v2: Final = v_bar * v_bar
        bracket_w = (3 + 2 * v2 / 3) + (-2 + 2 * v2 * v2 / 15) * kern.w
        bracket_w += 4 * v2**3 * kern.w**2 / 315
        return v_bar * transmission * bracket_w / (2 * root_e) - v_bar * root_e
    bracket: Final = t_sinhc2 - transmission * e_bar * (2 * e_bar - 1)
    return v_bar * bracket / (2 * root_e * kern.w) - v_bar * root_e


def scaled_tunneling_time(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the tunneling time in units of the inverse mean (Compton) frequency."""
    return -phi_mass(e_bar, v_bar, config=config)


def tunneling_time(
    e_bar: float,
    v_bar: float,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the tunneling time tau = |phi_m| / mean frequency in seconds."""
    return scaled_tunneling_time(e_bar, v_bar, config=config) / species.mean_frequency


def wigner_phase_time(
    e_bar: float,
    v_bar: float,
    v0: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the Wigner phase time hbar d(phase)/dE = hbar phi_p / (2 Ebar V0)."""
    defs.check_positive("barrier height", v0)
    return CONSTANTS.hbar * phi_momentum(e_bar, v_bar, config=config) / (2 * e_bar * v0)


def larmor_time(
    e_bar: float,
    v_bar: float,
    v0: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the Larmor time hbar |phi_V| / V0."""
    defs.check_positive("barrier height", v0)
    return CONSTANTS.hbar * abs(phi_mass(e_bar, v_bar, config=config)) / v0


def perturbed_point(
    e_bar: float,
    v_bar: float,
    *,
    mass: float = 0.0,
    momentum: float = 0.0,
    height: float = 0.0,
) -> tuple[float, float]:
    """Return the scaled point after relative changes of m, p and V0."""
    stiffness: Final = (1 + mass) * (1 + height)
    return e_bar * (1 + momentum) ** 2 / stiffness, v_bar * math.sqrt(stiffness)


def _log_derivative(
    func: Callable[[float, float], float],
    e_bar: float,
    v_bar: float,
    which: str,
    step: float,
) -> float:
    """Differentiate func(Ebar, Vbar) with respect to a relative change of m, p or V0."""

    def along(delta: float) -> float:
        """Evaluate the function at the perturbed point."""
        return func(*perturbed_point(e_bar, v_bar, **{which: delta}))

    return numerics.central_difference(along, 0.0, step)


def expansion_coefficients(
    e_bar: float,
    v_bar: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> ExpansionCoefficients:
    """Return the closed-form phase coefficients and the numerical transmission ones."""
    _check_point(e_bar, v_bar)

    def trans(e: float, v: float) -> float:
        """The mean transmission at a perturbed point."""
        return mean_transmission(e, v, config=config)

    return ExpansionCoefficients(
        phi_m=phi_mass(e_bar, v_bar, config=config),
        phi_p=phi_momentum(e_bar, v_bar, config=config),
        t_m=_log_derivative(trans, e_bar, v_bar, "mass", config.fd_step),
        t_v=_log_derivative(trans, e_bar, v_bar, "height", config.fd_step),
        t_p=_log_derivative(trans, e_bar, v_bar, "momentum", config.fd_step),
    )


def resonance_energies(v_bar: float, count: int) -> list[float]:
    """Return the scaled energies above the barrier where T = 1 exactly."""
    defs.check_positive("barrier parameter", v_bar)
    if count < 0:
        raise defs.DomainError(f"The number of resonances must be non-negative, got {count}")
    return [1 + (order * math.pi / v_bar) ** 2 for order in range(1, count + 1)]
