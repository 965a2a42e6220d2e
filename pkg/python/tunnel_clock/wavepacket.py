# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Average transmission, time dilation and tunneling time over a momentum distribution.

Every average is a transmission-weighted integral over |psi_0(p)|^2, evaluated
by adaptive Gauss-Kronrod quadrature over strictly positive momenta.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import logging
import math
import typing
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy import special

from . import defs
from . import numerics
from . import scatter_rect
from . import transfer_matrix
from .defs import BarrierShape
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Callable, Final

    import numpy.typing as npt

    from .barrier import BarrierProfile
    from .clock import ClockSpecies


NEGATIVE_WEIGHT_CAP: Final = 1e-15
"""The largest weight a Gaussian packet may carry at negative momenta."""

NORMALIZATION_TOLERANCE: Final = 1e-10
"""How far the integral of a tabulated distribution may stray from one."""

DEGENERATE_TRANSMISSION: Final = 1e-30
"""Below this transmitted number the weighted averages are meaningless."""


class MomentumKind(str, enum.Enum):
    """The kind of a momentum distribution."""

    GAUSSIAN = "gaussian"
    TABULATED = "tabulated"


@dataclasses.dataclass(frozen=True)
class MomentumDistribution:
    """The momentum density |psi_0(p)|^2 of the incident clock, normalized to one."""

    kind: MomentumKind
    """Gaussian or tabulated."""

    p0: float = 0.0
    """The central momentum of a Gaussian packet in kg m / s."""

    delta_p: float = 0.0
    """The momentum standard deviation of a Gaussian packet in kg m / s."""

    ps: tuple[float, ...] = ()
    """The sample momenta of a tabulated distribution."""

    weights: tuple[float, ...] = ()
    """The sampled density values of a tabulated distribution."""

    def __post_init__(self) -> None:
        """Validate the distribution."""
        if self.kind == MomentumKind.GAUSSIAN:
            defs.check_positive("central momentum", self.p0)
            defs.check_positive("momentum spread", self.delta_p)
            negative: Final = float(special.ndtr(-self.p0 / self.delta_p))
            if negative >= NEGATIVE_WEIGHT_CAP:
                raise defs.DomainError(
                    f"The momentum packet has a weight of {negative:.3g} at negative momenta",
                )
            return

        if len(self.ps) != len(self.weights) or len(self.ps) < 2:
            raise defs.DomainError("A tabulated distribution needs at least two (p, w) samples")
        ps: Final = np.asarray(self.ps)
        weights: Final = np.asarray(self.weights)
        if not (np.all(np.isfinite(ps)) and np.all(np.isfinite(weights))):
            raise defs.DomainError("Non-finite tabulated momentum samples")
        if ps[0] <= 0 or np.any(np.diff(ps) <= 0):
            raise defs.DomainError("The tabulated momenta must be positive and increasing")
        if np.any(weights < 0):
            raise defs.DomainError("The tabulated momentum density has negative values")
        norm: Final = float(integrate.trapezoid(weights, ps))
        if abs(norm - 1) > NORMALIZATION_TOLERANCE:
            raise defs.DomainError(f"The tabulated momentum density integrates to {norm!r}")

    @classmethod
    def gaussian(cls, p0: float, delta_p: float) -> MomentumDistribution:
        """Build a Gaussian packet around p0."""
        return cls(MomentumKind.GAUSSIAN, p0=p0, delta_p=delta_p)

    @classmethod
    def tabulated(
        cls,
        ps: typing.Iterable[float],
        weights: typing.Iterable[float],
        *,
        normalize: bool = False,
    ) -> MomentumDistribution:
        """Build a piecewise-linear density from samples, rescaling it if requested."""
        p_arr: Final = np.asarray(list(ps), dtype=np.float64)
        w_arr = np.asarray(list(weights), dtype=np.float64)
        if normalize:
            norm = float(integrate.trapezoid(w_arr, p_arr)) if p_arr.size > 1 else 0.0
            if not norm > 0:
                raise defs.DomainError("Cannot normalize a momentum density without weight")
            w_arr = w_arr / norm
        return cls(
            MomentumKind.TABULATED,
            ps=tuple(float(p) for p in p_arr),
            weights=tuple(float(w) for w in w_arr),
        )

    @property
    def central_momentum(self) -> float:
        """The momentum the transmission model is tuned at."""
        if self.kind == MomentumKind.GAUSSIAN:
            return self.p0
        ps: Final = np.asarray(self.ps)
        return float(integrate.trapezoid(ps * np.asarray(self.weights), ps))

    def density(self, p: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Evaluate |psi_0(p)|^2."""
        mom: Final = np.asarray(p, dtype=np.float64)
        if self.kind == MomentumKind.GAUSSIAN:
            z = (mom - self.p0) / self.delta_p
            return np.exp(-0.5 * z * z) / (math.sqrt(2 * math.pi) * self.delta_p)
        return np.interp(mom, self.ps, self.weights, left=0.0, right=0.0)

    def truncated_mass(self, *, config: defs.Config = defs.DEFAULT_CONFIG) -> float:
        """Return the probability inside `support`; one for tabulated densities."""
        if self.kind == MomentumKind.TABULATED:
            return 1.0
        lower, upper = self.support(config=config)
        return float(
            special.ndtr((upper - self.p0) / self.delta_p)
            - special.ndtr((lower - self.p0) / self.delta_p),
        )

    def support(self, *, config: defs.Config = defs.DEFAULT_CONFIG) -> tuple[float, float]:
        """Return the momentum interval the averages integrate over."""
        if self.kind == MomentumKind.TABULATED:
            return self.ps[0], self.ps[-1]
        reach: Final = config.packet_cutoff_sigmas * self.delta_p
        return max(self.p0 - reach, self.p0 * 1e-12), self.p0 + reach


class Quadrature(NamedTuple):
    """The value of an integral with its error estimate."""

    value: float
    """The integral."""

    error: float
    """The absolute error estimated by the quadrature rule."""


@dataclasses.dataclass(frozen=True)
class TransmissionModel:
    """T(p) and tau(p) of a barrier for the species' mean mass."""

    barrier: BarrierProfile | None
    """The barrier, or None for free propagation."""

    species: ClockSpecies
    """The clock species."""

    config: defs.Config
    """The numerical settings."""

    slabs: int
    """The slab count used for non-rectangular barriers."""

    def _scaled(self, p: float) -> tuple[float, float]:
        """Return the scaled point of a rectangular barrier at momentum p."""
        assert self.barrier is not None  # noqa: S101  # only called with a barrier
        return (
            p * p / (2 * self.species.mean_mass * self.barrier.peak_height),
            self.barrier.opacity(self.species.mean_mass),
        )

    @functools.cached_property
    def decomposition(self) -> transfer_matrix.SlabDecomposition:
        """The fixed slab decomposition of a non-rectangular barrier."""
        assert self.barrier is not None  # noqa: S101  # only called with a barrier
        return transfer_matrix.decompose(self.barrier, self.slabs, config=self.config)

    def transmission(self, p: float) -> float:
        """Return the mean transmission at momentum p."""
        if self.barrier is None:
            return 1.0
        if self.barrier.shape == BarrierShape.RECTANGULAR:
            e_bar, v_bar = self._scaled(p)
            return scatter_rect.mean_transmission(e_bar, v_bar, config=self.config)
        mass: Final = self.species.mean_mass
        return transfer_matrix.amplitude(
            self.decomposition,
            p * p / (2 * mass),
            mass,
            config=self.config,
        ).transmission

    def tunneling_time(self, p: float) -> float:
        """Return the eigenstate tunneling time at momentum p."""
        if self.barrier is None:
            return 0.0
        if self.barrier.shape == BarrierShape.RECTANGULAR:
            e_bar, v_bar = self._scaled(p)
            return scatter_rect.tunneling_time(e_bar, v_bar, self.species, config=self.config)
        return transfer_matrix.decomposed_tunneling_time(
            self.decomposition,
            p,
            self.species,
            config=self.config,
        )

    def breakpoints(self, lower: float, upper: float) -> list[float]:
        """Return the momenta of the barrier top and the resonances inside [lower, upper]."""
        if self.barrier is None or self.barrier.shape != BarrierShape.RECTANGULAR:
            return []
        p_top: Final = math.sqrt(2 * self.species.mean_mass * self.barrier.peak_height)
        e_max: Final = (upper / p_top) ** 2
        v_bar: Final = self.barrier.opacity(self.species.mean_mass)
        count: Final = int(v_bar * math.sqrt(max(e_max - 1, 0.0)) / math.pi) + 1
        energies: Final = [1.0, *scatter_rect.resonance_energies(v_bar, count)]
        return [p_top * math.sqrt(e) for e in energies if lower < p_top * math.sqrt(e) < upper]


def transmission_model(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> TransmissionModel:
    """Set up T(p) and tau(p), fixing the slab count at the central momentum."""
    slabs = 1
    if barrier is not None and barrier.shape != BarrierShape.RECTANGULAR:
        p_c: Final = dist.central_momentum
        mass: Final = species.mean_mass
        slabs = transfer_matrix.adaptive_amplitude(
            barrier,
            p_c * p_c / (2 * mass),
            mass,
            config=config,
        ).slabs
    return TransmissionModel(barrier=barrier, species=species, config=config, slabs=slabs)


def packet_quadrature(
    dist: MomentumDistribution,
    model: TransmissionModel,
    weight: Callable[[float], float],
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> Quadrature:
    """Integrate T(p) |psi_0(p)|^2 weight(p) over the distribution's support.

    A truncated Gaussian density is renormalized to the weight inside the support.
    """
    lower, upper = dist.support(config=config)
    points: Final = sorted(
        {*model.breakpoints(lower, upper), *(p for p in dist.ps if lower < p < upper)},
    )

    def integrand(p: float) -> float:
        """The transmission-weighted density."""
        return model.transmission(p) * float(dist.density(p)) * weight(p)

    value, error = integrate.quad(
        integrand,
        lower,
        upper,
        points=points or None,
        epsabs=0.0,
        epsrel=config.quad_rel_tol,
        limit=max(config.quad_limit, 2 * len(points) + 2),
    )
    mass: Final = dist.truncated_mass(config=config)
    logging.debug(
        "Packet quadrature over [%(lower).6g, %(upper).6g]: %(value).12g +/- %(error).3g, "
        "truncated mass %(mass).15g",
        {"lower": lower, "upper": upper, "value": value, "error": error, "mass": mass},
    )
    return Quadrature(value=value / mass, error=error / mass)


def _unit(_: float) -> float:
    """The constant weight."""
    return 1.0


def _momentum(p: float) -> float:
    """The momentum itself as a weight."""
    return p


def _transmitted(
    dist: MomentumDistribution,
    model: TransmissionModel,
    config: defs.Config,
) -> float:
    """Return N_T, refusing to average over a vanishing transmitted fraction."""
    n_t: Final = packet_quadrature(dist, model, _unit, config=config).value
    if n_t < DEGENERATE_TRANSMISSION:
        raise defs.DegenerateTransmissionError(
            f"Only {n_t:.3g} of the packet is transmitted",
        )
    return n_t


def transmitted_number(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return N_T, the transmitted fraction of the packet."""
    model: Final = transmission_model(dist, barrier, species, config=config)
    return packet_quadrature(dist, model, _unit, config=config).value


def packet_time_dilation(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    t: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the time dilation of the transmitted packet after a Ramsey time t."""
    if not (math.isfinite(t) and t >= 0):
        raise defs.DomainError(f"The Ramsey time must be finite and non-negative, got {t!r}")
    model: Final = transmission_model(dist, barrier, species, config=config)
    n_t: Final = _transmitted(dist, model, config)
    mc: Final = species.mean_mass * CONSTANTS.c

    def beta_squared(p: float) -> float:
        """(p / m c)^2."""
        return (p / mc) ** 2

    moment: Final = packet_quadrature(dist, model, beta_squared, config=config).value
    return t * moment / (2 * n_t)


def packet_tunneling_time(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the transmission-weighted average of the eigenstate tunneling time."""
    model: Final = transmission_model(dist, barrier, species, config=config)
    n_t: Final = _transmitted(dist, model, config)
    return packet_quadrature(dist, model, model.tunneling_time, config=config).value / n_t


def filtered_mean_momentum(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the mean momentum of the transmitted part of the packet."""
    model: Final = transmission_model(dist, barrier, species, config=config)
    n_t: Final = _transmitted(dist, model, config)
    return packet_quadrature(dist, model, _momentum, config=config).value / n_t


def flatness_check(
    dist: MomentumDistribution,
    barrier: BarrierProfile | None,
    species: ClockSpecies,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return |dT/dp| delta_p at the packet center; small values validate the cancellation."""
    if dist.kind != MomentumKind.GAUSSIAN:
        raise defs.DomainError("The flatness check needs a Gaussian momentum packet")
    model: Final = transmission_model(dist, barrier, species, config=config)
    slope: Final = numerics.central_difference(
        model.transmission,
        dist.p0,
        config.fd_step * dist.p0,
    )
    return abs(slope) * dist.delta_p
