# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Transmission through arbitrary barriers by products of 2x2 transfer matrices.

The barrier is cut into constant-height slabs sampled at their midpoints.
Plane-wave coefficients (A, B) of A exp(iKx) + B exp(-iKx), referenced at
each slab's left edge, are carried across an interface by

    I = 1/2 [[1 + rho, 1 - rho], [1 - rho, 1 + rho]],   rho = K_left / K_right

and across a slab of width L by P = diag(exp(iKL), exp(-iKL)). Each P has
its growing factor exp(|Im K| L) pulled out into a log-scale accumulator, and
every partial product is normalized, so opaque barriers never overflow.
"""

from __future__ import annotations

import cmath
import dataclasses
import logging
import math
import typing
from typing import NamedTuple

import numpy as np

from . import defs
from .barrier import BarrierShape
from .scatter_rect import ScatteringSolution
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Final

    import numpy.typing as npt

    from .barrier import BarrierProfile
    from .clock import ClockSpecies


_IDENTITY: Final = np.eye(2, dtype=np.complex128)


@dataclasses.dataclass(frozen=True)
class SlabDecomposition:
    """A barrier profile approximated by constant-height slabs."""

    boundaries: npt.NDArray[np.float64]
    """The slab edges in m, strictly increasing."""

    heights: npt.NDArray[np.float64]
    """The constant potential of each slab in J."""

    def __post_init__(self) -> None:
        """Validate and freeze the arrays."""
        if self.heights.ndim != 1 or self.heights.size < 1:
            raise defs.DomainError("A slab decomposition needs at least one slab")
        if self.boundaries.shape != (self.heights.size + 1,):
            raise defs.DomainError("A slab decomposition needs one more boundary than slabs")
        if np.any(np.diff(self.boundaries) <= 0):
            raise defs.DomainError("The slab boundaries must be strictly increasing")
        if np.any(self.heights < 0) or not np.all(np.isfinite(self.heights)):
            raise defs.DomainError("The slab heights must be finite and non-negative")
        self.boundaries.flags.writeable = False
        self.heights.flags.writeable = False

    @property
    def count(self) -> int:
        """The number of slabs."""
        return int(self.heights.size)

    @property
    def widths(self) -> npt.NDArray[np.float64]:
        """The width of each slab in m."""
        return np.diff(self.boundaries)

    @property
    def extent(self) -> float:
        """The total width covered by the slabs in m."""
        return float(self.boundaries[-1] - self.boundaries[0])


class TransferMatrix(NamedTuple):
    """The product matrix mapping left-side to right-side plane-wave coefficients.

    The stored entries are scaled: the actual matrix is exp(log_scale) times them.
    """

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    log_scale: float
    """The natural logarithm of the factor pulled out of the product."""

    def determinant(self) -> complex:
        """Return the determinant of the unscaled matrix."""
        return (self.m11 * self.m22 - self.m12 * self.m21) * math.exp(2 * self.log_scale)


class ConvergedAmplitude(NamedTuple):
    """The result of the adaptive slab refinement."""

    solution: ScatteringSolution
    """The scattering solution at the final slab count."""

    slabs: int
    """The number of slabs the solution was computed with."""


def decompose(
    profile: BarrierProfile,
    n_slabs: int,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> SlabDecomposition:
    """Cut the (truncated) mean profile into midpoint-sampled slabs.

    Rectangular profiles always yield their single exact slab.
    """
    if n_slabs < 1:
        raise defs.DomainError(f"At least one slab is needed, got {n_slabs}")
    if profile.shape == BarrierShape.RECTANGULAR:
        return SlabDecomposition(
            boundaries=np.array([0.0, profile.width]),
            heights=np.array([profile.height]),
        )

    lower, upper = profile.support(config=config)
    edges: Final = np.linspace(lower, upper, n_slabs + 1)
    return SlabDecomposition(
        boundaries=edges,
        heights=profile.potential(0.5 * (edges[:-1] + edges[1:])),
    )


def _wavenumbers(
    decomp: SlabDecomposition,
    energy: float,
    mass: float,
    config: defs.Config,
) -> npt.NDArray[np.complex128]:
    """Return the complex wavenumber inside each slab."""
    excess: Final = energy - decomp.heights
    reference: Final = float(decomp.heights.max())
    if reference > 0:
        guard = config.slab_edge_guard * reference
        excess[np.abs(excess) < guard] = guard
    return np.sqrt(2 * mass * excess.astype(np.complex128)) / CONSTANTS.hbar


def _interfaces(
    left: npt.NDArray[np.complex128],
    right: npt.NDArray[np.complex128],
) -> npt.NDArray[np.complex128]:
    """Return the interface matrices for a sequence of wavenumber steps."""
    rho: Final = left / right
    plus: Final = 0.5 * (1 + rho)
    minus: Final = 0.5 * (1 - rho)
    mats: Final = np.empty((rho.size, 2, 2), dtype=np.complex128)
    mats[:, 0, 0] = plus
    mats[:, 0, 1] = minus
    mats[:, 1, 0] = minus
    mats[:, 1, 1] = plus
    return mats


def _tree_product(
    mats: npt.NDArray[np.complex128],
) -> tuple[npt.NDArray[np.complex128], float]:
    """Multiply mats[-1] @ ... @ mats[0] pairwise, normalizing every partial product."""
    log_scale = 0.0
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            mats = np.concatenate([mats, _IDENTITY[np.newaxis]])
        mats = np.matmul(mats[1::2], mats[0::2])
        norms = np.abs(mats).max(axis=(1, 2))
        mats /= norms[:, np.newaxis, np.newaxis]
        log_scale += float(np.log(norms).sum())
    return mats[0], log_scale


def transfer_matrix(
    decomp: SlabDecomposition,
    energy: float,
    mass: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> TransferMatrix:
    """Build the scaled product of the interface and propagation matrices."""
    defs.check_positive("energy", energy)
    defs.check_positive("mass", mass)
    k_free: Final = complex(math.sqrt(2 * mass * energy) / CONSTANTS.hbar)
    inside: Final = _wavenumbers(decomp, energy, mass, config)
    outside: Final = np.array([k_free])

    entry: Final = _interfaces(outside, inside[:1])[0]
    exits: Final = _interfaces(inside, np.concatenate([inside[1:], outside]))

    phase: Final = 1j * inside * decomp.widths
    growth: Final = np.abs(phase.real)
    props: Final = np.zeros((decomp.count, 2, 2), dtype=np.complex128)
    props[:, 0, 0] = np.exp(phase - growth)
    props[:, 1, 1] = np.exp(-phase - growth)

    product, log_scale = _tree_product(np.matmul(exits, props))
    total: Final = product @ entry
    norm: Final = float(np.abs(total).max())
    total /= norm
    return TransferMatrix(
        m11=complex(total[0, 0]),
        m12=complex(total[0, 1]),
        m21=complex(total[1, 0]),
        m22=complex(total[1, 1]),
        log_scale=log_scale + float(growth.sum()) + math.log(norm),
    )


def amplitude(
    decomp: SlabDecomposition,
    energy: float,
    mass: float,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> ScatteringSolution:
    """Return the transmission and reflection amplitudes of a slab decomposition.

    The amplitudes use the same convention as the closed rectangular forms:
    t = exp(-i k extent) / M22 and r = -M21 / M22.
    """
    mat: Final = transfer_matrix(decomp, energy, mass, config=config)
    k_free: Final = math.sqrt(2 * mass * energy) / CONSTANTS.hbar
    free_phase: Final = -k_free * decomp.extent
    magnitude: Final = math.exp(-mat.log_scale) / abs(mat.m22)
    phase: Final = math.remainder(free_phase - cmath.phase(mat.m22), 2 * math.pi)
    peak: Final = int(np.argmax(decomp.heights))
    return ScatteringSolution(
        t=cmath.rect(magnitude, phase),
        r=-mat.m21 / mat.m22,
        transmission=magnitude * magnitude,
        phase=phase,
        kappa0=k_free,
        kappa1=complex(_wavenumbers(decomp, energy, mass, config)[peak]),
    )


def adaptive_amplitude(
    profile: BarrierProfile,
    energy: float,
    mass: float,
    rel_tol: float | None = None,
    *,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> ConvergedAmplitude:
    """Double the slab count until |t| and arg(t) settle to within `rel_tol`."""
    tol: Final = config.tm_rel_tol if rel_tol is None else rel_tol
    if not 0 < tol <= 1e-2:
        raise defs.DomainError(f"The refinement tolerance must lie in (0, 1e-2], got {tol!r}")

    if profile.shape == BarrierShape.RECTANGULAR:
        exact: Final = amplitude(decompose(profile, 1), energy, mass, config=config)
        return ConvergedAmplitude(solution=exact, slabs=1)

    count = config.slab_start
    previous = amplitude(decompose(profile, count, config=config), energy, mass, config=config)
    while True:
        count *= 2
        current = amplitude(decompose(profile, count, config=config), energy, mass, config=config)
        if previous.transmission > 0:
            d_mag = abs(math.sqrt(current.transmission / previous.transmission) - 1)
        else:
            d_mag = 0.0 if current.transmission == 0 else math.inf
        d_arg = abs(math.remainder(current.phase - previous.phase, 2 * math.pi))
        logging.debug(
            "%(count)d slabs: |t| change %(d_mag).3g, arg(t) change %(d_arg).3g",
            {"count": count, "d_mag": d_mag, "d_arg": d_arg},
        )
        if d_mag < tol and d_arg < tol:
            return ConvergedAmplitude(solution=current, slabs=count)
        if count * 2 > config.slab_max:
            raise defs.ConvergenceError(count, previous.t, current.t)
        previous = current


def decomposed_tunneling_time(
    decomp: SlabDecomposition,
    momentum: float,
    species: ClockSpecies,
    *,
    epsilon: float = 1e-6,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return tau from the phase difference of t for the masses m (1 +/- epsilon / 2).

    Both masses see the same slabs and the same momentum.
    """
    defs.check_positive("mass step", epsilon)
    p_squared: Final = momentum * momentum
    defs.check_positive("momentum", p_squared)

    def transmitted(sign: int) -> complex:
        """Return t for one state's mass at the common momentum."""
        mass = species.mean_mass * (1 + sign * epsilon / 2)
        return amplitude(decomp, p_squared / (2 * mass), mass, config=config).t

    delta: Final = cmath.phase(transmitted(1) / transmitted(-1))
    return abs(delta / epsilon) / species.mean_frequency


def gaussian_tunneling_time(
    profile: BarrierProfile,
    e_bar: float,
    species: ClockSpecies,
    *,
    epsilon: float = 1e-6,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> float:
    """Return the tunneling time through a smooth barrier at a scaled energy.

    The slab count is chosen adaptively at the mean mass and then reused for
    both states.
    """
    defs.check_positive("scaled kinetic energy", e_bar)
    energy: Final = e_bar * profile.peak_height
    slabs: Final = adaptive_amplitude(profile, energy, species.mean_mass, config=config).slabs
    return decomposed_tunneling_time(
        decompose(profile, slabs, config=config),
        math.sqrt(2 * species.mean_mass * energy),
        species,
        epsilon=epsilon,
        config=config,
    )
