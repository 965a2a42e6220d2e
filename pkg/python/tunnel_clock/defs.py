# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Common definitions for the tunneling-clock simulation library."""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import TYPE_CHECKING


if TYPE_CHECKING:
    from typing import Any, Final


VERSION: Final = "0.1.0"
FORMAT_VERSION: Final = (0, 1)

PERTURBATION_CAP: Final = 1e-3
"""The largest relative perturbation that the first-order phase budget accepts."""

CLOCK_RATIO_CAP: Final = 1e-6
"""The largest clock-to-mean frequency ratio a species may have."""


class BarrierShape(str, enum.Enum):
    """The functional form of a barrier profile."""

    RECTANGULAR = "rectangular"
    """A constant height V0 over a width a."""

    GAUSSIAN = "gaussian"
    """V0 exp(-x^2 / 2 sigma^2)."""

    TABULATED = "tabulated"
    """Piecewise-linear interpolation between (x, V) samples."""


class TunnelClockError(Exception):
    """Base class for errors that occurred during a tunneling-clock computation."""


class DomainError(TunnelClockError):
    """A value lies outside the domain of the requested computation."""


class ConfigError(TunnelClockError):
    """An invalid or unreadable run configuration file."""


class DegenerateTransmissionError(TunnelClockError):
    """The transmitted fraction of a wave packet is too small to average over."""


class ConvergenceError(TunnelClockError):
    """The slab refinement did not converge within the allowed number of slabs."""

    count: int
    """The number of slabs used in the last refinement step."""

    previous: complex
    """The transmission amplitude obtained at half the final slab count."""

    last: complex
    """The transmission amplitude obtained at the final slab count."""

    def __init__(self, count: int, previous: complex, last: complex) -> None:
        """Store the final slab count and the last two iterates."""
        super().__init__()
        self.count = count
        self.previous = previous
        self.last = last

    def __str__(self) -> str:
        """Return a human-readable representation of the error."""
        return (
            f"No convergence after {self.count} slabs: "
            f"t changed from {self.previous!r} to {self.last!r}"
        )


class NumericalError(TunnelClockError):
    """A computation produced a value that cannot be emitted."""

    point: dict[str, float]
    """The grid point that produced the value."""

    msg: str
    """The description of the problem."""

    def __init__(self, point: dict[str, float], msg: str) -> None:
        """Store the offending grid point and the error message."""
        super().__init__()
        self.point = point
        self.msg = msg

    def __str__(self) -> str:
        """Return a human-readable representation of the error."""
        where: Final = ", ".join(f"{name}={value!r}" for name, value in self.point.items())
        return f"{self.msg} at {where}"


@dataclasses.dataclass(frozen=True)
class Config:
    """Numerical settings shared by the solvers."""

    guard_band: float = 1e-7
    """Half-width of the band around E = V0 where series limits replace closed forms."""

    gaussian_cutoff: float = 1e-8
    """The relative height V(x_c)/V0 at which Gaussian barriers are truncated."""

    slab_start: int = 64
    """The initial slab count of the adaptive transfer-matrix refinement."""

    slab_max: int = 2**20
    """The largest slab count the adaptive refinement may try."""

    tm_rel_tol: float = 1e-8
    """The change in |t| and arg(t) below which the slab refinement stops."""

    slab_edge_guard: float = 1e-12
    """The relative distance |E - V_slab|/V0 below which the energy is nudged."""

    fd_step: float = 1e-6
    """The relative step of the central finite differences."""

    quad_abs_tol: float = 1e-10
    """The absolute tolerance of the opacity quadrature, relative to the peak height."""

    quad_rel_tol: float = 1e-8
    """The relative tolerance of the wave-packet momentum quadrature."""

    quad_limit: int = 200
    """The maximum number of subintervals of an adaptive quadrature."""

    packet_cutoff_sigmas: float = 8.0
    """The number of standard deviations a Gaussian momentum packet is truncated at."""

    scan_points: int = 512
    """The number of points of the coarse logarithmic scan of the optimizer."""

    scan_min: float = 1e-4
    """The lower end of the scaled energy range searched by the optimizer."""

    scan_max: float = 10.0
    """The upper end of the scaled energy range searched by the optimizer."""

    golden_tol: float = 1e-8
    """The bracket width at which the golden-section search stops."""

    threads: int = 1
    """The number of worker threads used for grid scans."""

    verbose: bool = False
    """Verbose operation; display diagnostic output."""

    def __post_init__(self) -> None:
        """Make sure the settings make sense."""
        if not 0 < self.tm_rel_tol <= 1e-2:
            raise DomainError(
                f"The slab refinement tolerance must lie in (0, 1e-2], got {self.tm_rel_tol}",
            )
        if self.slab_start < 1 or self.slab_max < self.slab_start:
            raise DomainError(
                f"Invalid slab counts: start {self.slab_start}, max {self.slab_max}",
            )
        if self.threads < 1:
            raise DomainError(f"At least one worker thread is needed, got {self.threads}")
        for name in ("guard_band", "gaussian_cutoff", "fd_step", "quad_rel_tol", "golden_tol"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise DomainError(f"The {name} setting must lie in (0, 1), got {value}")


DEFAULT_CONFIG: Final = Config()


def check_positive(name: str, value: float) -> float:
    """Make sure a value is a finite positive number, return it."""
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"The {name} must be a finite positive number, got {value!r}")
    return value


def jsonify(obj: Any) -> Any:  # noqa: ANN401  # this needs to operate on, well, anything
    """Return a more readable representation of an object."""
    if isinstance(obj, enum.Enum):
        return obj.value

    if hasattr(obj, "_asdict"):
        return {name: jsonify(value) for name, value in obj._asdict().items()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            field.name: jsonify(getattr(obj, field.name)) for field in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(name): jsonify(value) for name, value in obj.items()}

    if isinstance(obj, (list, tuple)):
        return [jsonify(item) for item in obj]

    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}

    if hasattr(obj, "item") and callable(obj.item):
        return jsonify(obj.item())

    return obj
