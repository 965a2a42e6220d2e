# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Finite differences and a derivative-free maximizer for smooth scalar functions."""

from __future__ import annotations

import logging
import math
import typing
from typing import NamedTuple

from . import defs


if typing.TYPE_CHECKING:
    from typing import Callable, Final


INV_PHI: Final = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARED: Final = (3 - math.sqrt(5)) / 2

RIDDERS_SHRINK: Final = 1.4
RIDDERS_TABLEAU: Final = 10
RIDDERS_SAFE: Final = 2.0


class Derivative(NamedTuple):
    """A derivative estimate along with its error estimate."""

    value: float
    """The estimated derivative."""

    error: float
    """The estimated absolute error."""


class Extremum(NamedTuple):
    """The location and value of a maximum."""

    x: float
    """The abscissa of the maximum."""

    value: float
    """The function value at the maximum."""


def central_difference(func: Callable[[float], float], x: float, step: float) -> float:
    """Approximate f'(x) by the symmetric difference quotient."""
    if step <= 0:
        raise defs.DomainError(f"The difference step must be positive, got {step!r}")
    return (func(x + step) - func(x - step)) / (2 * step)


def ridders(func: Callable[[float], float], x: float, step: float = 1e-3) -> Derivative:
    """Differentiate by Richardson extrapolation of shrinking central differences.

    The step need not be small; it should be an increment over which `func`
    changes noticeably. The tableau is abandoned as soon as a higher order
    gets worse than the best estimate by a factor of two.
    """
    if step <= 0:
        raise defs.DomainError(f"The initial step must be positive, got {step!r}")
    shrink2: Final = RIDDERS_SHRINK * RIDDERS_SHRINK
    tableau: dict[tuple[int, int], float] = {}

    h = step
    tableau[0, 0] = central_difference(func, x, h)
    best = tableau[0, 0]
    error = math.inf
    for col in range(1, RIDDERS_TABLEAU):
        h /= RIDDERS_SHRINK
        tableau[0, col] = central_difference(func, x, h)
        fac = shrink2
        for row in range(1, col + 1):
            tableau[row, col] = (tableau[row - 1, col] * fac - tableau[row - 1, col - 1]) / (
                fac - 1
            )
            fac *= shrink2
            trial = max(
                abs(tableau[row, col] - tableau[row - 1, col]),
                abs(tableau[row, col] - tableau[row - 1, col - 1]),
            )
            if trial <= error:
                error = trial
                best = tableau[row, col]

        if abs(tableau[col, col] - tableau[col - 1, col - 1]) >= RIDDERS_SAFE * error:
            break

    return Derivative(value=best, error=error)


def golden_section_max(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    *,
    tol: float,
) -> Extremum:
    """Locate the maximum of a unimodal function on [lower, upper] to within `tol`."""
    lower, upper = min(lower, upper), max(lower, upper)
    width = upper - lower
    if width <= tol:
        mid: Final = (lower + upper) / 2
        return Extremum(x=mid, value=func(mid))

    steps: Final = math.ceil(math.log(tol / width) / math.log(INV_PHI))
    left = lower + INV_PHI_SQUARED * width
    right = lower + INV_PHI * width
    f_left = func(left)
    f_right = func(right)

    for _ in range(steps - 1):
        width *= INV_PHI
        if f_left > f_right:
            upper = right
            right, f_right = left, f_left
            left = lower + INV_PHI_SQUARED * width
            f_left = func(left)
        else:
            lower = left
            left, f_left = right, f_right
            right = lower + INV_PHI * width
            f_right = func(right)

    logging.debug(
        "Golden section: bracket [%(lower).12g, %(upper).12g] after %(steps)d steps",
        {"lower": lower, "upper": upper, "steps": steps},
    )
    if f_left > f_right:
        return Extremum(x=left, value=f_left)
    return Extremum(x=right, value=f_right)
