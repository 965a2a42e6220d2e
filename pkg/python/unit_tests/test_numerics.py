# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Test the finite differences and the golden-section maximizer."""

from __future__ import annotations

import math

import pytest

from tunnel_clock import defs
from tunnel_clock import numerics


def test_central_difference() -> None:
    """The symmetric quotient is exact for quadratics."""
    assert numerics.central_difference(lambda x: 3 * x * x - x, 2.0, 0.5) == pytest.approx(11.0)
    assert numerics.central_difference(math.sin, 0.3, 1e-5) == pytest.approx(
        math.cos(0.3),
        rel=1e-9,
    )


@pytest.mark.parametrize("step", [0.0, -1e-3])
def test_bad_step(step: float) -> None:
    """Refuse non-positive steps."""
    with pytest.raises(defs.DomainError):
        numerics.central_difference(math.sin, 0.0, step)
    with pytest.raises(defs.DomainError):
        numerics.ridders(math.sin, 0.0, step)


def test_ridders() -> None:
    """A coarse initial step still yields an accurate derivative."""
    res = numerics.ridders(math.exp, 1.0, 0.5)
    assert res.value == pytest.approx(math.e, rel=1e-10)
    assert res.error < 1e-8

    res = numerics.ridders(lambda x: math.atan(10 * x), 0.1, 0.05)
    assert res.value == pytest.approx(5.0, rel=1e-8)


def test_golden_section_max() -> None:
    """Locate the maximum of unimodal functions."""
    found = numerics.golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 1.0, tol=1e-9)
    assert found.x == pytest.approx(0.3, abs=1e-8)
    assert found.value == pytest.approx(0.0, abs=1e-15)

    # The bounds may come in either order.
    found = numerics.golden_section_max(math.sin, 3.0, 0.0, tol=1e-9)
    assert found.x == pytest.approx(math.pi / 2, abs=1e-7)
    assert found.value == pytest.approx(1.0, abs=1e-12)


def test_golden_section_narrow() -> None:
    """A bracket narrower than the tolerance returns its midpoint."""
    found = numerics.golden_section_max(lambda x: x, 1.0, 1.0 + 1e-12, tol=1e-9)
    assert found.x == pytest.approx(1.0, abs=1e-11)
