# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Assemble the working-point, budget and self-check reports and render them."""

from __future__ import annotations

import functools
import json
import logging
import math
import pathlib
import typing
from typing import NamedTuple

import jinja2

from . import clock
from . import defs
from . import design
from .units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Any, Final

    from .barrier import BarrierProfile
    from .clock import ClockSpecies
    from .clock import PerturbationSet
    from .clock import PhaseBudget
    from .config import BudgetSection
    from .design import BoostedBudget
    from .design import RunBudget
    from .design import WorkingPoint
    from .validate import CheckResult


TEMPLATES_DIR: Final = pathlib.Path(__file__).parent / "templates"


class BudgetReport(NamedTuple):
    """The full phase budget of a differential measurement and its run budgets."""

    species: ClockSpecies
    point: WorkingPoint
    barrier_height: float
    tunnel: PhaseBudget
    reference: PhaseBudget
    differential: float
    plain: RunBudget
    boosted: BoostedBudget | None
    larmor_ratio: float | None


def sci(value: float) -> str:
    """Format a number with six significant digits."""
    return f"{value:.6g}"


@functools.lru_cache(maxsize=1)
def jinja2_env() -> jinja2.Environment:
    """Prepare the Jinja2 environment for the bundled report templates."""
    env: Final = jinja2.Environment(
        autoescape=False,  # noqa: S701
        loader=jinja2.FileSystemLoader(TEMPLATES_DIR),
        undefined=jinja2.StrictUndefined,
    )
    env.filters["sci"] = sci
    return env


def render(template: str, **jvars: Any) -> str:  # noqa: ANN401  # template variables
    """Render one of the bundled templates."""
    logging.debug("Rendering the %(template)s template", {"template": template})
    try:
        return jinja2_env().get_template(template).render(**jvars)
    except jinja2.TemplateError as err:
        raise defs.TunnelClockError(f"Could not render the {template} template: {err}") from err


def as_json(obj: object) -> str:
    """Represent a report as a JSON document."""
    return json.dumps(defs.jsonify(obj), sort_keys=True, indent=2)


def render_working_point(point: WorkingPoint, species: ClockSpecies) -> str:
    """Render a working point as text."""
    return render("working_point.txt.j2", point=point, species=species)


def budget_report(
    section: BudgetSection,
    species: ClockSpecies,
    perturb: PerturbationSet = clock.NO_PERTURBATION,
    *,
    split_barrier: BarrierProfile | None = None,
    config: defs.Config = defs.DEFAULT_CONFIG,
) -> BudgetReport:
    """Compute the phase budget of both arms and the runs needed to resolve tau dw.

    The barrier height follows from the clock momentum hbar k and the scaled energy;
    a configured barrier only contributes its relative height split dV / V0.
    """
    defs.check_positive("wavenumber", section.wavenumber)
    p: Final = CONSTANTS.hbar * section.wavenumber
    barrier: Final = design.yb_working_barrier(
        section.e_bar,
        section.v_bar,
        section.wavenumber,
        species,
    )
    point: Final = design.working_point(section.e_bar, section.v_bar, species, config=config)
    tunnel: Final = clock.phase_budget(
        section.e_bar,
        section.v_bar,
        p,
        section.lab_time,
        species,
        perturb,
        barrier=split_barrier,
        config=config,
    )
    reference: Final = clock.reference_budget(p, section.lab_time, species, perturb)

    boosted: BoostedBudget | None = None
    if section.boost_shift_hz != 0:
        boosted = design.boosted_budget(
            point,
            species,
            CONSTANTS.hbar * section.boost_shift_hz,
            v_bar_dim=barrier.peak_height,
            atoms_per_run=section.atoms,
            contrast=section.contrast,
        )

    larmor: float | None = None
    if section.larmor_height_j is not None and section.larmor_freq_hz is not None:
        larmor = clock.larmor_ratio(
            species,
            section.larmor_height_j,
            2 * math.pi * section.larmor_freq_hz,
        )
    elif section.larmor_height_j is not None or section.larmor_freq_hz is not None:
        raise defs.DomainError("The Larmor ratio needs both larmor_height_j and larmor_freq_hz")

    return BudgetReport(
        species=species,
        point=point,
        barrier_height=barrier.peak_height,
        tunnel=tunnel,
        reference=reference,
        differential=design.differential_phase(tunnel, reference),
        plain=design.runs_to_resolve(
            point.tau * species.clock_frequency,
            section.atoms,
            contrast=section.contrast,
        ),
        boosted=boosted,
        larmor_ratio=larmor,
    )


def render_budget(report: BudgetReport) -> str:
    """Render a budget report as text."""
    return render("budget.txt.j2", report=report)


def render_checks(results: list[CheckResult], species: ClockSpecies) -> str:
    """Render the self-check results as a pass/fail table."""
    return render("validate.txt.j2", results=results, species=species)
