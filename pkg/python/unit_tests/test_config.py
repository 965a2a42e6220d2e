# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Test the parsing and the resolution of run configuration files."""

from __future__ import annotations

import math
import pathlib
import typing

import pytest

from tunnel_clock import config
from tunnel_clock import defs
from tunnel_clock import presets
from tunnel_clock import scan
from tunnel_clock.units import CONSTANTS


if typing.TYPE_CHECKING:
    from typing import Final


CONFIGS_DIR: Final = pathlib.Path(__file__).parent.parent.parent / "data" / "configs"

HEADER: Final = """
[format.version]
major = 0
minor = 1
"""

INVALID_CONFIGS: Final = [
    ("no format", '[species]\npreset = "yb174"\n'),
    ("bad major", '[format.version]\nmajor = 1\nminor = 0\n[species]\npreset = "yb174"\n'),
    ("not TOML", "[format.version\n"),
    ("no species", HEADER),
    ("extra section", HEADER + '[species]\npreset = "yb174"\n[colour]\nname = "red"\n'),
    ("extra key", HEADER + '[species]\npreset = "yb174"\nspin = 2\n'),
    ("wrong type", HEADER + '[species]\npreset = "yb174"\n[grid]\ne_count = "many"\n'),
]


def _parse(body: str) -> config.RunConfig:
    """Parse a config with a valid format header."""
    return config.parse_config(HEADER + body, "test")


def test_minimal() -> None:
    """A preset species is all that is needed."""
    run: Final = _parse('[species]\npreset = "yb174"\n')
    assert run.barrier is None
    assert run.grid == config.GridSection()
    assert run.output.format == "csv"
    assert config.resolve_species(run.species) == presets.yb174()
    assert config.resolve_barrier(run.barrier, presets.yb174()) is None


@pytest.mark.parametrize(("name", "text"), INVALID_CONFIGS)
def test_invalid(name: str, text: str) -> None:
    """Refuse malformed config files."""
    print(f"\n{name}")
    with pytest.raises(defs.ConfigError):
        config.parse_config(text, "test")


def test_species_sections() -> None:
    """Explicit species values, and presets that cannot be overridden."""
    explicit: Final = config.resolve_species(
        _parse(
            '[species]\nname = "Sr-88"\nmass_u = 87.9056\nclock_frequency_hz = 429.228e12\n',
        ).species,
    )
    assert explicit.name == "Sr-88"
    assert explicit.mean_mass == pytest.approx(87.9056 * CONSTANTS.u, rel=1e-12)
    assert explicit.clock_frequency == pytest.approx(2 * math.pi * 429.228e12, rel=1e-15)

    for body in (
        '[species]\npreset = "yb174"\nmass_u = 100.0\n',
        '[species]\npreset = "cs133"\n',
        '[species]\nname = "x"\nmass_u = 100.0\n',
        '[species]\nname = "x"\nclock_frequency_hz = 1e9\n',
    ):
        with pytest.raises(defs.ConfigError):
            config.resolve_species(_parse(body).species)


def test_barrier_sections() -> None:
    """Heights in J or nK, widths directly or from the barrier parameter."""
    species: Final = presets.rb87()
    gauss: Final = config.resolve_barrier(
        _parse(
            '[species]\npreset = "rb87"\n'
            '[barrier]\nshape = "gaussian"\nheight_nk = 200.0\nvbar = 4.0\n',
        ).barrier,
        species,
    )
    assert gauss is not None
    assert gauss.peak_height == pytest.approx(CONSTANTS.k_b * 200e-9, rel=1e-15)
    assert gauss.opacity(species.mean_mass) == pytest.approx(4.0, rel=1e-12)

    rect: Final = config.resolve_barrier(
        _parse(
            '[species]\npreset = "rb87"\n'
            '[barrier]\nshape = "rectangular"\nheight_j = 1e-30\nwidth_m = 1e-6\n'
            "delta_v_hz = 10.0\n",
        ).barrier,
        species,
    )
    assert rect is not None
    assert rect.width == 1e-6
    assert rect.delta_v == pytest.approx(CONSTANTS.hbar * 10, rel=1e-15)

    tab: Final = config.resolve_barrier(
        _parse(
            '[species]\npreset = "rb87"\n'
            '[barrier]\nshape = "tabulated"\nsamples = [[0.0, 0.0], [1e-6, 1e-30], [2e-6, 0.0]]\n',
        ).barrier,
        species,
    )
    assert tab is not None
    assert tab.xs == (0.0, 1e-6, 2e-6)

    for body in (
        '[barrier]\nshape = "rectangular"\nheight_j = 1e-30\nheight_nk = 1.0\nvbar = 1.0\n',
        '[barrier]\nshape = "rectangular"\nheight_j = 1e-30\nwidth_m = 1e-6\nvbar = 1.0\n',
        '[barrier]\nshape = "rectangular"\nheight_j = 1e-30\n',
        '[barrier]\nshape = "rectangular"\nwidth_m = 1e-6\n',
        '[barrier]\nshape = "lorentzian"\nheight_j = 1e-30\nwidth_m = 1e-6\n',
        '[barrier]\nshape = "tabulated"\nsamples = [[0.0, 0.0], [1e-6, 1e-30]]\n',
        '[barrier]\nshape = "rectangular"\nheight_j = -1e-30\nwidth_m = 1e-6\n',
        '[barrier]\npreset = "rb87-200nk-gaussian"\nvbar = 3.0\n',
        '[barrier]\npreset = "nowhere"\n',
        "[barrier]\n",
    ):
        with pytest.raises(defs.ConfigError):
            config.resolve_barrier(_parse('[species]\npreset = "rb87"\n' + body).barrier, species)


def test_perturbations() -> None:
    """Perturbations beyond the first-order regime are a config error."""
    run: Final = _parse('[species]\npreset = "yb174"\n[perturbations]\nmomentum_rel = 1e-5\n')
    assert config.resolve_perturbations(run.perturbations).momentum_rel == 1e-5
    with pytest.raises(defs.ConfigError):
        config.resolve_perturbations(
            _parse('[species]\npreset = "yb174"\n[perturbations]\nmass_rel = 0.01\n').perturbations,
        )


def test_numerics() -> None:
    """Overrides replace the defaults, the command line wins over the file."""
    run: Final = _parse(
        '[species]\npreset = "yb174"\n[numerics]\nslab_start = 16\nthreads = 2\n',
    )
    settings: Final = config.resolve_numerics(run.numerics)
    assert settings.slab_start == 16
    assert settings.threads == 2
    assert settings.tm_rel_tol == defs.DEFAULT_CONFIG.tm_rel_tol
    assert not settings.verbose

    overridden: Final = config.resolve_numerics(run.numerics, threads=8, verbose=True)
    assert overridden.threads == 8
    assert overridden.verbose

    for body in ("tm_rel_tol = 0.5\n", "threads = 0\n", "slab_max = 8\n", "golden_tol = 2.0\n"):
        with pytest.raises(defs.ConfigError):
            config.resolve_numerics(
                _parse('[species]\npreset = "yb174"\n[numerics]\n' + body).numerics,
            )


def test_resolve_scan() -> None:
    """The grid section becomes a scan request."""
    run: Final = _parse(
        '[species]\npreset = "rb87"\n'
        '[grid]\nquantity = "tunneling-time"\ne_min = 0.5\ne_max = 1.5\ne_count = 3\n'
        "v_min = 1.0\nv_max = 2.0\nv_count = 2\n",
    )
    req: Final = config.resolve_scan(run)
    assert req.quantity == scan.Quantity.TUNNELING_TIME
    assert req.e_bars == (0.5, 1.0, 1.5)
    assert req.v_bars == (1.0, 2.0)

    for body in (
        '[grid]\nquantity = "entropy"\n',
        "[grid]\ne_count = 1\n",
        "[grid]\ne_min = 2.0\ne_max = 1.0\n",
        '[grid]\nquantity = "fringe"\nt_min = -1.0\n',
    ):
        with pytest.raises(defs.ConfigError):
            config.resolve_scan(_parse('[species]\npreset = "rb87"\n' + body))


@pytest.mark.parametrize("path", sorted(CONFIGS_DIR.glob("*.toml")), ids=lambda path: path.stem)
def test_shipped_configs(path: pathlib.Path) -> None:
    """Every bundled run file loads and resolves."""
    run: Final = config.load_config(path)
    species: Final = config.resolve_species(run.species)
    config.resolve_barrier(run.barrier, species)
    config.resolve_perturbations(run.perturbations)
    config.resolve_numerics(run.numerics)
    req: Final = config.resolve_scan(run)
    assert req.species == species


def test_missing_file(tmp_path: pathlib.Path) -> None:
    """A missing file is a config error."""
    with pytest.raises(defs.ConfigError):
        config.load_config(tmp_path / "nothing.toml")
