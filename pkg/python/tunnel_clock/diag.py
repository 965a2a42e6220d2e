# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Send the solvers' diagnostic messages to the standard error stream."""

from __future__ import annotations

import functools
import logging
import sys
import typing


if typing.TYPE_CHECKING:
    from typing import Final


LOG_FORMAT: Final = "%(levelname)s %(message)s"
"""Level and message only; the solvers put the grid point into the message."""


@functools.lru_cache
def _stderr_handler() -> logging.Handler:
    """Build the one standard error handler shared by all configured loggers."""
    handler: Final = logging.StreamHandler(stream=sys.stderr)
    # The level is decided by the logger itself
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def setup_logger(
    name: str | None = None,
    *,
    verbose: bool,
    propagate: bool = False,
) -> logging.Logger:
    """Set up a logger for the solvers' progress messages.

    The library modules log through the root logger, so the command-line
    tool configures that one. Debug messages (slab refinements, quadrature
    error estimates, optimizer brackets) are only shown if `verbose` is true.
    Warnings raised by the SciPy integrators are routed through the logging
    system so that they are reported in the same format.
    Messages are not propagated to parent loggers unless `propagate` is true.
    """
    logger: Final = logging.getLogger(name)
    handler: Final = _stderr_handler()
    if handler not in logger.handlers:
        logger.addHandler(handler)
    logger.propagate = propagate
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    logging.captureWarnings(capture=True)
    if name is not None:
        warn_logger: Final = logging.getLogger("py.warnings")
        if handler not in warn_logger.handlers:
            warn_logger.addHandler(handler)
    return logger
