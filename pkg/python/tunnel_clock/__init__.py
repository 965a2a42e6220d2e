# SPDX-FileCopyrightText: 2026  The tunnel_clock authors
# SPDX-License-Identifier: BSD-2-Clause
"""Simulate Ramsey clocks tunneling through potential barriers.

The ``tunnel_clock`` library treats an atom as a two-level clock whose internal
states differ in rest mass. A barrier then scatters the two states slightly
differently, and the resulting phase difference, read out by a Ramsey sequence,
defines a tunneling time. The library evaluates that time in closed form for
rectangular barriers and by transfer matrices for smooth ones, averages it over
momentum packets, and estimates how many experimental runs would resolve it.
"""
