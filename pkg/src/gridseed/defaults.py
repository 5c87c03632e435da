"""Embedded defaults: scaling-law coefficients, the WECC load mean, and
the two published 13x13 joint probability tables.

The cell grids and marginal rows are stored digit-for-digit as printed
in the source material, value bins ascending. The printed grids do not
quite total 1 (generation cells sum to 0.951, the legible load cells to
0.954, while the printed totals say 1.000), so the working tables are
the printed cells globally renormalized; that leaves every conditional
distribution untouched. The verbatim numbers stay available through the
``*_source()`` functions so file dumps can carry them unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import (
    ProbabilityTable,
    ScalingLaw,
    TailedExponentialModel,
    ValueAxis,
    validate_table,
)

GENERATION_SCALING_LAW = ScalingLaw(a=-0.21, b=2.06, c=0.66)
LOAD_SCALING_LAW = ScalingLaw(a=-0.20, b=1.98, c=0.58)

# Exponential mean of WECC-scale load settings, in MW. The source gives
# no counterpart for generation capacities; that mean is derived from
# the scaling-law target at assignment time.
LOAD_BETA = 42.51

DEFAULT_TAIL_FRACTION = 0.01
DEFAULT_TAIL_MULTIPLIER = (2.0, 3.0)

# Aggregate rescaling fires only above this multiple of the law target.
RESCALE_TRIGGER = 1.05
# Total load may not exceed this fraction of total generation capacity.
BALANCE_CAP = 1.0

BIN_EDGES = (
    0.00, 0.01, 0.03, 0.06, 0.10, 0.15, 0.21,
    0.28, 0.36, 0.45, 0.55, 0.66, 0.78, 1.00,
)

# Joint cells for generation capacity, row i = value bin i (ascending),
# column j = degree bin j (ascending). Verbatim from the published grid.
GENERATION_CELLS = (
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.082, 0.140, 0.070, 0.040, 0.010, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.090, 0.030, 0.010, 0.008, 0.001, 0.000, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.033, 0.017, 0.003, 0.003, 0.005, 0.000, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.027, 0.031, 0.010, 0.010, 0.005, 0.004, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.025, 0.027, 0.016, 0.013, 0.009, 0.002, 0.002, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001),
    (0.009, 0.024, 0.016, 0.024, 0.013, 0.004, 0.003, 0.001, 0.000, 0.000, 0.000, 0.000, 0.001),
    (0.003, 0.011, 0.012, 0.017, 0.013, 0.007, 0.003, 0.002, 0.000, 0.001, 0.000, 0.000, 0.000),
    (0.006, 0.002, 0.000, 0.009, 0.008, 0.003, 0.003, 0.002, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.001, 0.000, 0.004, 0.008, 0.000, 0.002, 0.001, 0.000, 0.001, 0.000, 0.001, 0.000),
    (0.000, 0.000, 0.001, 0.000, 0.000, 0.000, 0.001, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.001, 0.000, 0.000, 0.001, 0.001, 0.001, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.000, 0.000, 0.000),
)

# Printed marginal columns/rows, kept even though they disagree with the
# cell sums (rows total 0.989, columns 0.993, grand total printed 1.000).
GENERATION_VALUE_MARGINAL = (
    0.000, 0.360, 0.151, 0.063, 0.088, 0.097, 0.097,
    0.072, 0.034, 0.018, 0.003, 0.004, 0.002,
)
GENERATION_DEGREE_MARGINAL = (
    0.283, 0.291, 0.147, 0.141, 0.077, 0.022, 0.017,
    0.008, 0.001, 0.003, 0.000, 0.001, 0.002,
)
GENERATION_TOTAL = 1.000

# Joint cells for load settings. The published grid is partly illegible:
# value bins 9..12 show no readable cells (only their marginals survive),
# so those rows are zero here and the working table renormalizes over
# the readable mass.
LOAD_CELLS = (
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.196, 0.033, 0.005, 0.000, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.135, 0.058, 0.010, 0.002, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.082, 0.066, 0.022, 0.004, 0.002, 0.003, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.030, 0.038, 0.027, 0.015, 0.003, 0.001, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.012, 0.027, 0.037, 0.022, 0.013, 0.001, 0.002, 0.001, 0.001, 0.000, 0.000, 0.000, 0.000),
    (0.004, 0.009, 0.019, 0.018, 0.009, 0.003, 0.002, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.003, 0.004, 0.006, 0.010, 0.010, 0.003, 0.001, 0.001, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
    (0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000),
)

LOAD_VALUE_MARGINAL = (
    0.000, 0.000, 0.235, 0.205, 0.183, 0.119, 0.118,
    0.069, 0.041, 0.012, 0.008, 0.003, 0.002,
)
LOAD_DEGREE_MARGINAL = (
    0.464, 0.238, 0.130, 0.076, 0.042, 0.018, 0.012,
    0.005, 0.002, 0.005, 0.001, 0.005, 0.001,
)
LOAD_TOTAL = 1.000


def _normalized_table(cells: tuple, axis: ValueAxis) -> ProbabilityTable:
    raw = np.asarray(cells, dtype=float)
    # validate_table only tolerates totals near 1; the printed grids fall
    # short of that, so scale the readable mass up front.
    return validate_table(raw / raw.sum(), BIN_EDGES, axis=axis)


def generation_table() -> ProbabilityTable:
    """Working joint table for generation capacities (total exactly 1)."""
    return _normalized_table(GENERATION_CELLS, ValueAxis.GENERATION)


def load_table() -> ProbabilityTable:
    """Working joint table for load settings (total exactly 1)."""
    return _normalized_table(LOAD_CELLS, ValueAxis.LOAD)


def generation_source() -> dict:
    """The generation grid exactly as printed, marginals included."""
    return {
        "cells": [list(row) for row in GENERATION_CELLS],
        "value_marginal": list(GENERATION_VALUE_MARGINAL),
        "degree_marginal": list(GENERATION_DEGREE_MARGINAL),
        "total": GENERATION_TOTAL,
    }


def load_source() -> dict:
    """The load grid as printed (illegible cells zeroed), marginals included."""
    return {
        "cells": [list(row) for row in LOAD_CELLS],
        "value_marginal": list(LOAD_VALUE_MARGINAL),
        "degree_marginal": list(LOAD_DEGREE_MARGINAL),
        "total": LOAD_TOTAL,
    }


@dataclass(frozen=True)
class AxisDefaults:
    """Everything the assignment pipeline needs for one value axis."""

    law: ScalingLaw
    model: TailedExponentialModel
    table: ProbabilityTable
    source: dict
    axis: ValueAxis


def generation_defaults() -> AxisDefaults:
    return AxisDefaults(
        law=GENERATION_SCALING_LAW,
        model=TailedExponentialModel(
            beta=None,
            tail_fraction=DEFAULT_TAIL_FRACTION,
            tail_multiplier=DEFAULT_TAIL_MULTIPLIER,
        ),
        table=generation_table(),
        source=generation_source(),
        axis=ValueAxis.GENERATION,
    )


def load_defaults() -> AxisDefaults:
    return AxisDefaults(
        law=LOAD_SCALING_LAW,
        model=TailedExponentialModel(
            beta=LOAD_BETA,
            tail_fraction=DEFAULT_TAIL_FRACTION,
            tail_multiplier=DEFAULT_TAIL_MULTIPLIER,
        ),
        table=load_table(),
        source=load_source(),
        axis=ValueAxis.LOAD,
    )
