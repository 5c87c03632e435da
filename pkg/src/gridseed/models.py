"""Closed-form scaling laws, the tailed-exponential sampler, and the
13x13 joint probability table shared by the generation and load paths.

Everything here is pure and deterministic: sampling takes an explicit
integer seed and builds a fresh generator, so repeat calls with the same
arguments return identical vectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadEdges,
    EmptyInput,
    InvalidNetworkSize,
    NegativeEntry,
    NonPositiveMax,
    NotADistribution,
    OutOfRange,
)

# Total of the raw cell grid may drift from 1 by transcription error;
# anything inside this band is renormalized, anything outside rejected.
TABLE_SUM_TOLERANCE = (0.98, 1.02)


@dataclass(frozen=True)
class ScalingLaw:
    """Quadratic-in-log10 law: log10(total MW) = a*L**2 + b*L + c, L = log10 N."""

    a: float
    b: float
    c: float


def evaluate_scaling_law(law: ScalingLaw, n: int) -> float:
    """Aggregate MW total predicted for a network of n buses.

    Raises InvalidNetworkSize for n < 2 (the law is fit on real grids,
    a one-bus network has no meaningful total).
    """
    if n < 2:
        raise InvalidNetworkSize(f"network size must be >= 2, got {n}")
    log_n = math.log10(n)
    return 10.0 ** (law.a * log_n * log_n + law.b * log_n + law.c)


@dataclass(frozen=True)
class TailedExponentialModel:
    """Exponential body with a small super-large tail.

    ``beta`` is the exponential mean in MW; None means "derive from a
    target total" (the assignment layer does that). ``tail_fraction`` of
    the values are replaced by the realized body maximum times a uniform
    draw from ``tail_multiplier``.
    """

    beta: float | None
    tail_fraction: float = 0.01
    tail_multiplier: tuple[float, float] = (2.0, 3.0)

    def __post_init__(self) -> None:
        if self.beta is not None and self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0.0 <= self.tail_fraction < 1.0:
            raise ValueError(f"tail_fraction must lie in [0, 1), got {self.tail_fraction}")
        lo, hi = self.tail_multiplier
        if not 1.0 < lo <= hi:
            raise ValueError(f"tail multipliers need 1 < lo <= hi, got [{lo}, {hi}]")


def tail_count(n: int, tail_fraction: float) -> int:
    """Number of tail values in a sample of size n.

    Zero when the tail is disabled, otherwise at least 1 even for tiny n
    (round() at an exact .5 follows Python's half-to-even rule).
    """
    if tail_fraction == 0.0:
        return 0
    return min(n, max(1, round(tail_fraction * n)))


@dataclass(frozen=True)
class ValueSample:
    """A generated MW vector with its tail bookkeeping."""

    values: np.ndarray = field(compare=False)
    tail_indices: tuple[int, ...]
    seed: int
    model: TailedExponentialModel

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def tail_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.tail_indices)] = True
        return mask


def sample_tailed_exponential(
    n: int, model: TailedExponentialModel, seed: int
) -> ValueSample:
    """Draw n MW values: an exponential body plus a super-large tail.

    The body is i.i.d. Exponential(beta); each tail value is the realized
    body maximum times Uniform[lo, hi). With an empty body (every value is
    tail) beta itself stands in as the reference. Tail values occupy the
    trailing positions of the vector.
    """
    if n < 1:
        raise EmptyInput(f"sample size must be >= 1, got {n}")
    if model.beta is None:
        raise ValueError("model.beta is unset; derive it before sampling")
    rng = np.random.default_rng(seed)
    t = tail_count(n, model.tail_fraction)
    body = rng.exponential(model.beta, size=n - t)
    reference = float(body.max()) if body.size else float(model.beta)
    lo, hi = model.tail_multiplier
    tail = reference * rng.uniform(lo, hi, size=t)
    values = np.concatenate([body, tail])
    values.flags.writeable = False
    return ValueSample(
        values=values,
        tail_indices=tuple(range(n - t, n)),
        seed=int(seed),
        model=model,
    )


def normalize_values(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Divide by the maximum so the output lies in [0, 1] with max exactly 1."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyInput("cannot normalize an empty vector")
    top = arr.max()
    if top <= 0:
        raise NonPositiveMax(f"maximum must be positive, got {top}")
    return arr / top


def bin_index(x: float, edges: Sequence[float] | np.ndarray) -> int:
    """Bin of x under half-open lower-inclusive bins; the top bin is closed.

    Raises OutOfRange when x falls outside [edges[0], edges[-1]].
    """
    e = np.asarray(edges, dtype=float)
    if x < e[0] or x > e[-1]:
        raise OutOfRange(f"{x} outside [{e[0]}, {e[-1]}]")
    if x == e[-1]:
        return int(e.size - 2)
    return int(np.searchsorted(e, x, side="right") - 1)


def bin_indices(x: Sequence[float] | np.ndarray, edges: Sequence[float] | np.ndarray) -> np.ndarray:
    """Vectorized bin_index."""
    arr = np.asarray(x, dtype=float)
    e = np.asarray(edges, dtype=float)
    if arr.size and (arr.min() < e[0] or arr.max() > e[-1]):
        raise OutOfRange(f"values outside [{e[0]}, {e[-1]}]")
    idx = np.searchsorted(e, arr, side="right") - 1
    # the exact upper edge belongs to the closed top bin
    return np.where(arr == e[-1], e.size - 2, idx).astype(np.int64)


class ValueAxis(enum.Enum):
    GENERATION = "generation"
    LOAD = "load"


@dataclass(frozen=True)
class ProbabilityTable:
    """13x13 joint PDF over (value bin, degree bin), rows = value bins.

    ``joint[i][j]`` is the probability of normalized value in bin i and
    normalized degree in bin j; construction through validate_table
    guarantees it sums to exactly 1.
    """

    joint: np.ndarray = field(compare=False)
    bin_edges: np.ndarray = field(compare=False)
    value_axis: ValueAxis = ValueAxis.GENERATION

    @property
    def n_bins(self) -> int:
        return int(self.bin_edges.size - 1)

    def value_marginal(self) -> np.ndarray:
        return self.joint.sum(axis=1)

    def degree_marginal(self) -> np.ndarray:
        return self.joint.sum(axis=0)


def validate_table(
    raw: Sequence[Sequence[float]] | np.ndarray,
    edges: Sequence[float] | np.ndarray,
    axis: ValueAxis = ValueAxis.GENERATION,
) -> ProbabilityTable:
    """Check a raw cell grid and return it renormalized to total exactly 1.

    Rejects negative cells, edge vectors that are not ascending from 0 to
    1, and totals outside [0.98, 1.02].
    """
    cells = np.asarray(raw, dtype=float)
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
        raise BadEdges("bin edges must be strictly ascending")
    if e[0] != 0.0 or e[-1] != 1.0:
        raise BadEdges(f"bin edges must run from 0.0 to 1.0, got [{e[0]}, {e[-1]}]")
    k = e.size - 1
    if cells.shape != (k, k):
        raise NotADistribution(f"expected a {k}x{k} grid, got shape {cells.shape}")
    if np.any(cells < 0):
        raise NegativeEntry("joint table cells must be nonnegative")
    total = float(cells.sum())
    lo, hi = TABLE_SUM_TOLERANCE
    if not lo <= total <= hi:
        raise NotADistribution(f"cell total {total:.6f} outside [{lo}, {hi}]")
    joint = cells / total
    joint.flags.writeable = False
    frozen_edges = e.copy()
    frozen_edges.flags.writeable = False
    return ProbabilityTable(joint=joint, bin_edges=frozen_edges, value_axis=axis)


def conditional_value_distribution(table: ProbabilityTable, degree_bin: int) -> np.ndarray:
    """P(value bin | degree bin): one column of the joint, renormalized.

    A column with zero marginal borrows the nearest nonzero column, ties
    broken toward lower degree, so the result always sums to 1.
    """
    k = table.n_bins
    if not 0 <= degree_bin < k:
        raise OutOfRange(f"degree bin {degree_bin} outside [0, {k})")
    marginals = table.degree_marginal()
    j = degree_bin
    if marginals[j] == 0.0:
        for step in range(1, k):
            if j - step >= 0 and marginals[j - step] > 0.0:
                j = j - step
                break
            if j + step < k and marginals[j + step] > 0.0:
                j = j + step
                break
        else:
            raise NotADistribution("every degree column has zero mass")
    return table.joint[:, j] / marginals[j]
