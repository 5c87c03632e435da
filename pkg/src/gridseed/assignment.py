"""Generative assignment of MW values to buses.

Pipeline per axis: evaluate the scaling law for the aggregate target,
sample a tailed-exponential value set, rescale downward if the sum
overshoots the target by more than the trigger, then place values on
buses so that each degree bin's value-bin frequencies follow the joint
table's degree-conditional distribution.

Placement is exact in counts: per degree bin the value-bin targets come
from largest-remainder rounding, and values are paired to slots by sort
order, which keeps the sampled marginal untouched and makes the realized
slot counts equal the targets by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .defaults import BALANCE_CAP, LOAD_BETA, RESCALE_TRIGGER
from .errors import ConstantVector, LengthMismatch, NoGenerationBuses, NoLoadBuses
from .models import (
    ProbabilityTable,
    ScalingLaw,
    TailedExponentialModel,
    ValueSample,
    bin_indices,
    conditional_value_distribution,
    evaluate_scaling_law,
    normalize_values,
    sample_tailed_exponential,
    tail_count,
)
from .topology import BusType, Grid, node_degrees, normalized_degrees
from .empirical import extract_joint_table, pearson_correlation

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class AssignmentOptions:
    """Knobs for one assignment run."""

    seed: int
    scaling_law: ScalingLaw
    value_model: TailedExponentialModel
    table: ProbabilityTable
    rescale_trigger: float = RESCALE_TRIGGER
    balance_cap: float = BALANCE_CAP

    def __post_init__(self) -> None:
        if self.rescale_trigger < 1.0:
            raise ValueError(f"rescale_trigger must be >= 1, got {self.rescale_trigger}")
        if not 0.0 < self.balance_cap <= 1.0:
            raise ValueError(f"balance_cap must lie in (0, 1], got {self.balance_cap}")


@dataclass(frozen=True)
class Assignment:
    """Finished bus -> MW mapping plus its realized statistics."""

    values: dict[int, float]
    total: float
    realized_table: ProbabilityTable
    pearson_rho: float | None
    seed: int
    # slot value-bin x degree-bin counts as constructed; None for
    # assignments rebuilt from files that lack the bookkeeping
    matched_counts: np.ndarray | None = field(compare=False)
    target_total: float
    beta: float
    tail_share: float
    rescaled: bool


def rescale_if_exceeds(values, target_total: float, trigger: float) -> np.ndarray:
    """Scale every value by target/sum when the sum tops trigger*target.

    One-sided: sums at or below the trigger pass through unchanged, so
    undershoot is never corrected upward.
    """
    vals = np.asarray(values, dtype=float)
    if target_total <= 0:
        raise ValueError(f"target_total must be positive, got {target_total}")
    total = float(vals.sum())
    if total > trigger * target_total:
        return vals * (target_total / total)
    return vals


def largest_remainder_counts(probs: np.ndarray, count: int) -> np.ndarray:
    """Apportion ``count`` items to bins by probability.

    Floor the quotas, then hand the leftover items to the largest
    fractional remainders; remainder ties go to the lower bin index.
    """
    quotas = np.asarray(probs, dtype=float) * count
    base = np.floor(quotas).astype(np.int64)
    leftover = count - int(base.sum())
    if leftover > 0:
        # stable argsort on negated remainders keeps ties in index order
        order = np.argsort(-(quotas - base), kind="stable")
        base[order[:leftover]] += 1
    return base


@dataclass(frozen=True)
class MatchResult:
    """Values aligned to the input bus order, with slot bookkeeping."""

    values: np.ndarray
    slot_bins: np.ndarray
    counts: np.ndarray


def match_values_to_buses(
    sample: ValueSample | np.ndarray,
    norm_degrees: np.ndarray,
    table: ProbabilityTable,
    seed: int | None = None,
) -> MatchResult:
    """Bijectively place sampled values on buses, honoring the table.

    Per degree bin j with n_j buses, the assigned value-bin counts equal
    largest_remainder_counts(P(value-bin | degree-bin j), n_j) exactly.
    Values keep their sampled magnitudes: sorted values are paired to
    slots sorted by (value bin, degree bin, degree, bus index), so within
    any cell larger values sit on higher-degree buses, ties by bus index.

    ``seed`` is accepted for signature stability but unused: the policy
    is deterministic.
    """
    values = sample.values if isinstance(sample, ValueSample) else np.asarray(sample, dtype=float)
    degs = np.asarray(norm_degrees, dtype=float)
    n = values.size
    if n != degs.size:
        raise LengthMismatch(f"{n} values vs {degs.size} buses")
    k = table.n_bins
    degree_bins = bin_indices(degs, table.bin_edges)

    slot_bins = np.empty(n, dtype=np.int64)
    counts = np.zeros((k, k), dtype=np.int64)
    for j in np.unique(degree_bins):
        positions = np.flatnonzero(degree_bins == j)
        targets = largest_remainder_counts(
            conditional_value_distribution(table, int(j)), positions.size
        )
        counts[:, j] = targets
        # low-degree buses take the low value bins inside the degree bin
        ranked = positions[np.lexsort((positions, degs[positions]))]
        slot_bins[ranked] = np.repeat(np.arange(k), targets)

    order_slots = np.lexsort((np.arange(n), degs, degree_bins, slot_bins))
    order_values = np.argsort(values, kind="stable")
    placed = np.empty(n)
    placed[order_slots] = values[order_values]
    return MatchResult(values=placed, slot_bins=slot_bins, counts=counts)


def reconcile_balance(load_target: float, gen_total: float, cap: float) -> float:
    """Total load target compatible with available generation."""
    if load_target <= 0 or gen_total <= 0 or cap <= 0:
        raise ValueError("reconcile_balance needs positive inputs")
    return min(load_target, cap * gen_total)


def derive_beta(
    target_total: float, n: int, model: TailedExponentialModel, calibration_seed: int
) -> float:
    """Exponential mean that makes n sampled values sum near the target.

    Start from the closed-form expectation (body mean plus tail values
    anchored at the expected body maximum, beta*H_m for m draws), then
    correct once against a single calibration sample on its own stream.
    """
    t = tail_count(n, model.tail_fraction)
    m = n - t
    lo, hi = model.tail_multiplier
    mean_mult = (lo + hi) / 2.0
    if m == 0:
        beta0 = target_total / (t * mean_mult)
    else:
        h_m = 1.0 if m == 1 else math.log(m) + EULER_GAMMA + 1.0 / (2 * m)
        beta0 = target_total / (m + t * mean_mult * h_m)
    calibration = sample_tailed_exponential(n, replace(model, beta=beta0), calibration_seed)
    return beta0 * target_total / float(calibration.values.sum())


def _axis_seeds(seed: int, axis_tag: int) -> tuple[int, int]:
    """Two decorrelated substream seeds for one axis of one run."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(axis_tag,))
    calibration, final = ss.generate_state(2, dtype=np.uint64)
    return int(calibration), int(final)


def _assign_axis(
    grid: Grid,
    bus_ids: list[int],
    options: AssignmentOptions,
    target_total: float,
    axis_tag: int,
    hard_cap: float | None = None,
) -> Assignment:
    n = len(bus_ids)
    calibration_seed, final_seed = _axis_seeds(options.seed, axis_tag)
    model = options.value_model
    if model.beta is None:
        model = replace(model, beta=derive_beta(target_total, n, model, calibration_seed))
    sample = sample_tailed_exponential(n, model, final_seed)

    scaled = rescale_if_exceeds(sample.values, target_total, options.rescale_trigger)
    if hard_cap is not None:
        scaled = rescale_if_exceeds(scaled, hard_cap, 1.0)
    rescaled = scaled is not sample.values

    degs = normalized_degrees(grid, bus_ids)
    match = match_values_to_buses(scaled, degs, options.table)

    raw_degrees = node_degrees(grid)[bus_ids]
    realized = extract_joint_table(
        match.values, raw_degrees, options.table.bin_edges,
        axis=options.table.value_axis,
    )
    try:
        rho = pearson_correlation(normalize_values(match.values), degs)
    except ConstantVector:
        rho = None

    return Assignment(
        values={bus: float(mw) for bus, mw in zip(bus_ids, match.values)},
        total=float(match.values.sum()),
        realized_table=realized,
        pearson_rho=rho,
        seed=options.seed,
        matched_counts=match.counts,
        target_total=float(target_total),
        beta=float(model.beta),
        tail_share=len(sample.tail_indices) / n,
        rescaled=rescaled,
    )


def assign_generation(grid: Grid, options: AssignmentOptions) -> Assignment:
    """Place generation capacities on every Generation bus of the grid."""
    gen_ids = grid.buses_of_type(BusType.GENERATION)
    if not gen_ids:
        raise NoGenerationBuses("grid has no generation buses")
    target = evaluate_scaling_law(options.scaling_law, grid.n_buses)
    return _assign_axis(grid, gen_ids, options, target, axis_tag=0)


def assign_loads(grid: Grid, options: AssignmentOptions, gen_total: float) -> Assignment:
    """Place static loads on every Load bus, balanced against generation.

    The law target is first reconciled against the generation total, and
    a hard cap at balance_cap * gen_total is enforced after the ordinary
    trigger rescale, so total load never exceeds available capacity.
    """
    load_ids = grid.buses_of_type(BusType.LOAD)
    if not load_ids:
        raise NoLoadBuses("grid has no load buses")
    options = _with_load_beta(options)
    law_target = evaluate_scaling_law(options.scaling_law, grid.n_buses)
    target = reconcile_balance(law_target, gen_total, options.balance_cap)
    hard_cap = options.balance_cap * gen_total
    return _assign_axis(grid, load_ids, options, target, axis_tag=1, hard_cap=hard_cap)


def _with_load_beta(options: AssignmentOptions) -> AssignmentOptions:
    if options.value_model.beta is not None:
        return options
    return replace(options, value_model=replace(options.value_model, beta=LOAD_BETA))
