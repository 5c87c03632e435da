"""Statistical measurements on finished cases: empirical PDFs,
exponential fits with tail detection, Pearson correlation, joint-table
extraction, and scaling-law fits across a family of grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CollinearSizes,
    ConstantVector,
    DegenerateInput,
    EmptyInput,
    InsufficientPoints,
    LengthMismatch,
    NonPositiveMax,
)
from .models import (
    ProbabilityTable,
    ScalingLaw,
    ValueAxis,
    bin_indices,
    normalize_values,
    validate_table,
)
from .topology import BusType, Grid, node_degrees


@dataclass(frozen=True)
class CaseSnapshot:
    """A grid together with its per-bus generation capacities and loads."""

    grid: Grid
    gen_capacity: dict[int, float]
    load: dict[int, float]

    def __post_init__(self) -> None:
        gen_ids = set(self.grid.buses_of_type(BusType.GENERATION))
        load_ids = set(self.grid.buses_of_type(BusType.LOAD))
        if set(self.gen_capacity) != gen_ids:
            raise LengthMismatch("gen_capacity keys must be exactly the generation buses")
        if set(self.load) != load_ids:
            raise LengthMismatch("load keys must be exactly the load buses")
        if any(v < 0 for v in self.gen_capacity.values()) or any(
            v < 0 for v in self.load.values()
        ):
            raise DegenerateInput("capacities and loads must be nonnegative")

    def axis_values(self, axis: ValueAxis) -> tuple[np.ndarray, np.ndarray]:
        """(MW values, integer degrees) for the buses of one axis, by id."""
        mapping = self.gen_capacity if axis is ValueAxis.GENERATION else self.load
        ids = sorted(mapping)
        degrees = node_degrees(self.grid)[ids]
        values = np.array([mapping[i] for i in ids], dtype=float)
        return values, degrees


@dataclass(frozen=True)
class Histogram:
    """Equal-width density histogram over [0, max]."""

    edges: np.ndarray
    densities: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class EmpiricalReport:
    """One axis of a case, measured."""

    pdf_histogram: Histogram
    fitted_beta: float
    pearson_rho: float
    joint_table: ProbabilityTable
    tail_share: float


def extract_joint_table(
    values: np.ndarray,
    degrees: np.ndarray,
    edges,
    axis: ValueAxis = ValueAxis.GENERATION,
) -> ProbabilityTable:
    """Empirical 13x13 joint PDF of (normalized value, normalized degree).

    Both vectors are normalized by their own maximum, binned, and the
    cell counts divided by n, so the output always sums to exactly 1.
    """
    vals = np.asarray(values, dtype=float)
    degs = np.asarray(degrees)
    if vals.size != degs.size:
        raise LengthMismatch(f"{vals.size} values vs {degs.size} degrees")
    if vals.size == 0:
        raise DegenerateInput("need at least one (value, degree) pair")
    try:
        norm_v = normalize_values(vals)
        norm_k = normalize_values(degs.astype(float))
    except NonPositiveMax as exc:
        raise DegenerateInput(str(exc)) from exc
    e = np.asarray(edges, dtype=float)
    k = e.size - 1
    v_bins = bin_indices(norm_v, e)
    k_bins = bin_indices(norm_k, e)
    cells = np.zeros((k, k))
    np.add.at(cells, (v_bins, k_bins), 1.0)
    return validate_table(cells / vals.size, e, axis=axis)


def pearson_correlation(x, y) -> float:
    """Sample Pearson correlation coefficient, clipped to [-1, 1]."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size != ya.size:
        raise LengthMismatch(f"{xa.size} vs {ya.size} points")
    if xa.size < 2:
        raise ConstantVector("need at least two points")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ConstantVector("correlation undefined for a constant vector")
    rho = float((dx * dy).sum() / (sx * sy))
    return min(1.0, max(-1.0, rho))


def fit_exponential_with_tail(values, tail_fraction: float) -> tuple[float, tuple[int, ...]]:
    """Split off the top round(tail_fraction*n) values, fit the rest.

    Returns (beta, tail index tuple); beta is the plain sample mean of
    the non-tail values, the maximum-likelihood exponential fit.
    """
    vals = np.asarray(values, dtype=float)
    n = vals.size
    if n == 0:
        raise EmptyInput("cannot fit an empty sample")
    if not 0.0 <= tail_fraction < 1.0:
        raise ValueError(f"tail_fraction must lie in [0, 1), got {tail_fraction}")
    t = round(tail_fraction * n)
    order = np.argsort(vals, kind="stable")
    tail = tuple(int(i) for i in order[n - t :]) if t else ()
    body = vals[order[: n - t]]
    return float(body.mean()), tail


def fit_scaling_law(points) -> ScalingLaw:
    """Least-squares quadratic of log10(total) on log10(N).

    Exact (residual ~ machine epsilon) when the points already lie on a
    quadratic. Needs three distinct sizes to pin three coefficients.
    """
    pts = list(points)
    if len(pts) < 3:
        raise InsufficientPoints(f"need >= 3 points, got {len(pts)}")
    sizes = np.array([p[0] for p in pts], dtype=float)
    totals = np.array([p[1] for p in pts], dtype=float)
    if np.any(sizes < 2) or np.any(totals <= 0):
        raise ValueError("points need N >= 2 and positive totals")
    if np.unique(sizes).size < 3:
        raise CollinearSizes("need three distinct network sizes")
    log_n = np.log10(sizes)
    log_t = np.log10(totals)
    a, b, c = np.polyfit(log_n, log_t, 2)
    return ScalingLaw(a=float(a), b=float(b), c=float(c))


def empirical_pdf(values, bin_count: int) -> Histogram:
    """Equal-width density histogram over [0, max(values)]."""
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise EmptyInput("cannot histogram an empty sample")
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    top = float(vals.max())
    if top <= 0:
        raise DegenerateInput("histogram needs a positive maximum")
    counts, edges = np.histogram(vals, bins=bin_count, range=(0.0, top))
    width = edges[1] - edges[0]
    densities = counts / (vals.size * width)
    return Histogram(edges=edges, densities=densities, counts=counts)


def measure_axis(
    values: np.ndarray,
    degrees: np.ndarray,
    edges,
    axis: ValueAxis,
    bin_count: int = 50,
    tail_fraction: float = 0.01,
) -> EmpiricalReport:
    """Measure one value axis: PDF, beta fit, correlation, joint table."""
    vals = np.asarray(values, dtype=float)
    degs = np.asarray(degrees)
    beta, tail = fit_exponential_with_tail(vals, tail_fraction)
    rho = pearson_correlation(
        normalize_values(vals), normalize_values(degs.astype(float))
    )
    table = extract_joint_table(vals, degs, edges, axis=axis)
    return EmpiricalReport(
        pdf_histogram=empirical_pdf(vals, bin_count),
        fitted_beta=beta,
        pearson_rho=rho,
        joint_table=table,
        tail_share=len(tail) / vals.size,
    )


def analyze_case(
    snapshot: CaseSnapshot,
    axis: ValueAxis,
    edges,
    bin_count: int = 50,
    tail_fraction: float = 0.01,
) -> EmpiricalReport:
    """measure_axis on the requested axis of a full case snapshot."""
    values, degrees = snapshot.axis_values(axis)
    return measure_axis(values, degrees, edges, axis, bin_count, tail_fraction)
