"""DC power-flow validation and statistical conformance reports.

The DC model: P = B'theta with the slack row and column removed and the
slack injection set to minus the sum of the others, then branch flows
F_l = (theta_i - theta_j) / x_l. Branches without reactance fall back to
one per unit, which turns flows into topological proxies but keeps the
validation runnable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from .assignment import Assignment, largest_remainder_counts
from .empirical import extract_joint_table, fit_exponential_with_tail, pearson_correlation
from .errors import ConstantVector, DisconnectedGrid, SingularSystem
from .models import (
    ProbabilityTable,
    ScalingLaw,
    bin_indices,
    conditional_value_distribution,
    evaluate_scaling_law,
    normalize_values,
)
from .topology import (
    BusType,
    Grid,
    admittance_matrix,
    branch_reactances,
    incidence_matrix,
    node_degrees,
)

CONSERVATION_TOL_MW = 1e-8
RESIDUAL_TOL = 1e-10


def build_injections(
    grid: Grid, gen_dispatch: dict[int, float], loads: dict[int, float]
) -> np.ndarray:
    """Injection vector: +dispatch at generators, -load at load buses.

    Connection buses are pinned at exactly zero.
    """
    p = np.zeros(grid.n_buses)
    for bus, mw in gen_dispatch.items():
        p[bus] += mw
    for bus, mw in loads.items():
        p[bus] -= mw
    for bus in grid.buses_of_type(BusType.CONNECTION):
        p[bus] = 0.0
    return p


@dataclass(frozen=True)
class FlowSolution:
    """Solved DC state: angles (slack pinned at 0) and branch flows."""

    theta: np.ndarray = field(compare=False)
    flows: np.ndarray = field(compare=False)
    slack_bus: int


def _require_connected(grid: Grid) -> None:
    n = grid.n_buses
    if n <= 1:
        return
    rows = [b.from_bus for b in grid.branches]
    cols = [b.to_bus for b in grid.branches]
    adj = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    n_comp, _ = csgraph.connected_components(adj, directed=False)
    if n_comp != 1:
        raise DisconnectedGrid(f"grid splits into {n_comp} components")


def dc_power_flow(
    grid: Grid,
    injections: np.ndarray,
    slack: int,
    default_reactance: float | None = 1.0,
) -> FlowSolution:
    """Solve P = B'theta on a connected grid and read off branch flows.

    The slack bus absorbs the injection residual, so the input does not
    need to balance. Nodal conservation of the returned flows is checked
    to 1e-8 MW; a failure there or a non-finite solve raises
    SingularSystem.
    """
    n = grid.n_buses
    p = np.asarray(injections, dtype=float).copy()
    if p.size != n:
        raise ValueError(f"injection vector length {p.size} != {n} buses")
    if not 0 <= slack < n:
        raise ValueError(f"slack bus {slack} out of range")
    _require_connected(grid)

    p[slack] = 0.0
    p[slack] = -p.sum()

    y = admittance_matrix(grid, default_reactance).tocsc()
    keep = np.arange(n) != slack
    theta = np.zeros(n)
    if n > 1:
        reduced = y[keep][:, keep]
        rhs = p[keep]
        try:
            solution = spla.spsolve(reduced, rhs)
        except Exception as exc:  # SuperLU signals singularity by raising
            raise SingularSystem(str(exc)) from exc
        if not np.all(np.isfinite(solution)):
            raise SingularSystem("non-finite phase angles")
        residual = reduced @ solution - rhs
        scale = max(float(np.abs(rhs).max()), 1.0)
        if float(np.abs(residual).max()) > RESIDUAL_TOL * scale:
            raise SingularSystem("linear solve residual too large")
        theta[keep] = solution

    x = branch_reactances(grid, default_reactance)
    frm = np.array([b.from_bus for b in grid.branches], dtype=np.int64)
    to = np.array([b.to_bus for b in grid.branches], dtype=np.int64)
    flows = (theta[frm] - theta[to]) / x if grid.n_branches else np.zeros(0)

    mismatch = incidence_matrix(grid).T @ flows - p if grid.n_branches else -p
    if float(np.abs(mismatch).max(initial=0.0)) > CONSERVATION_TOL_MW:
        raise SingularSystem("nodal conservation violated after solve")

    theta.flags.writeable = False
    flows.flags.writeable = False
    return FlowSolution(theta=theta, flows=flows, slack_bus=int(slack))


def default_slack(grid: Grid, gen_capacity: dict[int, float]) -> int:
    """Generation bus with the largest capacity; ties to the lowest id."""
    if gen_capacity:
        return min(sorted(gen_capacity), key=lambda b: (-gen_capacity[b], b))
    return 0


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: int
    value: float
    lower: float
    upper: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
        }


@dataclass(frozen=True)
class ConstraintReport:
    violations: tuple[Violation, ...]
    unchecked: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations


def check_constraints(
    gen_dispatch: dict[int, float],
    gen_capacity: dict[int, float],
    loads: dict[int, float],
    load_limits: dict[int, float] | None = None,
    flows: np.ndarray | None = None,
    flow_limit: float | None = None,
    tol: float = 1e-9,
) -> ConstraintReport:
    """List every bound violation; an empty list means feasible.

    Generation dispatch must sit in [0, capacity] per bus, loads in
    [0, limit] when limits are given. Flow checks are skipped and flagged
    "unchecked" when no limit is supplied (transmission limits are out of
    scope for the generator, but files may carry them).
    """
    violations: list[Violation] = []
    unchecked: list[str] = []

    for bus in sorted(gen_dispatch):
        value = gen_dispatch[bus]
        cap = gen_capacity.get(bus, 0.0)
        if value < -tol or value > cap + tol:
            violations.append(Violation("generation", bus, value, 0.0, cap))

    if load_limits is None:
        load_limits = dict(loads)
    for bus in sorted(loads):
        value = loads[bus]
        cap = load_limits.get(bus, value)
        if value < -tol or value > cap + tol:
            violations.append(Violation("load", bus, value, 0.0, cap))

    if flows is None or flow_limit is None:
        unchecked.append("transmission")
    else:
        for branch, flow in enumerate(np.asarray(flows, dtype=float)):
            if abs(flow) > flow_limit + tol:
                violations.append(
                    Violation("flow", branch, float(flow), -flow_limit, flow_limit)
                )

    return ConstraintReport(violations=tuple(violations), unchecked=tuple(unchecked))


@dataclass(frozen=True)
class StatReport:
    """How closely an assignment follows its target table."""

    realized_table: ProbabilityTable
    slot_counts: np.ndarray = field(compare=False)
    target_counts: np.ndarray = field(compare=False)
    conditional_tvd: float
    pearson_rho: float | None
    tail_share: float
    total: float
    predicted_total: float | None
    flags: tuple[str, ...]


def statistical_report(
    assignment: Assignment | dict[int, float],
    grid: Grid,
    target: ProbabilityTable,
    law: ScalingLaw | None = None,
    tail_fraction: float = 0.01,
    matched_counts: np.ndarray | None = None,
) -> StatReport:
    """Score an assignment against the table it was built from.

    Slot counts come from the assignment's own bookkeeping when present
    (they are exact by construction); otherwise they are re-derived by
    binning the actual values, which is the honest check for files of
    unknown origin. A plain bus->MW mapping is accepted in place of an
    Assignment, optionally with explicit matched_counts.
    """
    if isinstance(assignment, Assignment):
        values_map = assignment.values
        if matched_counts is None:
            matched_counts = assignment.matched_counts
    else:
        values_map = dict(assignment)
    ids = sorted(values_map)
    values = np.array([values_map[b] for b in ids])
    degrees = node_degrees(grid)[ids]
    n = len(ids)
    k = target.n_bins

    degree_bins = bin_indices(normalize_values(degrees.astype(float)), target.bin_edges)
    target_counts = np.zeros((k, k), dtype=np.int64)
    for j in np.unique(degree_bins):
        n_j = int((degree_bins == j).sum())
        target_counts[:, j] = largest_remainder_counts(
            conditional_value_distribution(target, int(j)), n_j
        )

    if matched_counts is not None:
        slot_counts = np.asarray(matched_counts, dtype=np.int64)
    else:
        slot_counts = np.zeros((k, k), dtype=np.int64)
        value_bins = bin_indices(normalize_values(values), target.bin_edges)
        np.add.at(slot_counts, (value_bins, degree_bins), 1)

    tvd = float(np.abs(slot_counts - target_counts).sum()) / (2.0 * n)

    flags: list[str] = []
    try:
        rho = pearson_correlation(
            normalize_values(values), normalize_values(degrees.astype(float))
        )
    except ConstantVector:
        rho = None
        flags.append("pearson_undefined")

    _, tail = fit_exponential_with_tail(values, tail_fraction)
    realized = extract_joint_table(values, degrees, target.bin_edges, axis=target.value_axis)

    predicted = evaluate_scaling_law(law, grid.n_buses) if law is not None else None
    return StatReport(
        realized_table=realized,
        slot_counts=slot_counts,
        target_counts=target_counts,
        conditional_tvd=tvd,
        pearson_rho=rho,
        tail_share=len(tail) / n,
        total=float(values.sum()),
        predicted_total=predicted,
        flags=tuple(flags),
    )
