"""Transmission network model: buses, branches, degrees, admittance.

The grid is an undirected multigraph. Node degree counts *distinct*
neighbors (the adjacency is binary), while every parallel branch still
contributes its own admittance. All functions here are pure; a built
:class:`Grid` is immutable and safe to share between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    AllZeroDegrees,
    DanglingBranchEndpoint,
    DuplicateBusId,
    MissingImpedance,
    SelfLoop,
)


class BusType(enum.Enum):
    GENERATION = "G"
    LOAD = "L"
    CONNECTION = "C"


@dataclass(frozen=True)
class Bus:
    """A network node. Ids are dense 0-based integers."""

    id: int
    bus_type: BusType


@dataclass(frozen=True)
class Branch:
    """An undirected transmission line or transformer.

    ``reactance`` is the per-unit series reactance; ``None`` means the
    source data carried no impedance (power-flow code may substitute a
    unit reactance).
    """

    from_bus: int
    to_bus: int
    reactance: float | None = None


@dataclass(frozen=True)
class Grid:
    """A validated network. Construct through :func:`build_grid`."""

    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...]
    _degrees: np.ndarray = field(repr=False, compare=False)

    @property
    def n_buses(self) -> int:
        return len(self.buses)

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    def buses_of_type(self, bus_type: BusType) -> list[int]:
        """Bus ids of one type, ascending."""
        return [b.id for b in self.buses if b.bus_type is bus_type]


def build_grid(buses: Iterable[Bus], branches: Iterable[Branch]) -> Grid:
    """Validate bus/branch lists and assemble an immutable Grid.

    Raises DuplicateBusId, DanglingBranchEndpoint or SelfLoop on broken
    topology. Bus ids must form the dense range [0, N).
    """
    bus_tuple = tuple(buses)
    branch_tuple = tuple(branches)

    n = len(bus_tuple)
    seen: set[int] = set()
    for bus in bus_tuple:
        if bus.id in seen:
            raise DuplicateBusId(f"bus id {bus.id} appears more than once")
        seen.add(bus.id)
    if seen and (min(seen) != 0 or max(seen) != n - 1):
        raise DanglingBranchEndpoint(
            f"bus ids must form the dense range [0, {n}), got {sorted(seen)[:5]}..."
        )

    for branch in branch_tuple:
        if branch.from_bus == branch.to_bus:
            raise SelfLoop(f"branch {branch.from_bus}-{branch.to_bus} is a self-loop")
        for end in (branch.from_bus, branch.to_bus):
            if not 0 <= end < n:
                raise DanglingBranchEndpoint(
                    f"branch endpoint {end} references no bus (N={n})"
                )
        if branch.reactance is not None and branch.reactance <= 0:
            raise ValueError(
                f"branch {branch.from_bus}-{branch.to_bus} has nonpositive reactance"
            )

    degrees = _distinct_neighbor_degrees(n, branch_tuple)
    return Grid(buses=bus_tuple, branches=branch_tuple, _degrees=degrees)


def _distinct_neighbor_degrees(n: int, branches: Sequence[Branch]) -> np.ndarray:
    edges = {frozenset((b.from_bus, b.to_bus)) for b in branches}
    degrees = np.zeros(n, dtype=np.int64)
    for edge in edges:
        i, j = tuple(edge)
        degrees[i] += 1
        degrees[j] += 1
    degrees.flags.writeable = False
    return degrees


def node_degrees(grid: Grid) -> np.ndarray:
    """Degree of every bus: number of distinct neighbors.

    Parallel branches between the same pair count once.
    """
    return grid._degrees


def normalized_degrees(grid: Grid, subset: Sequence[int]) -> np.ndarray:
    """Degrees of ``subset`` divided by the subset maximum.

    The result lies in [0, 1] and attains 1.0 at an argmax entry.
    Raises AllZeroDegrees if every bus in the subset is isolated.
    """
    if len(subset) == 0:
        raise AllZeroDegrees("empty bus subset")
    degrees = grid._degrees[np.asarray(subset, dtype=np.int64)]
    top = degrees.max()
    if top == 0:
        raise AllZeroDegrees("all buses in the subset have degree 0")
    return degrees / top


def incidence_matrix(grid: Grid) -> sp.csr_matrix:
    """Branch-bus incidence (M x N): +1 at from_bus, -1 at to_bus."""
    m, n = grid.n_branches, grid.n_buses
    rows = np.repeat(np.arange(m), 2)
    cols = np.empty(2 * m, dtype=np.int64)
    data = np.empty(2 * m)
    for l, branch in enumerate(grid.branches):
        cols[2 * l], cols[2 * l + 1] = branch.from_bus, branch.to_bus
        data[2 * l], data[2 * l + 1] = 1.0, -1.0
    return sp.csr_matrix((data, (rows, cols)), shape=(m, n))


def branch_reactances(grid: Grid, default: float | None = None) -> np.ndarray:
    """Per-branch reactance vector, substituting ``default`` where missing.

    Raises MissingImpedance if a branch lacks reactance and no default is
    given.
    """
    x = np.empty(grid.n_branches)
    for l, branch in enumerate(grid.branches):
        if branch.reactance is not None:
            x[l] = branch.reactance
        elif default is not None:
            x[l] = default
        else:
            raise MissingImpedance(
                f"branch {branch.from_bus}-{branch.to_bus} has no reactance"
            )
    return x


def admittance_matrix(grid: Grid, default_reactance: float | None = None) -> sp.csr_matrix:
    """Weighted Laplacian Y = A^T diag(1/x) A with A the incidence matrix.

    Symmetric, rows sum to zero (no shunts); off-diagonal Y_ij is minus
    the summed susceptance of every branch joining i and j, so parallel
    branches stack.
    """
    x = branch_reactances(grid, default_reactance)
    inc = incidence_matrix(grid)
    y = inc.T @ sp.diags(1.0 / x) @ inc
    return sp.csr_matrix(y)
