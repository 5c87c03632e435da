"""Shared grid builders and fixtures.

The large fixture is a 2,000-bus preferential-attachment graph whose two
highest-degree hubs are forced into the generation set; that degree
spread keeps the realized value/degree correlation inside the expected
band for the embedded tables.
"""

from __future__ import annotations

import numpy as np
import pytest

import gridseed as gs


def attachment_graph(rng: np.random.Generator, n: int, m: int = 2) -> set[tuple[int, int]]:
    """Undirected preferential-attachment edge set on vertices 0..n-1."""
    edges = {(0, 1)}
    stubs = [0, 1]
    for v in range(2, n):
        picks: set[int] = set()
        tries = 0
        while len(picks) < min(m, v) and tries < 50:
            u = int(stubs[rng.integers(len(stubs))])
            tries += 1
            if u != v:
                picks.add(u)
        for u in picks:
            edges.add((min(u, v), max(u, v)))
            stubs.extend([u, v])
    return edges


def mixed_grid(
    seed: int,
    n: int,
    n_gen: int,
    n_load: int,
    m: int = 2,
    forced_hubs: int = 0,
) -> gs.Grid:
    """Connected grid with randomly chosen G/L buses, rest connection.

    forced_hubs puts that many of the highest-degree vertices into the
    generation set before the random draw.
    """
    rng = np.random.default_rng(seed)
    edges = attachment_graph(rng, n, m)
    degree = np.zeros(n, dtype=int)
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    top = np.argsort(-degree, kind="stable")[:forced_hubs]
    pool = np.setdiff1d(np.arange(n), top)
    gen = np.concatenate([top, rng.choice(pool, size=n_gen - forced_hubs, replace=False)])
    load = rng.choice(np.setdiff1d(np.arange(n), gen), size=n_load, replace=False)
    types = {int(i): gs.BusType.GENERATION for i in gen}
    types.update({int(i): gs.BusType.LOAD for i in load})
    buses = [gs.Bus(id=i, bus_type=types.get(i, gs.BusType.CONNECTION)) for i in range(n)]
    return gs.build_grid(buses, [gs.Branch(a, b) for a, b in sorted(edges)])


def random_connected_grid(rng: np.random.Generator, max_n: int = 50) -> gs.Grid:
    """Small random connected grid with random reactances, for oracles."""
    n = int(rng.integers(2, max_n + 1))
    kinds = (gs.BusType.GENERATION, gs.BusType.LOAD, gs.BusType.CONNECTION)
    buses = [gs.Bus(id=i, bus_type=kinds[rng.integers(3)]) for i in range(n)]
    edges = set()
    for v in range(1, n):
        edges.add((int(rng.integers(0, v)), v))
    for _ in range(int(rng.integers(0, n))):
        a, b = rng.integers(0, n, size=2)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    branches = [
        gs.Branch(a, b, reactance=float(rng.uniform(0.05, 2.0))) for a, b in sorted(edges)
    ]
    return gs.build_grid(buses, branches)


def default_options(seed: int, axis: str) -> gs.AssignmentOptions:
    bundle = gs.generation_defaults() if axis == "gen" else gs.load_defaults()
    return gs.AssignmentOptions(
        seed=seed, scaling_law=bundle.law, value_model=bundle.model, table=bundle.table
    )


@pytest.fixture
def triangle_grid() -> gs.Grid:
    buses = [
        gs.Bus(0, gs.BusType.GENERATION),
        gs.Bus(1, gs.BusType.LOAD),
        gs.Bus(2, gs.BusType.CONNECTION),
    ]
    branches = [gs.Branch(0, 1, 1.0), gs.Branch(1, 2, 1.0), gs.Branch(0, 2, 1.0)]
    return gs.build_grid(buses, branches)


@pytest.fixture(scope="session")
def large_grid() -> gs.Grid:
    return mixed_grid(seed=20250819, n=2000, n_gen=400, n_load=1000, forced_hubs=2)


@pytest.fixture(scope="session")
def small_grid() -> gs.Grid:
    return mixed_grid(seed=99, n=120, n_gen=30, n_load=60, forced_hubs=1)


@pytest.fixture
def case_dir(tmp_path, small_grid):
    """Topology CSVs for the small grid, with non-numeric labels."""
    labels = tuple(f"B{i:04d}" for i in range(small_grid.n_buses))
    gs.write_topology(gs.TopologyData(grid=small_grid, labels=labels), tmp_path)
    return tmp_path
