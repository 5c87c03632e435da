"""Grid construction, degrees, and matrix assembly."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gridseed as gs
from gridseed.errors import (
    AllZeroDegrees,
    DanglingBranchEndpoint,
    DuplicateBusId,
    MissingImpedance,
    SelfLoop,
)
from gridseed.topology import branch_reactances, incidence_matrix

from conftest import random_connected_grid


def _path3():
    buses = [
        gs.Bus(0, gs.BusType.GENERATION),
        gs.Bus(1, gs.BusType.LOAD),
        gs.Bus(2, gs.BusType.CONNECTION),
    ]
    return gs.build_grid(buses, [gs.Branch(0, 1), gs.Branch(1, 2)])


def test_build_minimal_path():
    grid = _path3()
    assert grid.n_buses == 3
    assert grid.n_branches == 2
    assert grid.buses_of_type(gs.BusType.GENERATION) == [0]
    assert grid.buses_of_type(gs.BusType.LOAD) == [1]


def test_duplicate_bus_id():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(0, gs.BusType.LOAD)]
    with pytest.raises(DuplicateBusId):
        gs.build_grid(buses, [])


def test_non_dense_ids_rejected():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(2, gs.BusType.LOAD)]
    with pytest.raises(DanglingBranchEndpoint):
        gs.build_grid(buses, [])


def test_branch_endpoint_out_of_range():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    with pytest.raises(DanglingBranchEndpoint):
        gs.build_grid(buses, [gs.Branch(0, 5)])


def test_self_loop_rejected():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    with pytest.raises(SelfLoop):
        gs.build_grid(buses, [gs.Branch(1, 1)])


def test_nonpositive_reactance_rejected():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    with pytest.raises(ValueError):
        gs.build_grid(buses, [gs.Branch(0, 1, reactance=0.0)])
    with pytest.raises(ValueError):
        gs.build_grid(buses, [gs.Branch(0, 1, reactance=-1.0)])


def test_parallel_branches_count_one_neighbor():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    grid = gs.build_grid(buses, [gs.Branch(0, 1, 1.0), gs.Branch(0, 1, 1.0)])
    assert grid.n_branches == 2
    assert gs.node_degrees(grid).tolist() == [1, 1]
    # both branches still carry admittance
    y = gs.admittance_matrix(grid).toarray()
    assert np.allclose(y, [[2.0, -2.0], [-2.0, 2.0]])


def test_degrees_ignore_orientation():
    # branch direction must not matter for the neighbor count
    buses = [gs.Bus(i, gs.BusType.CONNECTION) for i in range(3)]
    forward = gs.build_grid(buses, [gs.Branch(0, 1), gs.Branch(1, 2)])
    backward = gs.build_grid(buses, [gs.Branch(1, 0), gs.Branch(2, 1)])
    assert gs.node_degrees(forward).tolist() == gs.node_degrees(backward).tolist()


@settings(max_examples=60, derandomize=True)
@given(st.integers(min_value=0, max_value=10_000))
def test_degree_handshake(seed):
    grid = random_connected_grid(np.random.default_rng(seed), max_n=30)
    distinct = {(min(b.from_bus, b.to_bus), max(b.from_bus, b.to_bus)) for b in grid.branches}
    assert gs.node_degrees(grid).sum() == 2 * len(distinct)


def test_node_degrees_read_only():
    grid = _path3()
    with pytest.raises(ValueError):
        gs.node_degrees(grid)[0] = 99


def test_normalized_degrees_subset_max():
    grid = _path3()
    norm = gs.normalized_degrees(grid, [0, 1])
    # subset max is bus 1 with degree 2
    assert norm.tolist() == [0.5, 1.0]
    full = gs.normalized_degrees(grid, [0, 1, 2])
    assert full.max() == 1.0


def test_normalized_degrees_all_zero():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    grid = gs.build_grid(buses, [])
    with pytest.raises(AllZeroDegrees):
        gs.normalized_degrees(grid, [0, 1])
    with pytest.raises(AllZeroDegrees):
        gs.normalized_degrees(grid, [])


def test_admittance_single_branch():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    grid = gs.build_grid(buses, [gs.Branch(0, 1, 0.5)])
    assert np.allclose(gs.admittance_matrix(grid).toarray(), [[2, -2], [-2, 2]])


def test_admittance_path():
    buses = [gs.Bus(i, gs.BusType.CONNECTION) for i in range(3)]
    grid = gs.build_grid(buses, [gs.Branch(0, 1, 1.0), gs.Branch(1, 2, 1.0)])
    y = gs.admittance_matrix(grid).toarray()
    assert np.allclose(np.diag(y), [1, 2, 1])
    assert y[0, 1] == y[1, 0] == -1.0
    assert y[1, 2] == y[2, 1] == -1.0


def test_admittance_triangle_row_sums(triangle_grid):
    y = gs.admittance_matrix(triangle_grid).toarray()
    assert np.allclose(y.sum(axis=1), 0.0)
    assert np.allclose(y, y.T)


def test_incidence_matrix_signs(triangle_grid):
    inc = incidence_matrix(triangle_grid).toarray()
    assert inc.shape == (3, 3)
    for row, branch in zip(inc, triangle_grid.branches):
        assert row[branch.from_bus] == 1.0
        assert row[branch.to_bus] == -1.0
        assert row.sum() == 0.0


def test_missing_reactance():
    buses = [gs.Bus(0, gs.BusType.GENERATION), gs.Bus(1, gs.BusType.LOAD)]
    grid = gs.build_grid(buses, [gs.Branch(0, 1)])
    with pytest.raises(MissingImpedance):
        branch_reactances(grid, default=None)
    assert branch_reactances(grid, default=1.0).tolist() == [1.0]


@settings(max_examples=40, derandomize=True)
@given(st.integers(min_value=0, max_value=10_000))
def test_admittance_is_weighted_laplacian(seed):
    grid = random_connected_grid(np.random.default_rng(seed), max_n=20)
    y = gs.admittance_matrix(grid).toarray()
    assert np.allclose(y, y.T)
    assert np.allclose(y.sum(axis=1), 0.0, atol=1e-12)
    eigenvalues = np.linalg.eigvalsh(y)
    assert eigenvalues.min() > -1e-9
