"""Measurement-side functions: extraction, fitting, histograms."""

import numpy as np
import pytest

import gridseed as gs
from gridseed.errors import (
    CollinearSizes,
    ConstantVector,
    DegenerateInput,
    EmptyInput,
    InsufficientPoints,
    LengthMismatch,
)

EDGES = gs.BIN_EDGES


def test_extract_joint_table_hand_case():
    # normalized values 0.25/0.5/1.0 -> bins 6, 9, 12; degrees 1,1,2 -> bins 9, 9, 12
    values = np.array([25.0, 50.0, 100.0])
    degrees = np.array([1, 1, 2])
    table = gs.extract_joint_table(values, degrees, EDGES)
    expected = np.zeros((13, 13))
    expected[6, 9] = expected[9, 9] = expected[12, 12] = 1 / 3
    assert np.allclose(table.joint, expected)
    assert table.joint.sum() == pytest.approx(1.0, abs=1e-12)


def test_extract_joint_table_errors():
    with pytest.raises(LengthMismatch):
        gs.extract_joint_table(np.ones(3), np.ones(2), EDGES)
    with pytest.raises(DegenerateInput):
        gs.extract_joint_table(np.array([]), np.array([]), EDGES)
    with pytest.raises(DegenerateInput):
        gs.extract_joint_table(np.zeros(3), np.ones(3), EDGES)
    with pytest.raises(DegenerateInput):
        gs.extract_joint_table(np.ones(3), np.zeros(3), EDGES)


def test_pearson_correlation_hand_cases():
    x = np.array([1.0, 2.0, 3.0])
    assert gs.pearson_correlation(x, 2 * x) == pytest.approx(1.0)
    assert gs.pearson_correlation(x, -x) == pytest.approx(-1.0)
    assert abs(gs.pearson_correlation([1, 2, 3, 4], [1, -1, 1, -1])) < 0.5
    with pytest.raises(ConstantVector):
        gs.pearson_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ConstantVector):
        gs.pearson_correlation([1.0], [2.0])


def test_fit_exponential_tail_split():
    # three values, tail_fraction 0.34: round(1.02) = 1 tail value
    beta, tail = gs.fit_exponential_with_tail(np.array([1.0, 2.0, 100.0]), 0.34)
    assert tail == (2,)
    assert beta == pytest.approx(1.5)
    # disabled tail: plain mean
    beta, tail = gs.fit_exponential_with_tail(np.array([1.0, 2.0, 100.0]), 0.0)
    assert tail == ()
    assert beta == pytest.approx(103.0 / 3.0)
    with pytest.raises(EmptyInput):
        gs.fit_exponential_with_tail(np.array([]), 0.01)
    with pytest.raises(ValueError):
        gs.fit_exponential_with_tail(np.ones(3), 1.0)


def test_fit_round_trips_the_sampler():
    model = gs.TailedExponentialModel(beta=42.51)
    sample = gs.sample_tailed_exponential(10_000, model, seed=12345)
    beta, tail = gs.fit_exponential_with_tail(sample.values, 0.01)
    assert set(tail) == set(sample.tail_indices)
    assert beta == pytest.approx(42.51, abs=1.0)


def test_fit_scaling_law_exact_on_planted_points():
    law = gs.ScalingLaw(a=-0.21, b=2.06, c=0.66)
    points = [(n, gs.evaluate_scaling_law(law, n)) for n in (10, 50, 200, 1000, 5000)]
    fit = gs.fit_scaling_law(points)
    assert fit.a == pytest.approx(law.a, abs=1e-9)
    assert fit.b == pytest.approx(law.b, abs=1e-9)
    assert fit.c == pytest.approx(law.c, abs=1e-9)


def test_fit_scaling_law_input_guards():
    with pytest.raises(InsufficientPoints):
        gs.fit_scaling_law([(10, 100.0), (20, 200.0)])
    with pytest.raises(CollinearSizes):
        gs.fit_scaling_law([(10, 100.0), (10, 110.0), (20, 200.0)])
    with pytest.raises(ValueError):
        gs.fit_scaling_law([(1, 100.0), (10, 200.0), (20, 300.0)])


def test_empirical_pdf_integrates_to_one():
    rng = np.random.default_rng(5)
    values = rng.exponential(40.0, size=2000)
    hist = gs.empirical_pdf(values, bin_count=30)
    widths = np.diff(hist.edges)
    assert float((hist.densities * widths).sum()) == pytest.approx(1.0, abs=1e-9)
    assert hist.counts.sum() == 2000
    with pytest.raises(EmptyInput):
        gs.empirical_pdf([], 10)
    with pytest.raises(DegenerateInput):
        gs.empirical_pdf([0.0, 0.0], 10)
    with pytest.raises(ValueError):
        gs.empirical_pdf([1.0], 0)


def test_empirical_pdf_decays_for_exponential_data():
    rng = np.random.default_rng(11)
    values = rng.exponential(40.0, size=50_000)
    hist = gs.empirical_pdf(values, bin_count=20)
    # first quarter of the support must carry more density than the last
    q = len(hist.densities) // 4
    assert hist.densities[:q].mean() > 10 * hist.densities[-q:].mean()


def test_measure_axis_full_report():
    model = gs.TailedExponentialModel(beta=42.51)
    sample = gs.sample_tailed_exponential(2_000, model, seed=9)
    rng = np.random.default_rng(9)
    degrees = rng.integers(1, 20, size=2_000)
    report = gs.measure_axis(sample.values, degrees, EDGES, gs.ValueAxis.GENERATION)
    assert report.fitted_beta == pytest.approx(42.51, abs=3.0)
    assert report.tail_share == pytest.approx(0.01, abs=0.001)
    assert -1.0 <= report.pearson_rho <= 1.0
    assert report.joint_table.joint.sum() == pytest.approx(1.0, abs=1e-12)


def test_case_snapshot_guards(triangle_grid):
    snapshot = gs.CaseSnapshot(
        grid=triangle_grid, gen_capacity={0: 10.0}, load={1: 5.0}
    )
    values, degrees = snapshot.axis_values(gs.ValueAxis.GENERATION)
    assert values.tolist() == [10.0]
    assert degrees.tolist() == [2]
    with pytest.raises(LengthMismatch):
        gs.CaseSnapshot(grid=triangle_grid, gen_capacity={}, load={1: 5.0})
    with pytest.raises(DegenerateInput):
        gs.CaseSnapshot(grid=triangle_grid, gen_capacity={0: -1.0}, load={1: 5.0})
