"""
Tests for frequency grids, transforms, convolution and report writers
"""

import json
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.utils.errors import ConvolutionSupportError, InvalidArgumentError
from src.utils.grids import (
    FrequencyGrid,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    l2_norm,
    make_symmetric_grid,
    quadrature,
    quadrature2d,
    reflect,
)
from src.utils.reports import CSV_COLUMNS, FIT_COLUMNS, build_report, fit_log_slope, write_report
from src.utils.transforms import convolve, convolve2d, dft_forward, dft_inverse


def test_grid_nodes_and_spacing():
    grid = FrequencyGrid.from_spacing(1.0, 0.25, 9)
    assert grid.xi_max == pytest.approx(3.0)
    assert grid.spacing == pytest.approx(0.25)
    assert grid.nodes[4] == pytest.approx(2.0)
    assert grid.index_of(2.3) == 5


def test_symmetric_grid_has_exact_zero():
    grid = make_symmetric_grid(5.0, 101)
    nodes = grid.nodes
    assert nodes[50] == 0.0
    assert np.array_equal(nodes, -nodes[::-1])
    assert grid.is_aligned()


def test_grid_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        FrequencyGrid(1.0, 1.0, 10)
    with pytest.raises(InvalidArgumentError):
        FrequencyGrid(0.0, 1.0, 1)
    with pytest.raises(InvalidArgumentError):
        make_symmetric_grid(1.0, 10)
    with pytest.raises(InvalidArgumentError):
        FrequencyGrid.from_spacing(0.0, -1.0, 5)


def test_indicator_includes_endpoints():
    grid = FrequencyGrid(-2.0, 2.0, 401)
    chi = grid.indicator(0.0, 1.0)
    assert chi.sum() == 101


def test_hermitian_check_for_real_origin_fields():
    grid = make_symmetric_grid(1.0, 11)
    xi = grid.nodes
    SpectralField(grid, np.exp(-xi ** 2) + 1j * xi, real_origin=True)
    with pytest.raises(InvalidArgumentError):
        SpectralField(grid, np.exp(-(xi - 0.3) ** 2), real_origin=True)


def test_field_values_are_read_only():
    grid = FrequencyGrid(0.0, 1.0, 5)
    field = SpectralField(grid, np.ones(5))
    with pytest.raises(ValueError):
        field.values[0] = 2.0


def test_quadrature_of_gaussian():
    grid = make_symmetric_grid(10.0, 2001)
    field = SpectralField.from_function(grid, lambda xi: np.exp(-xi ** 2))
    assert quadrature(field).real == pytest.approx(np.sqrt(np.pi), rel=1e-10)


def test_dft_of_gaussian_matches_transform():
    period, n = 40.0, 256
    x = np.arange(n) * period / n
    x = np.where(x > period / 2, x - period, x)
    field = dft_forward(np.exp(-x ** 2), period)
    xi = field.grid.nodes
    expected = np.sqrt(np.pi) * np.exp(-xi ** 2 / 4.0)
    assert np.max(np.abs(field.values - expected)) < 1e-10
    assert xi[n // 2] == pytest.approx(0.0, abs=1e-12)


def test_dft_inverse_recovers_samples():
    rng = np.random.default_rng(3)
    samples = rng.standard_normal(64)
    field = dft_forward(samples, 2.0 * np.pi)
    assert np.allclose(dft_inverse(field, 64), samples, atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        dft_inverse(field, 32)


@pytest.mark.parametrize("n", [8, 9, 64, 255, 1000, 4096])
def test_dft_round_trip_across_sizes(n):
    rng = np.random.default_rng(n)
    samples = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    back = dft_inverse(dft_forward(samples, 3.0), n)
    assert np.max(np.abs(back - samples)) <= 1e-12 * np.max(np.abs(samples))


def test_dft_of_cosine_has_spikes_only_at_plus_minus_one():
    n = 64
    x = np.arange(n) * 2.0 * np.pi / n
    field = dft_forward(np.cos(x), 2.0 * np.pi)
    xi = field.grid.nodes
    spikes = np.abs(field.values) > 1e-9
    assert sorted(np.round(xi[spikes]).tolist()) == [-1.0, 1.0]
    assert np.allclose(field.values[spikes], np.pi)
    constant = dft_forward(np.ones(n), 2.0 * np.pi)
    assert np.round(constant.grid.nodes[np.abs(constant.values) > 1e-9]).tolist() == [0.0]


def test_convolution_of_gaussians():
    grid = make_symmetric_grid(10.0, 2001)
    f = SpectralField.from_function(grid, lambda xi: np.exp(-xi ** 2))
    out = convolve(f, f)
    assert out.grid == grid
    expected = np.sqrt(np.pi / 2.0) * np.exp(-grid.nodes ** 2 / 2.0)
    assert np.max(np.abs(out.values - expected)) < 1e-8


def test_convolution_on_sum_grid():
    a = FrequencyGrid.from_spacing(1.0, 0.01, 101)
    b = FrequencyGrid.from_spacing(-2.0, 0.01, 51)
    out = convolve(SpectralField(a, np.ones(101)), SpectralField(b, np.ones(51)), span="sum")
    assert out.grid.n_nodes == 151
    assert out.grid.xi_min == pytest.approx(-1.0)
    # total mass is the product of the two masses
    assert out.values.sum().real * 0.01 == pytest.approx(101 * 51 * 0.01 * 0.01)


def test_convolution_rejects_mass_loss_and_spacing_mismatch():
    grid = make_symmetric_grid(10.0, 201)
    box = SpectralField(grid, grid.indicator(5.0, 9.0))
    with pytest.raises(ConvolutionSupportError):
        convolve(box, box)
    other = SpectralField(FrequencyGrid.from_spacing(0.0, 0.3, 10), np.ones(10))
    with pytest.raises(InvalidArgumentError):
        convolve(box, other)


def test_convolution_needs_one_grid_unless_the_sum_span_is_requested():
    a = FrequencyGrid.from_spacing(1.0, 0.01, 101)
    b = FrequencyGrid.from_spacing(-2.0, 0.01, 51)
    f, g = SpectralField(a, np.ones(101)), SpectralField(b, np.ones(51))
    with pytest.raises(InvalidArgumentError):
        convolve(f, g)
    with pytest.raises(InvalidArgumentError):
        convolve(f, f, span="window")
    # sum span on one grid keeps the whole sum set
    assert convolve(f, f, span="sum").grid.n_nodes == 201


def compact_random(grid, rng, half_width, hermitian=False):
    inside = np.abs(grid.nodes) <= half_width
    values = (rng.standard_normal(grid.n_nodes) + 1j * rng.standard_normal(grid.n_nodes)) * inside
    if hermitian:
        values = 0.5 * (values + np.conj(values[::-1]))
    return SpectralField(grid, values, real_origin=hermitian)


def test_convolution_is_bilinear_and_commutative():
    rng = np.random.default_rng(11)
    grid = make_symmetric_grid(10.0, 401)
    f, g, h = (compact_random(grid, rng, 4.0) for _ in range(3))
    fg = convolve(f, g).values
    scale = np.max(np.abs(fg))
    combined = convolve(f.with_values(2.0 * f.values + 3.0 * h.values), g).values
    assert np.max(np.abs(combined - (2.0 * fg + 3.0 * convolve(h, g).values))) <= 1e-12 * 5.0 * scale
    assert np.max(np.abs(convolve(g, f).values - fg)) <= 1e-12 * scale


def test_convolution_preserves_hermitian_symmetry():
    rng = np.random.default_rng(12)
    grid = make_symmetric_grid(10.0, 401)
    f = compact_random(grid, rng, 4.0, hermitian=True)
    g = compact_random(grid, rng, 3.0, hermitian=True)
    out = convolve(f, g)
    assert out.real_origin
    assert np.max(np.abs(out.values - np.conj(out.values[::-1]))) <= 1e-12 * np.max(np.abs(out.values))


def test_quadrature_of_convolution_is_product_of_quadratures():
    rng = np.random.default_rng(13)
    grid = make_symmetric_grid(10.0, 401)
    f = compact_random(grid, rng, 4.0)
    g = compact_random(grid, rng, 4.0)
    expected = quadrature(f) * quadrature(g)
    assert abs(quadrature(convolve(f, g)) - expected) <= 1e-6 * abs(expected)
    boxes = SpectralField(grid, grid.indicator(-1.0, 1.0))
    assert quadrature(convolve(boxes, boxes)).real == pytest.approx(quadrature(boxes).real ** 2, rel=1e-6)


def test_convolve2d_is_commutative_and_keeps_shear():
    rng = np.random.default_rng(1)
    tau_a = FrequencyGrid.from_spacing(-1.0, 0.1, 21)
    tau_b = FrequencyGrid.from_spacing(-0.5, 0.1, 11)
    xi_a = FrequencyGrid.from_spacing(2.0, 0.05, 9)
    xi_b = FrequencyGrid.from_spacing(-1.0, 0.05, 7)
    f = SpaceTimeField(SpaceTimeGrid(tau_a, xi_a, 3.0), rng.random((21, 9)))
    g = SpaceTimeField(SpaceTimeGrid(tau_b, xi_b, 3.0), rng.random((11, 7)))
    fg = convolve2d(f, g, span="sum")
    gf = convolve2d(g, f, span="sum")
    assert fg.grid.shear == 3.0
    assert fg.grid.shape == (31, 15)
    assert np.allclose(fg.values, gf.values, atol=1e-13)
    assert quadrature2d(fg).real > 0
    with pytest.raises(InvalidArgumentError):
        convolve2d(f, SpaceTimeField(SpaceTimeGrid(tau_b, xi_b, 0.0), g.values), span="sum")
    with pytest.raises(InvalidArgumentError):
        convolve2d(f, g)


def test_reflection_negates_both_variables():
    tau = FrequencyGrid.from_spacing(1.0, 0.5, 3)
    xi = FrequencyGrid.from_spacing(4.0, 1.0, 2)
    field = SpaceTimeField(SpaceTimeGrid(tau, xi, 2.0), np.arange(6).reshape(3, 2))
    mirrored = reflect(field)
    assert np.allclose(mirrored.grid.physical_tau(), -field.grid.physical_tau()[::-1, ::-1])
    assert mirrored.values[0, 0] == field.values[-1, -1]
    assert l2_norm(mirrored) == pytest.approx(l2_norm(field))


def test_l2_norm_ignores_infinite_weight_on_zero_values():
    grid = make_symmetric_grid(1.0, 21)
    values = np.where(grid.nodes == 0.0, 0.0, 1.0)
    weights = np.where(grid.nodes == 0.0, np.inf, 1.0)
    assert np.isfinite(l2_norm(SpectralField(grid, values), weights))


def test_fit_recovers_power_law():
    points = [(n, 3.0 * n ** 0.8) for n in (16, 32, 64, 128)]
    slope, intercept, residual = fit_log_slope(points)
    assert slope == pytest.approx(0.8)
    assert intercept == pytest.approx(np.log(3.0))
    assert residual < 1e-12
    with pytest.raises(InvalidArgumentError):
        fit_log_slope(points[:2])


def test_report_marks_noisy_fits_unreliable():
    points = [(16, 1.0), (32, 10.0), (64, 0.5), (128, 8.0)]
    report = build_report("noisy", points, 0.0, lambda slope: True)
    assert not report.reliable


def test_csv_report_layout_and_determinism(tmp_path):
    report = build_report("sweep", [(32, 2.0), (16, 1.0), (64, 4.0)], 1.0, lambda slope: slope > 0.9)
    assert report.points[0][0] == 16.0
    config = {"B_KEY": "2", "A_KEY": "1"}
    path = write_report(report, str(tmp_path / "a"), "csv", config)
    again = write_report(report, str(tmp_path / "b"), "csv", config)
    with open(path, "rb") as f1, open(again, "rb") as f2:
        assert f1.read() == f2.read()
    lines = open(path, encoding="utf-8").read().splitlines()
    assert lines[0] == "# A_KEY=1"
    assert lines[1] == "# B_KEY=2"
    assert lines[2] == ",".join(CSV_COLUMNS)
    assert lines[6] == ",".join(FIT_COLUMNS)
    assert lines[7].startswith("fit,")
    assert lines[7].split(",")[4] == "True"


def test_json_report_embeds_config(tmp_path):
    report = build_report("sweep", [(16, 1.0), (32, 2.0), (64, 4.0)], 1.0, lambda slope: True, details={"s": -0.8})
    path = write_report(report, str(tmp_path), "json", {"RUN_SEED": "0"})
    document = json.load(open(path, encoding="utf-8"))
    assert document["config"] == {"RUN_SEED": "0"}
    assert document["pass"] is True
    assert document["fitted_slope"] == pytest.approx(1.0)
    assert document["details"]["s"] == -0.8
    with pytest.raises(InvalidArgumentError):
        write_report(report, str(tmp_path), "xml", {})
