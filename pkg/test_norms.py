"""
Tests for the H^s and X^{s,b} norms
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.models.dispersion import DispersionParams, equivalence_constant, gamma
from src.models.norms import (
    NormIndices,
    frequency_weight,
    hs_norm,
    hs_norm_torus,
    xsb_apply_weight,
    xsb_norm,
    xsb_unapply_weight,
    xsb_weight,
)
from src.solvers.picard import picard_solve
from src.solvers.torus import SolverConfig, TorusGrid, spectral_bump
from src.utils.errors import InvalidArgumentError
from src.utils.grids import (
    FrequencyGrid,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    l2_norm,
    make_symmetric_grid,
)

PLUS = DispersionParams(1)


@pytest.fixture
def space_time_field():
    rng = np.random.default_rng(7)
    grid = SpaceTimeGrid(FrequencyGrid(-40.0, 40.0, 161), FrequencyGrid(-3.0, 3.0, 121))
    return SpaceTimeField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def test_unit_indicator_has_unit_l2_norm():
    grid = FrequencyGrid(-2.0, 2.0, 4001)
    field = SpectralField(grid, grid.indicator(0.0, 1.0))
    assert hs_norm(field, 0.0) == pytest.approx(1.0, abs=1e-3)


def test_gaussian_norm_and_monotonicity_in_s():
    grid = make_symmetric_grid(12.0, 2401)
    field = SpectralField.from_function(grid, lambda xi: np.exp(-xi ** 2))
    assert hs_norm(field, 0.0) == pytest.approx((np.pi / 2.0) ** 0.25, rel=1e-10)
    norms = [hs_norm(field, s) for s in (-2.0, -1.0, 0.0, 1.0, 2.0)]
    assert all(a < b for a, b in zip(norms, norms[1:]))


def test_torus_norm_of_constant_and_stacks():
    torus = TorusGrid(2.0 * np.pi * 8, 64)
    ones = torus.from_physical(np.ones(64))
    assert hs_norm_torus(ones, torus, 3.0) == pytest.approx(np.sqrt(2.0 * np.pi * torus.period))
    stacked = hs_norm_torus(np.stack([ones, 2.0 * ones]), torus, 0.0)
    assert stacked.shape == (2,)
    assert stacked[1] == pytest.approx(2.0 * stacked[0])


def test_torus_norm_is_a_riemann_sum_of_the_line_norm():
    torus = TorusGrid(2.0 * np.pi * 8, 256)
    coefficients = torus.sample_spectrum(lambda xi: np.exp(-xi ** 2))
    line = make_symmetric_grid(12.0, 2401)
    field = SpectralField.from_function(line, lambda xi: np.exp(-xi ** 2))
    assert hs_norm_torus(coefficients, torus, 0.0) == pytest.approx(hs_norm(field, 0.0), rel=1e-8)
    # the bracket weight has a kink at 0, so the agreement is only second order
    for s in (-1.0, 1.5):
        assert hs_norm_torus(coefficients, torus, s) == pytest.approx(hs_norm(field, s), rel=1e-2)


def test_frequency_weights():
    assert frequency_weight(3.0, 2.0) == pytest.approx(16.0)
    assert frequency_weight(np.array([2.0]), -1.0, "homogeneous")[0] == pytest.approx(0.5)
    assert np.isinf(frequency_weight(np.array([0.0]), -0.5, "homogeneous")[0])
    with pytest.raises(InvalidArgumentError):
        frequency_weight(1.0, 1.0, "sobolev")


def test_weight_is_the_frequency_weight_on_the_characteristic_curve():
    xi = FrequencyGrid(0.5, 2.5, 5)
    tau = FrequencyGrid(-1.0, 1.0, 3)
    grid = SpaceTimeGrid(tau, xi)
    weight = xsb_weight(grid, 1.0, 0.7, PLUS)
    assert weight[1, 0] == pytest.approx((1.0 + gamma(0.5, PLUS)) ** 0.7 * 1.5)
    on_curve = SpaceTimeGrid(
        FrequencyGrid(gamma(2.0, PLUS), gamma(2.0, PLUS) + 1.0, 2), FrequencyGrid(2.0, 3.0, 2)
    )
    assert xsb_weight(on_curve, 1.0, 0.7, PLUS)[0, 0] == pytest.approx(3.0)


def test_apply_and_unapply_are_inverse(space_time_field):
    weighted = xsb_apply_weight(space_time_field, -0.8, 0.55, PLUS, "rho", "bracket")
    restored = xsb_unapply_weight(weighted, -0.8, 0.55, PLUS, "rho", "bracket")
    assert np.allclose(restored.values, space_time_field.values, rtol=1e-12)


def test_zero_indices_give_the_l2_norm(space_time_field):
    assert xsb_norm(space_time_field, 0.0, 0.0, PLUS) == pytest.approx(l2_norm(space_time_field))


def test_rho_and_gamma_weights_give_equivalent_norms(space_time_field):
    for params in (DispersionParams(1), DispersionParams(-1)):
        for b in (0.4, 0.55, -0.3):
            ratio = xsb_norm(space_time_field, 0.5, b, params, "rho") / xsb_norm(space_time_field, 0.5, b, params, "gamma")
            c = equivalence_constant(params) ** abs(b)
            assert 1.0 / c <= ratio <= c


def test_unknown_weight_variant_raises(space_time_field):
    with pytest.raises(InvalidArgumentError):
        xsb_norm(space_time_field, 0.0, 0.5, PLUS, "cubic")


def test_norm_indices_check_the_output_index():
    assert NormIndices(-0.8).b == 0.0
    assert NormIndices(-0.8, 0.55, 0.4).a == 0.4
    with pytest.raises(InvalidArgumentError):
        NormIndices(0.0, 0.55, 0.5)
    with pytest.raises(InvalidArgumentError):
        NormIndices(0.0, 0.55, -0.1)


def test_hs_norm_along_a_trajectory_is_continuous_in_time():
    grid = TorusGrid(2.0 * np.pi * 8, 128)
    phi = spectral_bump(grid, 0.3, 2.0, 0.01)
    psi = np.zeros(grid.n_modes, dtype=complex)
    jumps = []
    for n_nodes in (21, 41):
        trajectory = picard_solve(phi, psi, grid, PLUS, SolverConfig(T=0.5, n_time_nodes=n_nodes))
        norms = trajectory.hs_norms(0.0)
        assert norms[0] == pytest.approx(0.01)
        dt = trajectory.times[1] - trajectory.times[0]
        jump = float(np.max(np.abs(np.diff(norms))))
        # |d/dt ||u||| <= ||u_t|| <= gamma(2) ||phi|| on this data
        assert jump <= 8.0 * dt * 0.01
        jumps.append(jump)
    assert jumps[1] <= 0.6 * jumps[0]
