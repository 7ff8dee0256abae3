"""
Tests for the dispersion symbols and the sandwich / equivalence bounds
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.models.dispersion import (
    DispersionParams,
    bracket,
    equivalence_constant,
    gamma,
    multiplier,
    rho,
    sandwich_gap_bound,
    symbol_equivalence_ratio,
)
from src.utils.errors import InvalidArgumentError

PLUS = DispersionParams(1)
MINUS = DispersionParams(-1)


def test_params_accept_only_unit_beta():
    for bad in (0, 2, True, 1.5):
        with pytest.raises(InvalidArgumentError):
            DispersionParams(bad)
    assert DispersionParams().beta == 1


def test_gamma_values():
    assert gamma(0.0, PLUS) == 0.0
    assert gamma(1.0, PLUS) == pytest.approx(1.0)
    assert gamma(2.0, PLUS) == pytest.approx(2.0 * np.sqrt(13.0))
    assert gamma(2.0, MINUS) == pytest.approx(2.0 * np.sqrt(21.0))
    assert gamma(-2.0, PLUS) == gamma(2.0, PLUS)
    assert isinstance(gamma(1.0, PLUS), float)
    assert gamma(np.array([1.0, 2.0]), PLUS).shape == (2,)


def test_gamma_squared_is_the_polynomial_symbol():
    xi = np.linspace(-5.0, 5.0, 101)
    for params in (PLUS, MINUS):
        expected = xi ** 2 - params.beta * xi ** 4 + xi ** 6
        assert np.allclose(gamma(xi, params) ** 2, expected, rtol=1e-12, atol=1e-14)


def test_rho_and_bracket():
    assert rho(2.0, PLUS) == pytest.approx(7.0)
    assert rho(2.0, MINUS) == pytest.approx(9.0)
    assert rho(-2.0, PLUS) == pytest.approx(-7.0)
    assert bracket(-3.0) == 4.0


def test_multiplier_is_bounded_and_peaks_at_one():
    xi = np.linspace(-50.0, 50.0, 200001)
    for params in (PLUS, MINUS):
        assert np.max(multiplier(xi, params)) <= 1.0 + 1e-12
    assert multiplier(1.0, PLUS) == pytest.approx(1.0, abs=1e-14)
    assert multiplier(0.0, PLUS) == 0.0
    # flat maximum: the deviation is quadratic in the offset
    assert 1.0 - multiplier(1.001, PLUS) == pytest.approx(2e-6, rel=1e-2)
    assert multiplier(2.0, PLUS) == pytest.approx(2.0 / np.sqrt(13.0))


def test_rho_stays_below_gamma_within_the_gap_bound():
    root = np.sqrt(np.linspace(0.0, 100.0, 400001))
    for params in (PLUS, MINUS):
        gap = gamma(root, params) - rho(root, params)
        assert np.min(gap) >= -1e-12
        assert np.max(gap) <= sandwich_gap_bound(params)
    peak = np.max(gamma(root, PLUS) - rho(root, PLUS))
    assert peak == pytest.approx(0.6157, abs=1e-3)


def test_gap_decays_like_inverse_frequency():
    for params in (PLUS, MINUS):
        gap = gamma(1000.0, params) - rho(1000.0, params)
        assert gap == pytest.approx(0.375 / 1000.0, rel=1e-2)


def test_equivalence_ratio_within_constant():
    axis = np.linspace(0.0, 1e4, 1000)
    for params in (PLUS, MINUS):
        ratio = symbol_equivalence_ratio(axis[:, None], axis[None, :], params)
        c = equivalence_constant(params)
        assert np.min(ratio) >= 1.0 / c
        assert np.max(ratio) <= c


def test_equivalence_ratio_is_attained_at_the_gap_peak():
    y = 0.43
    x = gamma(np.sqrt(y), PLUS)
    ratio = symbol_equivalence_ratio(x, y, PLUS)
    assert ratio == pytest.approx(1.0 + gamma(np.sqrt(y), PLUS) - rho(np.sqrt(y), PLUS))
    assert 1.5 < ratio <= equivalence_constant(PLUS)


def test_equivalence_ratio_rejects_negative_arguments():
    with pytest.raises(InvalidArgumentError):
        symbol_equivalence_ratio(-1.0, 1.0, PLUS)
    with pytest.raises(InvalidArgumentError):
        symbol_equivalence_ratio(1.0, -1.0, PLUS)
