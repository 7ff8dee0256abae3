"""
Dispersion Symbols
The linear symbol gamma, its cubic surrogate rho, the Japanese bracket and the
multiplier xi^2 / gamma for u_tt = u_xx + beta u_xxxx + u_xxxxxx + (u^2)_xx
"""

from dataclasses import dataclass

import numpy as np

from src.utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class DispersionParams:
    """Selects the model variant through beta = +1 or -1"""

    beta: int = 1

    def __post_init__(self):
        if self.beta not in (1, -1) or isinstance(self.beta, bool):
            raise InvalidArgumentError(f"beta must be +1 or -1, got {self.beta!r}")


def _radicand_factor(xi, params: DispersionParams):
    """1 - beta xi^2 + xi^4, so that gamma^2 = xi^2 * factor"""
    xi2 = np.square(xi)
    factor = 1.0 - params.beta * xi2 + xi2 * xi2
    # minimum is 3/4 (beta = +1) or 1 (beta = -1)
    assert np.all(factor > 0), "negative dispersion radicand"
    return factor


def gamma(xi, params: DispersionParams):
    """sqrt(xi^2 - beta xi^4 + xi^6), evaluated as |xi| sqrt(1 - beta xi^2 + xi^4)"""
    xi = np.asarray(xi, dtype=float)
    result = np.abs(xi) * np.sqrt(_radicand_factor(xi, params))
    return result if result.ndim else float(result)


def rho(xi, params: DispersionParams):
    """Cubic surrogate xi^3 - beta xi / 2"""
    xi = np.asarray(xi, dtype=float)
    result = xi ** 3 - 0.5 * params.beta * xi
    return result if result.ndim else float(result)


def bracket(x):
    """<x> = 1 + |x|"""
    result = 1.0 + np.abs(np.asarray(x, dtype=float))
    return result if result.ndim else float(result)


def multiplier(xi, params: DispersionParams):
    """xi^2 / gamma(xi) = |xi| / sqrt(1 - beta xi^2 + xi^4), with value 0 at xi = 0"""
    xi = np.asarray(xi, dtype=float)
    result = np.abs(xi) / np.sqrt(_radicand_factor(xi, params))
    return result if result.ndim else float(result)


def sandwich_gap_bound(params: DispersionParams) -> float:
    """
    Upper bound for gamma(sqrt(y)) - (y^{3/2} - beta sqrt(y) / 2) over y >= 0

    The gap never drops below 0. For beta = -1 it stays below 1/2; for
    beta = +1 it peaks near 0.6157 around y = 0.43.
    """
    return 0.5 if params.beta == -1 else 0.62


def equivalence_constant(params: DispersionParams) -> float:
    """Constant c with 1/c <= <x - rho> / <x - gamma> <= c on the half line"""
    return 1.0 + sandwich_gap_bound(params)


def symbol_equivalence_ratio(x, y, params: DispersionParams):
    """
    (1 + |x - y^{3/2} + beta sqrt(y) / 2|) / (1 + |x - sqrt(y - beta y^2 + y^3)|)

    Compares the rho and gamma weights at |tau| = x, xi^2 = y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise InvalidArgumentError("symbol_equivalence_ratio needs x, y >= 0")
    root = np.sqrt(y)
    numerator = 1.0 + np.abs(x - rho(root, params))
    denominator = 1.0 + np.abs(x - gamma(root, params))
    result = numerator / denominator
    return result if result.ndim else float(result)
