"""
Sobolev and Bourgain Norms
H^s norms of frequency fields and torus coefficients, and X^{s,b} norms of
space-time fields in the gamma-weight and rho-weight forms
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.models.dispersion import DispersionParams, bracket, gamma, rho
from src.utils.errors import InvalidArgumentError
from src.utils.grids import SpaceTimeField, SpectralField, l2_norm

WEIGHT_VARIANTS = ("gamma", "rho")
FREQUENCY_WEIGHTS = ("bracket", "homogeneous")


@dataclass(frozen=True)
class NormIndices:
    """Sobolev index s, modulation index b and the output index a"""

    s: float
    b: float = 0.0
    a: Optional[float] = None

    def __post_init__(self):
        if self.a is not None and not 0 < self.a < 0.5:
            raise InvalidArgumentError(f"the output index a must lie in (0, 1/2), got {self.a}")


def frequency_weight(xi, s: float, kind: str = "bracket"):
    """<xi>^s, or |xi|^s for the homogeneous weight (infinite at 0 when s < 0)"""
    if kind == "bracket":
        return bracket(xi) ** s
    if kind == "homogeneous":
        with np.errstate(divide="ignore"):
            return np.abs(np.asarray(xi, dtype=float)) ** s
    raise InvalidArgumentError(f"unknown frequency weight {kind!r}")


def hs_norm(field: SpectralField, s: float) -> float:
    """(int <xi>^{2s} |g_hat|^2 dxi)^{1/2} by trapezoid quadrature"""
    return l2_norm(field, frequency_weight(field.grid.nodes, s))


def hs_norm_torus(coefficients, grid, s: float) -> float:
    """
    H^s norm of a torus function from its Fourier-series coefficients

    With g_hat(xi_k) ~ period * c_k this is the Riemann sum of the real-line
    norm on the mode lattice of spacing 2 pi / period.
    """
    c = np.asarray(coefficients)
    weights = frequency_weight(grid.wavenumbers, s)
    total = np.sum(weights ** 2 * np.abs(c) ** 2, axis=-1)
    result = np.sqrt(total * grid.period * 2.0 * np.pi)
    return float(result) if np.ndim(result) == 0 else result


def _modulation(tau, xi, params: DispersionParams, variant: str):
    if variant == "gamma":
        return np.abs(tau) - gamma(xi, params)
    if variant == "rho":
        return np.abs(tau) - rho(np.abs(xi), params)
    raise InvalidArgumentError(f"unknown weight variant {variant!r}")


def xsb_weight(
    grid,
    s: float,
    b: float,
    params: DispersionParams,
    variant: str = "gamma",
    kind: str = "bracket",
) -> np.ndarray:
    """<|tau| - gamma(xi)>^b <xi>^s (or the rho form) at every node of a SpaceTimeGrid"""
    tau = grid.physical_tau()
    xi = grid.xi_mesh()
    return bracket(_modulation(tau, xi, params, variant)) ** b * frequency_weight(xi, s, kind)


def xsb_apply_weight(
    field: SpaceTimeField,
    s: float,
    b: float,
    params: DispersionParams,
    variant: str = "gamma",
    kind: str = "bracket",
) -> SpaceTimeField:
    """Pointwise multiplication by the X^{s,b} weight"""
    weight = xsb_weight(field.grid, s, b, params, variant, kind)
    return field.with_values(field.values * weight)


def xsb_unapply_weight(
    field: SpaceTimeField,
    s: float,
    b: float,
    params: DispersionParams,
    variant: str = "gamma",
    kind: str = "bracket",
) -> SpaceTimeField:
    """Pointwise division by the X^{s,b} weight; inverse of xsb_apply_weight"""
    weight = xsb_weight(field.grid, s, b, params, variant, kind)
    return field.with_values(field.values / weight)


def xsb_norm(
    field: SpaceTimeField,
    s: float,
    b: float,
    params: DispersionParams,
    variant: str = "gamma",
    kind: str = "bracket",
) -> float:
    """L2 norm of the weighted field over (tau, xi)"""
    return l2_norm(field, xsb_weight(field.grid, s, b, params, variant, kind))
