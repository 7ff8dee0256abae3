"""
Ill-Posedness Probe
Quadratic Duhamel term for characteristic-function data at the time
t = N^{-3-eps}, and its growth exponent over a sweep of N
"""

import logging
import math
from dataclasses import dataclass, field, replace
from multiprocessing import Pool
from typing import Optional, Sequence, Tuple

import numpy as np

from src.models.dispersion import DispersionParams, multiplier
from src.models.norms import hs_norm
from src.probes.kernel import kernel_K, kernel_K_simpson
from src.utils.errors import InvalidArgumentError, InvalidSpecError
from src.utils.grids import FrequencyGrid, SpectralField, make_symmetric_grid
from src.utils.reports import ExperimentReport, build_report

logger = logging.getLogger(__name__)

KERNEL_METHODS = ("closed", "simpson")

# Output frequencies reached by the two supports
TARGET_BAND = (1.0, 3.0)

# Largest gap between fitted and predicted exponent
SLOPE_TOLERANCE = 0.1


@dataclass(frozen=True)
class IllposedSpec:
    """One point of the ill-posedness sweep"""

    N: float
    s: float
    epsilon: float
    params: DispersionParams = field(default_factory=DispersionParams)
    xi_resolution: float = 1.0 / 500.0
    t_quadrature_nodes: int = 33
    kernel_method: str = "closed"
    time_factors: Tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if not self.N >= 4:
            raise InvalidSpecError(f"N must be >= 4, got {self.N}")
        if not self.epsilon > 0:
            raise InvalidSpecError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.xi_resolution <= 0.25:
            raise InvalidSpecError(f"xi_resolution must lie in (0, 1/4], got {self.xi_resolution}")
        if self.t_quadrature_nodes < 3 or self.t_quadrature_nodes % 2 == 0:
            raise InvalidSpecError("t_quadrature_nodes must be odd and >= 3")
        if self.kernel_method not in KERNEL_METHODS:
            raise InvalidSpecError(f"unknown kernel method {self.kernel_method!r}")
        if not self.time_factors or any(f <= 0 for f in self.time_factors):
            raise InvalidSpecError("time_factors must be a non-empty list of positive numbers")

    @property
    def witness_time(self) -> float:
        return float(self.N) ** (-3.0 - self.epsilon)

    @property
    def predicted_exponent(self) -> float:
        return -2.0 * self.s - 6.0 - 2.0 * self.epsilon

    @property
    def growth_claimed(self) -> bool:
        """True inside the ill-posed range s < -3 with -2s - 6 - 2 eps > 0"""
        return self.s < -3.0 and self.predicted_exponent > 0


def default_grid(spec: IllposedSpec) -> FrequencyGrid:
    """Symmetric grid of spacing xi_resolution reaching past N + 3"""
    h = spec.xi_resolution
    half_nodes = math.ceil((spec.N + 3.0) / h) + 4
    return make_symmetric_grid(half_nodes * h, 2 * half_nodes + 1)


def build_illposed_data(spec: IllposedSpec, grid: Optional[FrequencyGrid] = None) -> Tuple[SpectralField, SpectralField]:
    """
    phi_hat = N^{-s} 1_[-N, -N+1] and psi_hat = N^{-s} 1_[N+1, N+2]

    Raises:
        InvalidSpecError: the grid is not symmetric or does not cover [-N-1, N+3]
    """
    grid = default_grid(spec) if grid is None else grid
    if not grid.symmetric:
        raise InvalidSpecError("the ill-posedness data need a symmetric grid")
    if not grid.covers(-spec.N - 1.0, spec.N + 3.0):
        raise InvalidSpecError(f"grid [{grid.xi_min:g}, {grid.xi_max:g}] does not cover [-N-1, N+3] for N={spec.N:g}")
    amplitude = float(spec.N) ** (-spec.s)
    phi = SpectralField(grid, amplitude * grid.indicator(-spec.N, -spec.N + 1.0))
    psi = SpectralField(grid, amplitude * grid.indicator(spec.N + 1.0, spec.N + 2.0))
    return phi, psi


def _pair_indices(phi: SpectralField, psi: SpectralField, band: Tuple[float, float]):
    """
    Target indices k in the band, source indices j in supp psi_hat, and the
    index of xi_k - xi_j on the (symmetric) grid
    """
    grid = phi.grid
    if grid != psi.grid or not grid.symmetric:
        raise InvalidArgumentError("both data must live on the same symmetric grid")
    target = np.flatnonzero(grid.indicator(*band))
    source = np.flatnonzero(psi.values)
    center = (grid.n_nodes - 1) // 2
    difference = target[:, None] - source[None, :] + center
    if difference.size and (difference.min() < 0 or difference.max() >= grid.n_nodes):
        raise InvalidSpecError("xi - xi1 leaves the grid for some target frequency")
    return target, source, difference


def resonant_set_measure(xi: float, phi: SpectralField, psi: SpectralField) -> float:
    """Discrete measure of A_xi = {xi1 in supp psi_hat : xi - xi1 in supp phi_hat}"""
    grid = phi.grid
    k = grid.index_of(xi)
    _, source, difference = _pair_indices(phi, psi, (grid.nodes[k], grid.nodes[k]))
    if difference.size == 0:
        return 0.0
    hits = np.count_nonzero(phi.values[difference[0]] != 0)
    return hits * grid.spacing


def _kernel_matrix(t, xi, xi1, xi2, params, method, n_nodes):
    if method == "closed":
        return kernel_K(t, xi[:, None], xi1[None, :], xi2, params)
    # one target row at a time keeps the (rows, sources, nodes) stack small
    out = np.empty(xi2.shape)
    for row, x in enumerate(xi):
        out[row] = kernel_K_simpson(t, x, xi1, xi2[row], params, n_nodes)
    return out


def duhamel_quadratic_term(
    phi: SpectralField,
    psi: SpectralField,
    t: float,
    params: DispersionParams,
    band: Tuple[float, float] = TARGET_BAND,
    kernel_method: str = "closed",
    t_quadrature_nodes: int = 33,
) -> SpectralField:
    """
    x-transform of int_0^t V_s(t - t') (V_c(t') phi V_c(t') psi)_xx dt' on the band,

        (i / 8) * xi^2 / gamma(xi) * int phi_hat(xi - xi1) psi_hat(xi1) K(t, xi, xi1) dxi1

    with the xi1 integral as a spacing-weighted sum over supp psi_hat.
    """
    if t < 0:
        raise InvalidArgumentError("t must be >= 0")
    grid = phi.grid
    target, source, difference = _pair_indices(phi, psi, band)
    if target.size < 2:
        raise InvalidSpecError("the target band holds fewer than two grid nodes")
    nodes = grid.nodes
    xi = nodes[target]
    band_grid = FrequencyGrid.from_spacing(xi[0], grid.spacing, target.size)
    if source.size == 0 or not np.any(phi.values):
        return SpectralField(band_grid, np.zeros(target.size))

    xi1 = nodes[source]
    xi2 = nodes[difference]
    K = _kernel_matrix(t, xi, xi1, xi2, params, kernel_method, t_quadrature_nodes)
    integral = grid.spacing * np.sum(phi.values[difference] * psi.values[source][None, :] * K, axis=1)
    values = 0.125j * multiplier(xi, params) * integral
    logger.debug("duhamel term: %d targets x %d sources at t=%.3e", target.size, source.size, t)
    return SpectralField(band_grid, values)


def illposed_scan(spec: IllposedSpec) -> Tuple[float, float]:
    """Largest H^s norm of the quadratic term over the time factors: (value, factor)"""
    phi, psi = build_illposed_data(spec)
    best_value, best_factor = -1.0, spec.time_factors[0]
    for factor in spec.time_factors:
        term = duhamel_quadratic_term(
            phi,
            psi,
            factor * spec.witness_time,
            spec.params,
            kernel_method=spec.kernel_method,
            t_quadrature_nodes=spec.t_quadrature_nodes,
        )
        value = hs_norm(term, spec.s)
        if value > best_value:
            best_value, best_factor = value, factor
    logger.info("illposed N=%g: value %.6e (time factor %g)", spec.N, best_value, best_factor)
    return best_value, float(best_factor)


def illposed_quantity(spec: IllposedSpec) -> float:
    return illposed_scan(spec)[0]


def _sweep_point(spec: IllposedSpec) -> Tuple[float, float, float]:
    value, factor = illposed_scan(spec)
    return float(spec.N), value, factor


def illposed_sweep(template: IllposedSpec, N_list: Sequence[float], workers: int = 1) -> ExperimentReport:
    """
    Fit log(illposed_quantity) against log N

    Passes when the slope is within SLOPE_TOLERANCE of -2s - 6 - 2 eps. Outside
    the growth range the report is informational.
    """
    if len(N_list) < 3:
        raise InvalidArgumentError("a sweep needs at least 3 values of N")
    specs = [replace(template, N=float(n)) for n in N_list]
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_sweep_point, specs)
    else:
        results = [_sweep_point(spec) for spec in specs]
    results.sort(key=lambda r: r[0])

    predicted = template.predicted_exponent
    details = {
        "s": template.s,
        "epsilon": template.epsilon,
        "beta": template.params.beta,
        "growth_claimed": template.growth_claimed,
        "time_factors": [f for _, _, f in results],
    }
    return build_report(
        "illposed_sweep",
        [(n, v) for n, v, _ in results],
        predicted,
        lambda slope: abs(slope - predicted) <= SLOPE_TOLERANCE,
        informational=not template.growth_claimed,
        details=details,
    )
