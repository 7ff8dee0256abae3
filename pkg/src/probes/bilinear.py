"""
Bilinear Counterexample
Indicator data on the thin curved rectangle
A_N = {N <= xi <= N + N^-alpha, |tau - rho(xi)| <= 1} and its reflection,
and the growth of the bilinear-estimate ratio over a sweep of N
"""

import logging
import math
from dataclasses import dataclass, field, replace
from multiprocessing import Pool
from typing import Optional, Sequence, Tuple

import numpy as np

from src.models.dispersion import DispersionParams, multiplier, rho
from src.models.norms import FREQUENCY_WEIGHTS, NormIndices, xsb_norm, xsb_unapply_weight
from src.utils.errors import InvalidArgumentError, InvalidSpecError
from src.utils.grids import FrequencyGrid, SpaceTimeField, SpaceTimeGrid, reflect
from src.utils.reports import ExperimentReport, build_report
from src.utils.transforms import convolve2d

logger = logging.getLogger(__name__)

# Slack on the measured slope below the predicted growth exponent
GROWTH_SLACK = 0.15

# Largest slope of a bounded (non-growing) ratio
BOUNDED_SLOPE = 0.05

# Relative slack on the strip |tau - rho(xi)| <= 1
STRIP_TOL = 1e-9


def alpha_for(a: float) -> float:
    """Rectangle width exponent alpha = (1 - 2a) / (1 - a), in (0, 1) for 0 < a < 1/2"""
    if not 0 < a < 0.5:
        raise InvalidArgumentError(f"alpha_for needs 0 < a < 1/2, got {a}")
    return (1.0 - 2.0 * a) / (1.0 - a)


def bilinear_threshold(a: float, alpha: Optional[float] = None) -> float:
    """
    Sobolev index below which the ratio must grow:
    s* = -(3 alpha / 2 + (2 - alpha) a) / (alpha + 2)

    With alpha = alpha_for(a) this is -1/2 for every a.
    """
    alpha = alpha_for(a) if alpha is None else alpha
    return -(1.5 * alpha + (2.0 - alpha) * a) / (alpha + 2.0)


def bilinear_regime(s: float, a: float, b: float) -> str:
    """
    Which statement covers (s, a, b):
        "holds-i"       s >= 0, b > 1/2, 1/6 < a < 1/2
        "holds-ii"      -1/2 < s < 0, b > 1/2, 1/6 < a < 1/2, |s| < a
        "fails"         s < -1/2
        "unclassified"  anything else
    """
    admissible = b > 0.5 and 1.0 / 6.0 < a < 0.5
    if s >= 0 and admissible:
        return "holds-i"
    if -0.5 < s < 0 and admissible and abs(s) < a:
        return "holds-ii"
    if s < -0.5:
        return "fails"
    return "unclassified"


def predicted_bilinear_exponent(s: float, a: float, alpha: float, kind: str = "bracket") -> float:
    """
    Growth exponent of the ratio from the rectangle construction

    The output lives at |xi| <~ N^-alpha. With the homogeneous weight |xi|^s the
    exponent chain gives -(2 + alpha) s - (2 - alpha) a - 3 alpha / 2. With the
    bracket weight <xi>^s ~ 1 there and the xi integral is carried by |xi| ~ N^-alpha,
    giving -2s - 2a - 1/2 - alpha (1 - 2a) / 2.
    """
    if kind == "homogeneous":
        return -(2.0 + alpha) * s - (2.0 - alpha) * a - 1.5 * alpha
    if kind == "bracket":
        return -2.0 * s - 2.0 * a - 0.5 - 0.5 * alpha * (1.0 - 2.0 * a)
    raise InvalidArgumentError(f"unknown frequency weight {kind!r}")


@dataclass(frozen=True)
class BilinearSpec:
    """One point of the bilinear sweep"""

    N: float
    alpha: float
    s: float
    b: float
    a: float
    params: DispersionParams = field(default_factory=DispersionParams)
    tau_resolution: float = 1.0 / 64.0
    xi_resolution: Optional[float] = None
    frequency_weight: str = "bracket"

    def __post_init__(self):
        if not self.N >= 4:
            raise InvalidSpecError(f"N must be >= 4, got {self.N}")
        if not 0 < self.alpha < 1:
            raise InvalidSpecError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.xi_resolution is None:
            object.__setattr__(self, "xi_resolution", self.width / 256.0)
        if not 0 < self.xi_resolution <= self.width / 8.0 * (1.0 + 1e-12):
            raise InvalidSpecError(
                f"xi_resolution {self.xi_resolution:g} does not resolve the width {self.width:g}"
            )
        if not 0 < self.tau_resolution <= 0.125:
            raise InvalidSpecError(f"tau_resolution must lie in (0, 1/8], got {self.tau_resolution}")
        if self.frequency_weight not in FREQUENCY_WEIGHTS:
            raise InvalidSpecError(f"unknown frequency weight {self.frequency_weight!r}")
        if self.frequency_weight == "homogeneous" and not self.s > -1:
            raise InvalidSpecError("the homogeneous weight needs s > -1 to stay integrable at xi = 0")

    @property
    def indices(self) -> NormIndices:
        return NormIndices(self.s, self.b, self.a)

    @property
    def width(self) -> float:
        """Rectangle width N^-alpha"""
        return float(self.N) ** (-self.alpha)

    @property
    def shear(self) -> float:
        """Slope of rho at the rectangle midpoint; the tau axis follows it"""
        mid = self.N + 0.5 * self.width
        return 3.0 * mid * mid - 0.5 * self.params.beta

    @property
    def predicted_exponent(self) -> float:
        return predicted_bilinear_exponent(self.s, self.a, self.alpha, self.frequency_weight)

    @property
    def growth_claimed(self) -> bool:
        return self.s < -0.5 and self.predicted_exponent > 0


def counterexample_grid(spec: BilinearSpec) -> Tuple[SpaceTimeGrid, np.ndarray]:
    """
    Sheared grid around A_N and the strip centers tau' = rho(xi) - shear * xi

    The xi axis holds one midpoint column per cell of [N, N + width], padded by
    a zero column on either side.
    """
    n_cells = math.ceil(spec.width / spec.xi_resolution - 1e-9)
    hx = spec.width / n_cells
    xi_axis = FrequencyGrid.from_spacing(spec.N - 0.5 * hx, hx, n_cells + 2)
    xi = xi_axis.nodes[1:-1]
    centers = rho(xi, spec.params) - spec.shear * xi

    ht = spec.tau_resolution
    lo = float(np.min(centers)) - 1.0 - 2.0 * ht
    hi = float(np.max(centers)) + 1.0 + 2.0 * ht
    tau_axis = FrequencyGrid.from_spacing(lo, ht, math.ceil((hi - lo) / ht) + 1)
    return SpaceTimeGrid(tau_axis, xi_axis, spec.shear), centers


def build_counterexample_pair(spec: BilinearSpec) -> Tuple[SpaceTimeField, SpaceTimeField]:
    """
    f_N = indicator of A_N and g_N(tau, xi) = f_N(-tau, -xi)

    Raises:
        InvalidSpecError: the strip does not fit inside the tau axis
    """
    grid, centers = counterexample_grid(spec)
    tau = grid.tau_axis.nodes
    if not grid.tau_axis.covers(float(np.min(centers)) - 1.0, float(np.max(centers)) + 1.0):
        raise InvalidSpecError("tau axis does not cover the strip |tau - rho(xi)| <= 1")
    values = np.zeros(grid.shape)
    inside = np.abs(tau[:, None] - centers[None, :]) <= 1.0 + STRIP_TOL
    values[:, 1:-1] = inside
    f_N = SpaceTimeField(grid, values)
    logger.debug("counterexample N=%g: grid %s, %d cells", spec.N, grid.shape, int(np.sum(inside)))
    return f_N, reflect(f_N)


def bilinear_lhs(
    u_hat: SpaceTimeField,
    v_hat: SpaceTimeField,
    s: float,
    a: float,
    params: DispersionParams,
    kind: str = "bracket",
) -> float:
    """
    X^{s,-a} norm (rho weight) of (1/2) * xi^2 / gamma(xi) * (u_hat * v_hat)

    The factor 1/(2i) of the Duhamel term contributes 1/2 in modulus.
    """
    product = convolve2d(u_hat, v_hat, span="sum")
    xi = product.grid.xi_mesh()
    w = product.with_values(0.5 * multiplier(xi, params) * product.values)
    return xsb_norm(w, s, -a, params, variant="rho", kind=kind)


def bilinear_ratio(spec: BilinearSpec) -> float:
    """bilinear_lhs(u_N, v_N) / (||u_N||_{X^{s,b}} ||v_N||_{X^{s,b}})"""
    indices = spec.indices
    f_N, g_N = build_counterexample_pair(spec)
    kind = spec.frequency_weight
    u = xsb_unapply_weight(f_N, indices.s, indices.b, spec.params, variant="rho", kind=kind)
    v = xsb_unapply_weight(g_N, indices.s, indices.b, spec.params, variant="rho", kind=kind)
    lhs = bilinear_lhs(u, v, indices.s, indices.a, spec.params, kind)
    u_norm = xsb_norm(u, indices.s, indices.b, spec.params, variant="rho", kind=kind)
    v_norm = xsb_norm(v, indices.s, indices.b, spec.params, variant="rho", kind=kind)
    ratio = lhs / (u_norm * v_norm)
    logger.info("bilinear N=%g: ratio %.6e", spec.N, ratio)
    return ratio


def _sweep_point(spec: BilinearSpec) -> Tuple[float, float]:
    return float(spec.N), bilinear_ratio(spec)


def bilinear_ratio_sweep(template: BilinearSpec, N_list: Sequence[float], workers: int = 1) -> ExperimentReport:
    """
    Fit log(ratio) against log N

    Inside the failure range the slope must reach the predicted exponent less
    GROWTH_SLACK; elsewhere the report is informational and the ratio must stay
    bounded (slope <= BOUNDED_SLOPE).
    """
    if len(N_list) < 3:
        raise InvalidArgumentError("a sweep needs at least 3 values of N")
    # same number of xi cells per rectangle at every N
    cells = template.width / template.xi_resolution
    specs = [
        replace(template, N=float(n), xi_resolution=float(n) ** (-template.alpha) / cells)
        for n in N_list
    ]
    if workers > 1:
        with Pool(workers) as pool:
            points = pool.map(_sweep_point, specs)
    else:
        points = [_sweep_point(spec) for spec in specs]
    points.sort()

    predicted = template.predicted_exponent
    growth = template.growth_claimed

    def verdict(slope: float) -> bool:
        if growth:
            return slope >= predicted - GROWTH_SLACK
        return slope <= BOUNDED_SLOPE

    details = {
        "s": template.s,
        "a": template.a,
        "b": template.b,
        "alpha": template.alpha,
        "beta": template.params.beta,
        "frequency_weight": template.frequency_weight,
        "regime": bilinear_regime(template.s, template.a, template.b),
        "threshold": bilinear_threshold(template.a, template.alpha),
    }
    return build_report(
        "bilinear_sweep",
        points,
        predicted,
        verdict,
        informational=not template.growth_claimed,
        details=details,
    )
