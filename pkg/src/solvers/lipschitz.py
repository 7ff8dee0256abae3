"""
Lipschitz Probe
Empirical ratio of solution distance to data distance for the flow map
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from src.models.dispersion import DispersionParams
from src.models.norms import hs_norm_torus
from src.solvers.picard import picard_solve
from src.solvers.torus import SolverConfig, TorusGrid, Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LipschitzReport:
    """One ratio per perturbation; None marks a zero perturbation"""

    ratios: Tuple[Optional[float], ...]
    data_distances: Tuple[float, ...]
    solution_distances: Tuple[float, ...]
    s: float
    horizon: float

    @property
    def max_ratio(self) -> Optional[float]:
        measured = [r for r in self.ratios if r is not None]
        return max(measured) if measured else None

    @property
    def excluded(self) -> Tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.ratios) if r is None)

    def spread(self) -> Optional[float]:
        """Largest over smallest measured ratio"""
        measured = [r for r in self.ratios if r is not None]
        if not measured or min(measured) == 0:
            return None
        return max(measured) / min(measured)


def _distance_up_to(base: Trajectory, other: Trajectory, s: float, horizon: float) -> float:
    mask = base.times <= horizon * (1.0 + 1e-12)
    gaps = np.atleast_1d(hs_norm_torus(base.u_hat[mask] - other.u_hat[mask], base.grid, s))
    return float(np.max(gaps))


def lipschitz_probe(
    phi,
    psi,
    perturbations: Sequence[Tuple[np.ndarray, np.ndarray]],
    grid: TorusGrid,
    params: DispersionParams,
    config: SolverConfig,
    s: float,
    horizon: Optional[float] = None,
) -> LipschitzReport:
    """
    Ratio ||u - u~||_{C([0,T'];H^s)} / (||dphi||_{H^s}^2 + ||dpsi||_{H^{s-1}}^2)^{1/2}
    for each perturbation (dphi, dpsi) of the data

    Args:
        horizon: T' <= T; defaults to config.T
    """
    horizon = config.T if horizon is None else float(horizon)
    base = picard_solve(phi, psi, grid, params, config)

    ratios = []
    data_distances = []
    solution_distances = []
    for dphi, dpsi in perturbations:
        data_distance = float(np.hypot(hs_norm_torus(dphi, grid, s), hs_norm_torus(dpsi, grid, s - 1.0)))
        data_distances.append(data_distance)
        if data_distance == 0.0:
            ratios.append(None)
            solution_distances.append(0.0)
            continue
        perturbed = picard_solve(
            np.asarray(phi) + dphi, np.asarray(psi) + dpsi, grid, params, config
        )
        distance = _distance_up_to(base, perturbed, s, horizon)
        solution_distances.append(distance)
        ratios.append(distance / data_distance)
        logger.debug("lipschitz: data %.3e -> solution %.3e", data_distance, distance)

    return LipschitzReport(
        tuple(ratios), tuple(data_distances), tuple(solution_distances), float(s), horizon
    )
