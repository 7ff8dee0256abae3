"""
Step Oracle
Independent time stepper for the per-mode system u_tt = -gamma^2 u - xi^2 (u^2)^:
classical RK4 on the integrating-factor form, with the linear part propagated
exactly over each substep
"""

import logging
from typing import Tuple

import numpy as np

from src.models.dispersion import DispersionParams, gamma
from src.solvers.picard import nonlinear_term
from src.solvers.propagators import velocity_data
from src.solvers.torus import SolverConfig, TorusGrid, Trajectory, check_real_data
from src.utils.errors import StepInstabilityError

logger = logging.getLogger(__name__)

# Norm growth, relative to the initial state, treated as instability
GROWTH_LIMIT = 1e10


class _LinearFlow:
    """Exact linear propagation of the pair (u_hat, v_hat) over fixed step lengths"""

    def __init__(self, grid: TorusGrid, params: DispersionParams):
        self.gamma = gamma(grid.wavenumbers, params)

    def factors(self, h: float):
        cos_h = np.cos(h * self.gamma)
        sin_over = h * np.sinc(h * self.gamma / np.pi)
        return cos_h, sin_over, -self.gamma ** 2 * sin_over

    @staticmethod
    def apply(factors, u, v) -> Tuple[np.ndarray, np.ndarray]:
        cos_h, sin_over, minus_gamma_sin = factors
        return cos_h * u + sin_over * v, minus_gamma_sin * u + cos_h * v


def step_oracle_solve(phi, psi, grid: TorusGrid, params: DispersionParams, config: SolverConfig) -> Trajectory:
    """
    Integrate to T with config.oracle_substeps RK4 steps between output nodes

    Raises:
        StepInstabilityError: the state norm grew by more than GROWTH_LIMIT
    """
    phi = check_real_data("phi", phi, grid)
    psi = check_real_data("psi", psi, grid)
    times = config.times
    substeps = int(config.oracle_substeps)
    h = (times[1] - times[0]) / substeps
    flow = _LinearFlow(grid, params)
    full = flow.factors(h)
    half = flow.factors(h / 2.0)

    def force(u):
        return config.coupling * nonlinear_term(u, grid, config.dealias_fraction)

    u = phi.copy()
    v = velocity_data(psi, grid)
    initial = max(float(np.sqrt(np.sum(np.abs(u) ** 2 + np.abs(v) ** 2))), np.finfo(float).tiny)

    us = [u.copy()]
    vs = [v.copy()]
    for node in range(1, len(times)):
        for _ in range(substeps):
            # forcing enters the velocity equation only
            k1 = force(u)
            ua, _ = flow.apply(half, u, v + 0.5 * h * k1)
            k2 = force(ua)
            # the half-step state plus (0, h/2 k2) has the same u component
            uh, _ = flow.apply(half, u, v)
            k3 = force(uh)
            k3u, k3v = flow.apply(half, np.zeros_like(k3), k3)
            uf, vf = flow.apply(full, u, v)
            uc, vc = uf + h * k3u, vf + h * k3v
            k4 = force(uc)

            k1u, k1v = flow.apply(full, np.zeros_like(k1), k1)
            k23u, k23v = flow.apply(half, np.zeros_like(k2), k2 + k3)
            u = uf + h / 6.0 * (k1u + 2.0 * k23u)
            v = vf + h / 6.0 * (k1v + 2.0 * k23v + k4)

        growth = float(np.sqrt(np.sum(np.abs(u) ** 2 + np.abs(v) ** 2))) / initial
        if not np.isfinite(growth) or growth > GROWTH_LIMIT:
            raise StepInstabilityError(float(times[node]), growth)
        us.append(u.copy())
        vs.append(v.copy())

    logger.debug("step oracle: %d steps of %.3e", (len(times) - 1) * substeps, h)
    return Trajectory(grid, times, np.array(us), np.array(vs))
