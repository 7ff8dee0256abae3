"""
Duhamel / Picard Solver
Fixed-point iteration on the time-sampled integral equation

    u(t) = V_c(t) phi + V_s(t) psi_x + int_0^t V_s(t - t') (u^2)_xx(t') dt'
"""

import logging
from typing import List, Tuple

import numpy as np

from src.models.dispersion import DispersionParams
from src.models.norms import hs_norm_torus
from src.solvers.propagators import cosine_factor, sine_factor, velocity_data
from src.solvers.torus import (
    SolverConfig,
    TorusGrid,
    TorusState,
    Trajectory,
    check_real_data,
)
from src.utils.errors import InvalidArgumentError, NoContractionError

logger = logging.getLogger(__name__)


def dealias_mask(grid: TorusGrid, dealias_fraction: float) -> np.ndarray:
    """True for modes kept by the truncation |k| <= fraction * n_modes / 2"""
    return np.abs(grid.mode_numbers) <= dealias_fraction * grid.n_modes / 2


def nonlinear_term(u_hat, grid: TorusGrid, dealias_fraction: float) -> np.ndarray:
    """-xi^2 (u^2)^ for one state or a stack of states (last axis = modes)"""
    u = grid.to_physical(u_hat)
    square_hat = grid.from_physical(u * u)
    out = -(grid.wavenumbers ** 2) * square_hat
    out[..., ~dealias_mask(grid, dealias_fraction)] = 0.0
    return out


def nonlinearity(state: TorusState, dealias_fraction: float = 2.0 / 3.0) -> np.ndarray:
    """Fourier coefficients of (u^2)_xx for the state, dealiased"""
    return nonlinear_term(state.u_hat, state.grid, dealias_fraction)


def duhamel_weights(times: np.ndarray) -> np.ndarray:
    """
    Quadrature weights W with int_0^{t_j} f dt ~ sum_i W[j, i] f(t_i)

    Even interval counts use composite Simpson; odd counts close with a 3/8
    panel; the first interval uses the three-point rule (5, 8, -1) / 12.
    Requires equally spaced nodes, at least three of them.
    """
    m = len(times)
    if m < 3:
        raise InvalidArgumentError("the Duhamel quadrature needs at least 3 time nodes")
    h = times[1] - times[0]
    W = np.zeros((m, m))
    W[1, :3] = np.array([5.0, 8.0, -1.0]) * h / 12.0
    for j in range(2, m):
        simpson_end = j if j % 2 == 0 else j - 3
        if simpson_end > 0:
            W[j, 0:simpson_end + 1:2] += 2.0 * h / 3.0
            W[j, 1:simpson_end:2] += 4.0 * h / 3.0
            W[j, 0] -= h / 3.0
            W[j, simpson_end] -= h / 3.0
        if j % 2 == 1:
            W[j, j - 3:j + 1] += np.array([1.0, 3.0, 3.0, 1.0]) * 3.0 * h / 8.0
    return W


class DuhamelOperator:
    """The right side of the integral equation on a fixed set of time nodes"""

    def __init__(self, phi, psi, grid: TorusGrid, params: DispersionParams, config: SolverConfig):
        self.grid = grid
        self.params = params
        self.config = config
        self.times = config.times
        phi = check_real_data("phi", phi, grid)
        psi = check_real_data("psi", psi, grid)
        w = velocity_data(psi, grid)

        self.weights = duhamel_weights(self.times)
        lags = self.times[:, None] - self.times[None, :]
        # factors for t_j - t_i, one row of modes per pair (j, i)
        self.sine = sine_factor(lags, grid, params)
        self.cosine = cosine_factor(lags, grid, params)

        sin_t = sine_factor(self.times, grid, params)
        cos_t = cosine_factor(self.times, grid, params)
        g2 = grid.wavenumbers ** 2 * (1.0 - params.beta * grid.wavenumbers ** 2 + grid.wavenumbers ** 4)
        self.free_u = cos_t * phi + sin_t * w
        # d/dt of cos(t gamma) is -gamma^2 * sin(t gamma) / gamma
        self.free_v = -g2 * sin_t * phi + cos_t * w

    def forcing(self, u_hat: np.ndarray) -> np.ndarray:
        return self.config.coupling * nonlinear_term(u_hat, self.grid, self.config.dealias_fraction)

    def apply(self, u_hat: np.ndarray) -> np.ndarray:
        """u-component of the right side for the trajectory u_hat (nodes x modes)"""
        forcing = self.forcing(u_hat)
        return self.free_u + np.einsum("ji,jik,ik->jk", self.weights, self.sine, forcing)

    def velocity(self, u_hat: np.ndarray) -> np.ndarray:
        """u_t-component of the right side"""
        forcing = self.forcing(u_hat)
        return self.free_v + np.einsum("ji,jik,ik->jk", self.weights, self.cosine, forcing)

    def sup_norm(self, difference: np.ndarray) -> float:
        return float(np.max(hs_norm_torus(difference, self.grid, self.config.sobolev_s)))


def picard_solve(phi, psi, grid: TorusGrid, params: DispersionParams, config: SolverConfig) -> Trajectory:
    """
    Solve the Cauchy problem on [0, T] by Picard iteration

    Args:
        phi: Coefficients of u(0)
        psi: Coefficients of psi, where u_t(0) = psi_x
        grid: Torus mode lattice
        params: Model variant
        config: Time nodes (odd count), tolerance and iteration budget

    Returns:
        Trajectory carrying the iteration count and the residual history

    Raises:
        NoContractionError: the residual did not drop below picard_tol
    """
    if config.n_time_nodes % 2 == 0:
        raise InvalidArgumentError("picard_solve needs an odd number of time nodes")
    operator = DuhamelOperator(phi, psi, grid, params, config)
    current = operator.free_u
    residuals: List[float] = []

    for iteration in range(1, int(config.max_picard_iters) + 1):
        updated = operator.apply(current)
        residual = operator.sup_norm(updated - current)
        residuals.append(residual)
        current = updated
        logger.debug("picard iteration %d: residual %.3e", iteration, residual)
        if not np.isfinite(residual):
            raise NoContractionError(residuals[-2:], iteration, config.T)
        if residual < config.picard_tol:
            logger.info("picard converged in %d iteration(s) on [0, %g]", iteration, config.T)
            return Trajectory(
                grid,
                operator.times,
                current,
                operator.velocity(current),
                iterations=iteration,
                residuals=tuple(residuals),
            )

    raise NoContractionError(residuals[-2:], int(config.max_picard_iters), config.T)


def integral_equation_residual(
    trajectory: Trajectory,
    phi,
    psi,
    params: DispersionParams,
    config: SolverConfig,
) -> float:
    """sup over nodes of ||Phi(u) - u||_{H^s} for the Duhamel map Phi"""
    operator = DuhamelOperator(phi, psi, trajectory.grid, params, config)
    return operator.sup_norm(operator.apply(trajectory.u_hat) - trajectory.u_hat)


def period_doubling_discrepancy(
    phi_spectrum,
    psi_spectrum,
    grid: TorusGrid,
    params: DispersionParams,
    config: SolverConfig,
    n_points: int = 201,
) -> Tuple[float, float]:
    """
    Compare final-time solutions on period P and 2P at common physical points

    Data are given by their transforms on the real line. Returns
    (max abs difference, max abs value) over points in [-P/4, P/4].
    """
    x = np.linspace(-grid.period / 4.0, grid.period / 4.0, n_points)
    finals = []
    for torus in (grid, grid.doubled()):
        phi = torus.sample_spectrum(phi_spectrum)
        psi = torus.sample_spectrum(psi_spectrum)
        trajectory = picard_solve(phi, psi, torus, params, config)
        finals.append(torus.evaluate(trajectory.u_hat[-1], x))
    return float(np.max(np.abs(finals[0] - finals[1]))), float(np.max(np.abs(finals[0])))
