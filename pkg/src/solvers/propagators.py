"""
Free Propagators
Cosine and sine families of the linear flow u_tt = u_xx + beta u_xxxx + u_xxxxxx
"""

import numpy as np

from src.models.dispersion import DispersionParams, gamma
from src.solvers.torus import TorusGrid, TorusState, check_real_data


def cosine_factor(t, grid: TorusGrid, params: DispersionParams) -> np.ndarray:
    """cos(t gamma(xi_k)); t may be an array, giving one row per entry"""
    t = np.asarray(t, dtype=float)
    return np.cos(t[..., None] * gamma(grid.wavenumbers, params))


def sine_factor(t, grid: TorusGrid, params: DispersionParams) -> np.ndarray:
    """sin(t gamma) / gamma, equal to t where gamma = 0"""
    t = np.asarray(t, dtype=float)[..., None]
    g = gamma(grid.wavenumbers, params)
    # np.sinc(z) = sin(pi z) / (pi z) with the exact value 1 at z = 0
    return t * np.sinc(t * g / np.pi)


def apply_Vc(coefficients, t: float, grid: TorusGrid, params: DispersionParams) -> np.ndarray:
    """Multiply each mode by cos(t gamma(xi_k))"""
    if t == 0:
        return np.array(coefficients, dtype=complex)
    return cosine_factor(t, grid, params) * coefficients


def apply_Vs(coefficients, t: float, grid: TorusGrid, params: DispersionParams) -> np.ndarray:
    """Multiply each mode by sin(t gamma(xi_k)) / gamma(xi_k)"""
    return sine_factor(t, grid, params) * coefficients


def velocity_data(psi, grid: TorusGrid) -> np.ndarray:
    """Coefficients of psi_x; the unpaired Nyquist mode is dropped to keep the result real"""
    w = 1j * grid.wavenumbers * np.asarray(psi, dtype=complex)
    w[..., grid.nyquist_index] = 0.0
    return w


def linear_evolve(phi, psi, t: float, grid: TorusGrid, params: DispersionParams) -> TorusState:
    """
    Free evolution of u(0) = phi, u_t(0) = psi_x to time t

    u_hat(t) = cos(t gamma) phi_hat + sin(t gamma) / gamma * (i xi psi_hat)
    v_hat(t) = -gamma sin(t gamma) phi_hat + cos(t gamma) * (i xi psi_hat)
    """
    phi = check_real_data("phi", phi, grid)
    psi = check_real_data("psi", psi, grid)
    w = velocity_data(psi, grid)
    g = gamma(grid.wavenumbers, params)
    cos_t = np.cos(t * g)
    sin_t = np.sin(t * g)
    u_hat = cos_t * phi + sine_factor(t, grid, params) * w
    v_hat = -g * sin_t * phi + cos_t * w
    return TorusState(grid, u_hat, v_hat, float(abs(t)))


def mode_energy(state: TorusState, params: DispersionParams) -> np.ndarray:
    """Per-mode energy |v_hat|^2 + gamma^2 |u_hat|^2"""
    g = gamma(state.grid.wavenumbers, params)
    return np.abs(state.v_hat) ** 2 + g ** 2 * np.abs(state.u_hat) ** 2
