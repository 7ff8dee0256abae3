"""
Oscillatory Kernel
K(t, xi, xi1) = int_0^t sin((t - t') gamma(xi)) cos(t' gamma(xi2)) cos(t' gamma(xi1)) dt'
with xi2 = xi - xi1, in closed form and by two quadrature paths
"""

import logging

import numpy as np
from scipy.integrate import quad, simpson

from src.models.dispersion import DispersionParams, gamma
from src.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Below this argument sin(x)/x switches to its Taylor polynomial
SINC_SERIES_THRESHOLD = 1e-4

# |gamma(xi)^2 - omega^2| below this fraction of gamma(xi)^2 counts as resonant
RESONANCE_TOL = 1e-6

# QUADPACK's floor for a purely relative tolerance is 50 machine epsilons
QUADRATURE_EPSREL = 1e-13
QUADRATURE_LIMIT = 500

# Roundings of each sinc phase that kernel_agreement does not charge
PHASE_ROUNDING_ULPS = 8


def _sinc(x):
    """sin(x) / x with the series 1 - x^2/6 + x^4/120 near 0"""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def forced_response(g, omega, t):
    """
    int_0^t sin(g (t - t')) cos(omega t') dt'

    Written as (g t^2 / 2) sinc((omega + g) t / 2) sinc((omega - g) t / 2), which
    equals g (cos(omega t) - cos(g t)) / (g^2 - omega^2) and stays finite on
    resonance omega = +-g.
    """
    g = np.asarray(g, dtype=float)
    omega = np.asarray(omega, dtype=float)
    t = np.asarray(t, dtype=float)
    return 0.5 * g * t * t * _sinc(0.5 * (omega + g) * t) * _sinc(0.5 * (omega - g) * t)


def _frequencies(xi, xi1, xi2, params: DispersionParams):
    g = gamma(xi, params)
    g1 = gamma(xi1, params)
    g2 = gamma(xi2, params)
    return g, np.abs(g1 - g2), g1 + g2


def near_resonant(g, omega):
    """Mask of |g^2 - omega^2| < RESONANCE_TOL g^2, where the sinc series takes over"""
    g = np.asarray(g, dtype=float)
    omega = np.asarray(omega, dtype=float)
    return (np.abs(g * g - omega * omega) < RESONANCE_TOL * g * g) & (g > 0)


def phase_sensitivity(g, omega, t):
    """|a dF/da| + |b dF/db| for the phases a, b = (omega +- g) t / 2 of forced_response"""
    g = np.asarray(g, dtype=float)
    omega = np.asarray(omega, dtype=float)
    a = 0.5 * (omega + g) * t
    b = 0.5 * (omega - g) * t
    sa = _sinc(a)
    sb = _sinc(b)
    return 0.5 * g * t * t * (np.abs((np.cos(a) - sa) * sb) + np.abs(sa * (np.cos(b) - sb)))


def kernel_K(t, xi, xi1, xi2, params: DispersionParams):
    """Closed form of K by product-to-sum; broadcasts over array arguments"""
    if np.any(np.asarray(t) < 0):
        raise InvalidArgumentError("kernel_K needs t >= 0")
    g, omega_minus, omega_plus = _frequencies(xi, xi1, xi2, params)
    resonant = int(np.count_nonzero(near_resonant(g, omega_minus))) + int(np.count_nonzero(near_resonant(g, omega_plus)))
    if resonant:
        logger.warning("kernel_K: %d near-resonant frequency pairs evaluated by the sinc series", resonant)
    result = 0.5 * (forced_response(g, omega_minus, t) + forced_response(g, omega_plus, t))
    return result if np.ndim(result) else float(result)


def kernel_K_quadrature(t: float, xi: float, xi1: float, xi2: float, params: DispersionParams) -> float:
    """
    Adaptive quadrature oracle: QUADPACK's cosine-weighted rule for each frequency
    with a purely relative tolerance
    """
    if t < 0:
        raise InvalidArgumentError("kernel_K needs t >= 0")
    g, omega_minus, omega_plus = (float(v) for v in _frequencies(xi, xi1, xi2, params))
    if t == 0 or g == 0:
        return 0.0

    def integrand(tp):
        return np.sin(g * (t - tp))

    total = 0.0
    for omega in (omega_minus, omega_plus):
        if omega == 0.0:
            value, _ = quad(integrand, 0.0, t, epsabs=0.0, epsrel=QUADRATURE_EPSREL, limit=QUADRATURE_LIMIT)
        else:
            value, _ = quad(
                integrand, 0.0, t, weight="cos", wvar=omega, epsabs=0.0, epsrel=QUADRATURE_EPSREL, limit=QUADRATURE_LIMIT
            )
        total += value
    return 0.5 * total


def kernel_K_simpson(t: float, xi, xi1, xi2, params: DispersionParams, n_nodes: int = 33):
    """Composite Simpson on n_nodes (odd) equally spaced t' nodes; broadcasts over xi, xi1, xi2"""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise InvalidArgumentError(f"n_nodes must be odd and >= 3, got {n_nodes}")
    if t < 0:
        raise InvalidArgumentError("kernel_K needs t >= 0")
    g = np.asarray(gamma(xi, params))[..., None]
    g1 = np.asarray(gamma(xi1, params))[..., None]
    g2 = np.asarray(gamma(xi2, params))[..., None]
    tp = np.linspace(0.0, t, n_nodes)
    values = np.sin((t - tp) * g) * np.cos(tp * g2) * np.cos(tp * g1)
    result = simpson(values, x=tp, axis=-1)
    return result if np.ndim(result) else float(result)


def kernel_agreement(t: float, xi: float, xi1: float, xi2: float, params: DispersionParams) -> float:
    """
    |closed form - quadrature| / |K| beyond PHASE_ROUNDING_ULPS roundings of the sinc phases;
    0 when both vanish
    """
    closed = kernel_K(t, xi, xi1, xi2, params)
    oracle = kernel_K_quadrature(t, xi, xi1, xi2, params)
    g, omega_minus, omega_plus = (float(v) for v in _frequencies(xi, xi1, xi2, params))
    sensitivity = 0.5 * (phase_sensitivity(g, omega_minus, t) + phase_sensitivity(g, omega_plus, t))
    excess = max(0.0, abs(closed - oracle) - PHASE_ROUNDING_ULPS * np.finfo(float).eps * float(sensitivity))
    if closed == 0.0:
        return 0.0 if excess == 0.0 else float("inf")
    return excess / abs(closed)
