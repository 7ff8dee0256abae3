"""
Calculus Inequalities
Numeric checks of the two integral bounds behind the bilinear estimate:

    int dx / (<x - lam>^p <x - mu>^q) <~ <lam - mu>^-r,   r = min(p, q, p + q - 1)
    int dx / <a0 + a1 |x| + a2 x^2 + a3 |x|^3>^q <~ 1,     q > 1/3
"""

import logging
from itertools import product
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from src.models.dispersion import bracket
from src.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Exponents sampled by the convolution battery
BATTERY_EXPONENTS = (0.75, 1.5, 2.0, 3.0)
BATTERY_DISTANCES = (0.0, 1.0, 10.0, 100.0, 1000.0)
BATTERY_BOUND = 10.0

# Pairs whose constants exceed BATTERY_BOUND. For (3/4, 3/4) the product tends to
# 2 B(1/4, 1/2) + B(1/4, 1/4) ~ 17.9; for (3/2, 3/2) it stays below 8 * 2^(3/2).
BATTERY_PAIR_BOUNDS = {(0.75, 0.75): 25.0, (1.5, 1.5): 25.0}

# Above this log-radius the cubic is evaluated through its leading term
_LOG_RADIUS_SWITCH = 30.0


class ConvolutionSample(NamedTuple):
    lam: float
    mu: float
    p: float
    q: float
    integral: float
    product: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.product <= self.bound


def convolution_exponent(p: float, q: float) -> float:
    return min(p, q, p + q - 1.0)


def pair_bound(p: float, q: float, default: float = BATTERY_BOUND) -> float:
    """Bound on the product for the exponent pair (p, q)"""
    return BATTERY_PAIR_BOUNDS.get((p, q), default)


def lemma31_check_convolution(lam: float, mu: float, p: float, q: float, sample_count: int = 200) -> Tuple[float, float]:
    """
    Integrate 1 / (<x - lam>^p <x - mu>^q) over the real line

    A window of half width 100 (1 + |lam - mu|) around the midpoint is integrated
    with lam and mu as breakpoints; the tails are integrated separately.

    Args:
        sample_count: Subinterval budget of the adaptive rule

    Returns:
        (integral, integral * <lam - mu>^r)
    """
    if not (p > 0 and q > 0 and p + q > 1):
        raise InvalidArgumentError(f"need p, q > 0 and p + q > 1, got p={p}, q={q}")

    def integrand(x):
        return 1.0 / (bracket(x - lam) ** p * bracket(x - mu) ** q)

    distance = abs(lam - mu)
    center = 0.5 * (lam + mu)
    half_width = 100.0 * (1.0 + distance)
    lo, hi = center - half_width, center + half_width
    breakpoints = sorted({lam, mu})
    core, _ = quad(integrand, lo, hi, points=breakpoints, limit=int(sample_count), epsabs=1e-13, epsrel=1e-11)
    left, _ = quad(integrand, -np.inf, lo, limit=int(sample_count))
    right, _ = quad(integrand, hi, np.inf, limit=int(sample_count))
    integral = core + left + right
    return integral, integral * bracket(distance) ** convolution_exponent(p, q)


def convolution_battery(
    exponents: Sequence[float] = BATTERY_EXPONENTS,
    distances: Sequence[float] = BATTERY_DISTANCES,
    rng=None,
    bound: float = BATTERY_BOUND,
) -> List[ConvolutionSample]:
    """
    Evaluate the convolution bound over every exponent pair and distance

    Each sample carries the bound of its pair: BATTERY_PAIR_BOUNDS where listed,
    otherwise bound.

    With an rng the pair (lam, mu) is shifted by a random offset and its order
    is randomized; the integral is translation invariant.
    """
    samples = []
    for p, q in product(exponents, repeat=2):
        if p + q <= 1:
            continue
        for d in distances:
            lam = 0.0 if rng is None else float(rng.uniform(-50.0, 50.0))
            mu = lam + (d if rng is None or rng.random() < 0.5 else -d)
            integral, value = lemma31_check_convolution(lam, mu, p, q)
            samples.append(ConvolutionSample(lam, mu, p, q, integral, value, pair_bound(p, q, bound)))
    logger.debug("convolution battery: %d samples, largest product %.3f", len(samples), max(s.product for s in samples))
    return samples


def _cubic_log_bracket(y: np.ndarray, coefficients: Tuple[float, float, float, float]) -> np.ndarray:
    """log(1 + |P(e^y)|) for the cubic P, stable for large y"""
    a0, a1, a2, a3 = coefficients
    y = np.asarray(y, dtype=float)
    small = y <= _LOG_RADIUS_SWITCH
    x = np.exp(np.minimum(y, _LOG_RADIUS_SWITCH))
    direct = np.log1p(np.abs(a0 + a1 * x + a2 * x * x + a3 * x ** 3))
    e = np.exp(-np.maximum(y, _LOG_RADIUS_SWITCH))
    leading = 3.0 * y + np.log(abs(a3)) + np.log(np.abs(1.0 + (a2 * e + a1 * e * e + a0 * e ** 3) / a3))
    return np.where(small, direct, leading)


def cubic_window(a0: float, a1: float, a2: float, a3: float) -> Tuple[float, List[float]]:
    """Radius past every positive root and the scale of each coefficient, and those roots"""
    roots = np.roots([a3, a2, a1, a0])
    positive = sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and r.real > 0)
    largest = positive[-1] if positive else 0.0
    scale = abs(a0 / a3) ** (1.0 / 3.0) + abs(a1 / a3) ** 0.5 + abs(a2 / a3)
    return 2.0 * largest + 2.0 * scale + 10.0, positive


def lemma31_check_cubic(a0: float, a1: float, a2: float, a3: float, q: float) -> float:
    """
    Integrate 1 / <a0 + a1 |x| + a2 x^2 + a3 |x|^3>^q over the real line

    The integrand is even. [0, R] is integrated directly with the positive roots
    as breakpoints; the tail [R, inf) is mapped to z = x^-k, k = 3q - 1, which
    turns its slow algebraic decay into a bounded integrand on (0, R^-k].
    """
    if not q > 1.0 / 3.0:
        raise InvalidArgumentError(f"the cubic bound needs q > 1/3, got {q}")
    if a3 == 0:
        raise InvalidArgumentError("the cubic bound needs a nonzero cubic coefficient")
    coefficients = (float(a0), float(a1), float(a2), float(a3))
    radius, roots = cubic_window(*coefficients)

    def core_integrand(x):
        return bracket(a0 + a1 * x + a2 * x * x + a3 * x ** 3) ** (-q)

    core, _ = quad(core_integrand, 0.0, radius, points=roots or None, limit=200, epsabs=1e-12, epsrel=1e-10)

    k = 3.0 * q - 1.0

    def tail_integrand(z):
        y = -np.log(z) / k
        return float(np.exp((1.0 + k) * y - q * _cubic_log_bracket(y, coefficients))) / k

    tail, _ = quad(tail_integrand, 0.0, radius ** (-k), limit=200, epsabs=1e-12, epsrel=1e-10)
    total = 2.0 * (core + tail)
    logger.debug("cubic check a=%s q=%g: %.6f", coefficients, q, total)
    return total
