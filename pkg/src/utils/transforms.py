"""
Spectral Transforms
Discrete Fourier transform contract and frequency-side convolution
"""

import logging
from typing import Tuple

import numpy as np
from scipy import fft as sfft
from scipy.signal import fftconvolve

from src.utils.errors import ConvolutionSupportError, InvalidArgumentError
from src.utils.grids import (
    NODE_TOL,
    FrequencyGrid,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
)

logger = logging.getLogger(__name__)

# Largest fraction of convolution mass a truncation may discard
TRUNCATION_TOL = 1e-10


def dft_forward(samples, period: float) -> SpectralField:
    """
    Transform samples g(x_j), x_j = j * period / n, to g_hat(xi_k) ~ int e^{-ix xi} g dx

    Frequencies are xi_k = 2 pi k / period for k = -(n // 2) .. (n - 1) // 2,
    returned in increasing order.
    """
    samples = np.asarray(samples)
    if samples.ndim != 1 or samples.size < 2:
        raise InvalidArgumentError("dft_forward needs a 1-D array of at least 2 samples")
    if not period > 0:
        raise InvalidArgumentError(f"period must be positive, got {period}")
    n = samples.size
    k_first = -(n // 2)
    step = 2.0 * np.pi / period
    grid = FrequencyGrid(k_first * step, (k_first + n - 1) * step, n, symmetric=(n % 2 == 1))
    values = sfft.fftshift(sfft.fft(samples)) * (period / n)
    return SpectralField(grid, values)


def dft_inverse(field: SpectralField, n_points: int) -> np.ndarray:
    """Inverse of dft_forward: samples at x_j = j * period / n_points"""
    grid = field.grid
    if n_points != grid.n_nodes:
        raise InvalidArgumentError(
            f"field has {grid.n_nodes} frequencies, cannot produce {n_points} samples"
        )
    if grid.index_of(0.0) != n_points // 2 or not grid.is_aligned():
        raise InvalidArgumentError("field grid is not a DFT frequency grid")
    period = 2.0 * np.pi / grid.spacing
    return sfft.ifft(sfft.ifftshift(field.values)) * (n_points / period)


def _check_spacing(a: FrequencyGrid, b: FrequencyGrid) -> None:
    if abs(a.spacing - b.spacing) > NODE_TOL * a.spacing:
        raise InvalidArgumentError(
            f"grid spacings differ: {a.spacing:.6g} vs {b.spacing:.6g}"
        )


SPANS = ("input", "sum")


def _output_axis(a: FrequencyGrid, b: FrequencyGrid, span: str) -> Tuple[FrequencyGrid, int]:
    """
    Output axis for the convolution of fields on a and b, and the index of its
    first node inside the full discrete convolution.

    span="input" needs a == b and truncates back to that axis. span="sum" accepts
    any two axes of one spacing and returns their full sum set.
    """
    if span not in SPANS:
        raise InvalidArgumentError(f"span must be one of {SPANS}, got {span!r}")
    _check_spacing(a, b)
    if span == "input":
        if a != b:
            raise InvalidArgumentError("convolution over the input span needs both fields on the same grid")
        if not a.is_aligned():
            raise InvalidArgumentError("same-grid convolution needs a grid aligned with xi = 0")
        return a, int(round(-a.lattice_offset))
    n = a.n_nodes + b.n_nodes - 1
    xi_min = a.xi_min + b.xi_min
    symmetric = a.symmetric and b.symmetric
    if symmetric:
        half = a.xi_max + b.xi_max
        return FrequencyGrid(-half, half, n, symmetric=True), 0
    return FrequencyGrid.from_spacing(xi_min, a.spacing, n), 0


def _truncate(full: np.ndarray, starts, sizes) -> np.ndarray:
    window = tuple(slice(s, s + n) for s, n in zip(starts, sizes))
    kept = full[window]
    total = float(np.sum(np.abs(full)))
    if total > 0:
        discarded = (total - float(np.sum(np.abs(kept)))) / total
        if discarded > TRUNCATION_TOL:
            raise ConvolutionSupportError(discarded)
    return kept


def convolve(f: SpectralField, g: SpectralField, span: str = "input") -> SpectralField:
    """
    Frequency convolution int f(xi1) g(xi - xi1) dxi1 as a spacing-scaled discrete sum

    With span="sum" the fields may live on different grids of one spacing and
    the output covers the sum of their supports.

    Raises:
        InvalidArgumentError: grids differ (span="input") or spacings differ
        ConvolutionSupportError: the output grid would cut off convolution mass
    """
    axis, start = _output_axis(f.grid, g.grid, span)
    full = fftconvolve(f.values, g.values, mode="full") * f.grid.spacing
    values = _truncate(full, (start,), (axis.n_nodes,))
    return SpectralField(axis, values, f.real_origin and g.real_origin)


def convolve2d(f: SpaceTimeField, g: SpaceTimeField, span: str = "input") -> SpaceTimeField:
    """2-D analogue of convolve over (tau, xi); both fields must share the shear"""
    if abs(f.grid.shear - g.grid.shear) > NODE_TOL * max(1.0, abs(f.grid.shear)):
        raise InvalidArgumentError("fields use different tau shears")
    tau_axis, tau_start = _output_axis(f.grid.tau_axis, g.grid.tau_axis, span)
    xi_axis, xi_start = _output_axis(f.grid.xi_axis, g.grid.xi_axis, span)
    cell = f.grid.tau_axis.spacing * f.grid.xi_axis.spacing
    full = fftconvolve(f.values, g.values, mode="full") * cell
    values = _truncate(full, (tau_start, xi_start), (tau_axis.n_nodes, xi_axis.n_nodes))
    logger.debug("convolve2d: %s x %s -> %s", f.grid.shape, g.grid.shape, values.shape)
    return SpaceTimeField(SpaceTimeGrid(tau_axis, xi_axis, f.grid.shear), values)
