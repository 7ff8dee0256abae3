"""
Torus Discretization
Periodic truncation of the real line: mode lattice, solver state, solver
settings and trajectories
"""

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy import fft as sfft

from src.models.norms import hs_norm_torus
from src.utils.errors import InvalidArgumentError

# Relative tolerance for Hermitian symmetry of torus coefficients
REALITY_TOL = 1e-10


@dataclass(frozen=True)
class TorusGrid:
    """Spatial period and mode count; coefficients are stored in FFT order"""

    period: float
    n_modes: int

    def __post_init__(self):
        if not self.period > 0 or not np.isfinite(self.period):
            raise InvalidArgumentError(f"period must be positive, got {self.period}")
        if int(self.n_modes) != self.n_modes or self.n_modes < 8 or self.n_modes % 2:
            raise InvalidArgumentError(f"n_modes must be even and >= 8, got {self.n_modes}")

    @property
    def mode_numbers(self) -> np.ndarray:
        """Integer k of each stored coefficient"""
        return np.rint(sfft.fftfreq(self.n_modes, d=1.0 / self.n_modes)).astype(int)

    @property
    def wavenumbers(self) -> np.ndarray:
        """xi_k = 2 pi k / period"""
        return 2.0 * np.pi * self.mode_numbers / self.period

    @property
    def points(self) -> np.ndarray:
        """Collocation points x_j = j * period / n_modes"""
        return np.arange(self.n_modes) * (self.period / self.n_modes)

    @property
    def nyquist_index(self) -> int:
        return self.n_modes // 2

    def to_physical(self, coefficients) -> np.ndarray:
        """Real samples of sum_k c_k e^{i xi_k x} at the collocation points"""
        return np.real(sfft.ifft(coefficients, axis=-1)) * self.n_modes

    def from_physical(self, samples) -> np.ndarray:
        """Fourier-series coefficients of real samples"""
        return sfft.fft(samples, axis=-1) / self.n_modes

    def evaluate(self, coefficients, x) -> np.ndarray:
        """Fourier series at arbitrary points x (Nyquist mode counted as a cosine)"""
        c = np.array(coefficients, dtype=complex)
        phases = np.exp(1j * np.outer(np.asarray(x, dtype=float), self.wavenumbers))
        nyq = self.nyquist_index
        phases[:, nyq] = np.cos(np.asarray(x, dtype=float) * self.wavenumbers[nyq])
        return np.real(phases @ c)

    def sample_spectrum(self, fn) -> np.ndarray:
        """Coefficients c_k = g_hat(xi_k) / period of a function given by its transform"""
        return np.asarray(fn(self.wavenumbers), dtype=complex) / self.period

    def doubled(self) -> "TorusGrid":
        """Twice the period at the same largest wavenumber"""
        return TorusGrid(2.0 * self.period, 2 * self.n_modes)


def hermitian_defect(coefficients) -> float:
    """Relative violation of c_{-k} = conj(c_k), Nyquist mode required real"""
    c = np.asarray(coefficients)
    mirror = np.conj(np.roll(c[..., ::-1], 1, axis=-1))
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(c - mirror))) / scale


def check_real_data(name: str, coefficients, grid: TorusGrid) -> np.ndarray:
    """Validate shape and Hermitian symmetry of torus data"""
    c = np.array(coefficients, dtype=complex)
    if c.shape != (grid.n_modes,):
        raise InvalidArgumentError(f"{name} must have {grid.n_modes} coefficients, got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidArgumentError(f"{name} has non-finite coefficients")
    if hermitian_defect(c) > REALITY_TOL:
        raise InvalidArgumentError(f"{name} is not the transform of a real function")
    return c


def _bump_profile(xi, width: float, cutoff: float) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    return np.where(np.abs(xi) <= cutoff, np.exp(-0.5 * (xi / width) ** 2), 0.0)


def spectral_bump(
    grid: TorusGrid,
    width: float,
    cutoff: float,
    norm: float,
    s: float = 0.0,
) -> np.ndarray:
    """
    Gaussian profile exp(-xi^2 / (2 width^2)) cut off at |xi| <= cutoff and
    scaled to the requested H^s norm
    """
    profile = _bump_profile(grid.wavenumbers, width, cutoff)
    profile[grid.nyquist_index] = 0.0
    coefficients = profile.astype(complex)
    current = hs_norm_torus(coefficients, grid, s)
    if current == 0.0:
        raise InvalidArgumentError("cutoff excludes every mode of the torus")
    return coefficients * (norm / current)


def bump_spectrum(
    grid: TorusGrid,
    width: float,
    cutoff: float,
    norm: float,
    s: float = 0.0,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Line transform g_hat of the bump, so that grid.sample_spectrum(g_hat)
    reproduces spectral_bump(grid, ...) away from the Nyquist mode
    """
    coefficients = spectral_bump(grid, width, cutoff, norm, s)
    k = int(np.argmax(np.abs(coefficients)))
    factor = grid.period * float(coefficients[k].real) / float(_bump_profile(grid.wavenumbers[k], width, cutoff))

    def transform(xi):
        return factor * _bump_profile(xi, width, cutoff)

    return transform


@dataclass(frozen=True)
class TorusState:
    """Coefficients of u and u_t at one time"""

    grid: TorusGrid
    u_hat: np.ndarray
    v_hat: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        shape = (self.grid.n_modes,)
        for name in ("u_hat", "v_hat"):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != shape:
                raise InvalidArgumentError(f"{name} must have shape {shape}, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.time < 0:
            raise InvalidArgumentError(f"time must be non-negative, got {self.time}")

    def hermitian_defect(self) -> float:
        return max(hermitian_defect(self.u_hat), hermitian_defect(self.v_hat))


@dataclass(frozen=True)
class SolverConfig:
    """Settings shared by the Picard solver and the step oracle"""

    T: float
    n_time_nodes: int = 101
    picard_tol: float = 1e-12
    max_picard_iters: int = 50
    dealias_fraction: float = 2.0 / 3.0
    sobolev_s: float = 0.0
    coupling: float = 1.0
    oracle_substeps: int = 4

    def __post_init__(self):
        if not self.T > 0:
            raise InvalidArgumentError(f"T must be positive, got {self.T}")
        if int(self.n_time_nodes) != self.n_time_nodes or self.n_time_nodes < 2:
            raise InvalidArgumentError(f"n_time_nodes must be an integer >= 2, got {self.n_time_nodes}")
        if not self.picard_tol > 0:
            raise InvalidArgumentError(f"picard_tol must be positive, got {self.picard_tol}")
        if int(self.max_picard_iters) != self.max_picard_iters or self.max_picard_iters < 1:
            raise InvalidArgumentError("max_picard_iters must be an integer >= 1")
        if not 0 < self.dealias_fraction <= 1:
            raise InvalidArgumentError(f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}")
        if int(self.oracle_substeps) != self.oracle_substeps or self.oracle_substeps < 1:
            raise InvalidArgumentError("oracle_substeps must be an integer >= 1")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, int(self.n_time_nodes))


@dataclass(frozen=True)
class Trajectory:
    """Solver output: coefficients of u and u_t at every time node"""

    grid: TorusGrid
    times: np.ndarray
    u_hat: np.ndarray
    v_hat: np.ndarray
    iterations: int = 0
    residuals: Tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("times", "u_hat", "v_hat"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.u_hat.shape != (len(self.times), self.grid.n_modes) or self.v_hat.shape != self.u_hat.shape:
            raise InvalidArgumentError("trajectory arrays do not match times x modes")

    def __len__(self) -> int:
        return len(self.times)

    def state(self, j: int) -> TorusState:
        return TorusState(self.grid, self.u_hat[j], self.v_hat[j], float(self.times[j]))

    @property
    def states(self) -> List[TorusState]:
        return [self.state(j) for j in range(len(self))]

    def hs_norms(self, s: float) -> np.ndarray:
        return np.atleast_1d(hs_norm_torus(self.u_hat, self.grid, s))

    def distance(self, other: "Trajectory", s: float) -> float:
        """sup over time nodes of the H^s distance between u components"""
        if other.u_hat.shape != self.u_hat.shape:
            raise InvalidArgumentError("trajectories sample different nodes or modes")
        return float(np.max(hs_norm_torus(self.u_hat - other.u_hat, self.grid, s)))
