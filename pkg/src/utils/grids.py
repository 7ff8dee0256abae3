"""
Frequency Grids
Uniform sampling of the frequency line and of the (tau, xi) plane, the fields
living on them, and trapezoid quadrature
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from src.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Relative tolerance for node membership and lattice alignment
NODE_TOL = 1e-9

# Relative tolerance for the Hermitian symmetry of real-origin fields
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of nodes xi_min + k * spacing, k = 0 .. n_nodes - 1"""

    xi_min: float
    xi_max: float
    n_nodes: int
    symmetric: bool = False

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise InvalidArgumentError(f"n_nodes must be an integer >= 2, got {self.n_nodes}")
        if not (np.isfinite(self.xi_min) and np.isfinite(self.xi_max)):
            raise InvalidArgumentError("grid endpoints must be finite")
        if self.xi_max <= self.xi_min:
            raise InvalidArgumentError(
                f"empty grid span [{self.xi_min}, {self.xi_max}]"
            )
        if self.symmetric:
            if self.n_nodes % 2 == 0:
                raise InvalidArgumentError("a symmetric grid needs an odd node count")
            if abs(self.xi_min + self.xi_max) > NODE_TOL * self.xi_max:
                raise InvalidArgumentError("a symmetric grid needs xi_min = -xi_max")

    @classmethod
    def from_spacing(cls, xi_min: float, spacing: float, n_nodes: int) -> "FrequencyGrid":
        """Build a grid from its first node, spacing and node count"""
        if spacing <= 0:
            raise InvalidArgumentError(f"spacing must be positive, got {spacing}")
        return cls(float(xi_min), float(xi_min + (n_nodes - 1) * spacing), int(n_nodes))

    @property
    def spacing(self) -> float:
        return (self.xi_max - self.xi_min) / (self.n_nodes - 1)

    @property
    def nodes(self) -> np.ndarray:
        k = np.arange(self.n_nodes)
        if self.symmetric:
            # exact zero at the center and exact antisymmetry
            return (k - (self.n_nodes - 1) // 2) * self.spacing
        return self.xi_min + k * self.spacing

    @property
    def lattice_offset(self) -> float:
        """Position of xi_min measured in spacings"""
        return self.xi_min / self.spacing

    def is_aligned(self) -> bool:
        """True when the origin is (or extends) a lattice point of the grid"""
        offset = self.lattice_offset
        return abs(offset - round(offset)) <= NODE_TOL * max(1.0, abs(offset))

    def covers(self, lo: float, hi: float) -> bool:
        """True when [lo, hi] lies inside the grid span"""
        slack = NODE_TOL * self.spacing
        return self.xi_min - slack <= lo and hi <= self.xi_max + slack

    def index_of(self, xi: float) -> int:
        """Index of the node nearest to xi"""
        return int(round((xi - self.xi_min) / self.spacing))

    def indicator(self, lo: float, hi: float) -> np.ndarray:
        """Characteristic function of [lo, hi] sampled on the nodes, endpoints included"""
        slack = NODE_TOL * self.spacing
        xi = self.nodes
        return ((xi >= lo - slack) & (xi <= hi + slack)).astype(float)

    def reflected(self) -> "FrequencyGrid":
        """Grid of the negated nodes"""
        return FrequencyGrid(-self.xi_max, -self.xi_min, self.n_nodes, self.symmetric)


def make_symmetric_grid(half_width: float, n_nodes: int) -> FrequencyGrid:
    """
    Grid on [-half_width, half_width] with a node at 0

    Args:
        half_width: Positive half span
        n_nodes: Odd node count, at least 3
    """
    if not half_width > 0:
        raise InvalidArgumentError(f"half_width must be positive, got {half_width}")
    if int(n_nodes) != n_nodes or n_nodes < 3 or n_nodes % 2 == 0:
        raise InvalidArgumentError(f"n_nodes must be odd and >= 3, got {n_nodes}")
    return FrequencyGrid(-float(half_width), float(half_width), int(n_nodes), symmetric=True)


def _frozen_array(values, shape, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if arr.shape != shape:
        raise InvalidArgumentError(f"values have shape {arr.shape}, grid expects {shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("field values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectralField:
    """Complex function sampled on a FrequencyGrid"""

    grid: FrequencyGrid
    values: np.ndarray
    real_origin: bool = False

    def __post_init__(self):
        values = _frozen_array(self.values, (self.grid.n_nodes,))
        object.__setattr__(self, "values", values)
        if self.real_origin and self.grid.symmetric:
            mirror = np.conj(values[::-1])
            scale = max(float(np.max(np.abs(values))), np.finfo(float).tiny)
            if np.max(np.abs(values - mirror)) > HERMITIAN_TOL * scale:
                raise InvalidArgumentError("real-origin field is not Hermitian symmetric")

    @classmethod
    def from_function(cls, grid: FrequencyGrid, fn, real_origin: bool = False) -> "SpectralField":
        """Sample fn on the grid nodes"""
        return cls(grid, fn(grid.nodes), real_origin)

    def with_values(self, values) -> "SpectralField":
        return SpectralField(self.grid, values, self.real_origin)


def quadrature(field: SpectralField) -> complex:
    """Trapezoid-rule approximation of the integral of the field over the grid span"""
    return complex(trapezoid(field.values, dx=field.grid.spacing))


@dataclass(frozen=True)
class SpaceTimeGrid:
    """
    Product grid for (tau, xi)

    The tau axis may be sheared: the node (i, j) sits at physical
    tau = tau_axis[i] + shear * xi_axis[j]. The shear is linear, so it has unit
    Jacobian and commutes with convolution.
    """

    tau_axis: FrequencyGrid
    xi_axis: FrequencyGrid
    shear: float = 0.0

    def __post_init__(self):
        if not isinstance(self.tau_axis, FrequencyGrid) or not isinstance(self.xi_axis, FrequencyGrid):
            raise InvalidArgumentError("both axes must be FrequencyGrids")
        if not np.isfinite(self.shear):
            raise InvalidArgumentError("shear must be finite")

    @property
    def shape(self):
        return (self.tau_axis.n_nodes, self.xi_axis.n_nodes)

    def physical_tau(self) -> np.ndarray:
        """Physical tau at every node, shape (n_tau, n_xi)"""
        return self.tau_axis.nodes[:, None] + self.shear * self.xi_axis.nodes[None, :]

    def xi_mesh(self) -> np.ndarray:
        """xi at every node, shape (n_tau, n_xi)"""
        return np.broadcast_to(self.xi_axis.nodes[None, :], self.shape)

    def reflected(self) -> "SpaceTimeGrid":
        return SpaceTimeGrid(self.tau_axis.reflected(), self.xi_axis.reflected(), self.shear)


@dataclass(frozen=True)
class SpaceTimeField:
    """Complex function sampled on a SpaceTimeGrid, values indexed [tau, xi]"""

    grid: SpaceTimeGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, self.grid.shape))

    def with_values(self, values) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, values)


def quadrature2d(field: SpaceTimeField) -> complex:
    """Trapezoid rule over both axes"""
    grid = field.grid
    inner = trapezoid(field.values, dx=grid.xi_axis.spacing, axis=1)
    return complex(trapezoid(inner, dx=grid.tau_axis.spacing))


def reflect(field: SpaceTimeField) -> SpaceTimeField:
    """Negate both variables: (tau, xi) -> (-tau, -xi)"""
    return SpaceTimeField(field.grid.reflected(), field.values[::-1, ::-1])


def l2_norm(field, weights: Optional[np.ndarray] = None) -> float:
    """
    L2 norm by trapezoid quadrature, optionally of weights * field

    Nodes where the field vanishes contribute zero even where the weight is
    infinite.
    """
    values = np.asarray(field.values)
    density = np.abs(values) ** 2
    if weights is not None:
        with np.errstate(invalid="ignore", over="ignore"):
            density = np.where(values == 0, 0.0, density * np.asarray(weights) ** 2)
    if isinstance(field, SpaceTimeField):
        total = quadrature2d(SpaceTimeField(field.grid, density))
    else:
        total = quadrature(SpectralField(field.grid, density))
    return float(np.sqrt(max(total.real, 0.0)))
