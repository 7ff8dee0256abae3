"""
Run Configuration
Flat KEY=value files read with python-dotenv, sectioned by key prefix
(RUN_, SOLVE_, BILINEAR_, ILLPOSED_, CHECKS_). Built-in defaults are
overridden by the file, which is overridden by command-line flags.
"""

import logging
import math
import os
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

from dotenv import dotenv_values, load_dotenv

from src.models.dispersion import DispersionParams
from src.probes.bilinear import BilinearSpec, alpha_for
from src.probes.illposed import IllposedSpec
from src.probes.suites import CheckSettings
from src.solvers.torus import SolverConfig
from src.utils.errors import ConfigError, InvalidArgumentError

logger = logging.getLogger(__name__)

LOG_LEVEL_VARIABLE = "BOUSSINESQ_LOG_LEVEL"

FORMATS = ("csv", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


def _int(text: str) -> int:
    return int(text)


def _float_list(text: str) -> Tuple[float, ...]:
    items = tuple(_float(item) for item in text.split(",") if item.strip())
    if not items:
        raise ValueError("empty list")
    return items


def _optional_float(text: str) -> Optional[float]:
    return None if text.strip() == "" else _float(text)


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return parse


# key -> (default, parser)
SCHEMA: Dict[str, Tuple[str, Callable]] = {
    "RUN_OUTPUT_DIR": ("results", str),
    "RUN_FORMAT": ("csv", _choice(*FORMATS)),
    "RUN_SEED": ("0", _int),
    "RUN_WORKERS": ("1", _int),

    "SOLVE_T": ("0.5", _float),
    "SOLVE_MODES": ("256", _int),
    "SOLVE_PERIOD": (repr(2.0 * math.pi * 8.0), _float),
    "SOLVE_BETA": ("1", _int),
    "SOLVE_TIME_NODES": ("101", _int),
    "SOLVE_PICARD_TOL": ("1e-12", _float),
    "SOLVE_MAX_ITERS": ("50", _int),
    "SOLVE_DEALIAS": (repr(2.0 / 3.0), _float),
    "SOLVE_SOBOLEV_S": ("0", _float),
    "SOLVE_AMPLITUDE": ("0.01", _float),
    "SOLVE_WIDTH": ("0.3", _float),
    "SOLVE_CUTOFF": ("2", _float),
    "SOLVE_ORACLE_SUBSTEPS": ("4", _int),
    "SOLVE_MAX_HALVINGS": ("0", _int),
    "SOLVE_DOUBLING_TOL": ("1e-8", _float),

    "BILINEAR_N_LIST": ("16,32,64,128,256", _float_list),
    "BILINEAR_S": ("-0.8", _float),
    "BILINEAR_A": ("0.4", _float),
    "BILINEAR_B": ("0.55", _float),
    "BILINEAR_ALPHA": ("", _optional_float),
    "BILINEAR_BETA": ("1", _int),
    "BILINEAR_TAU_RESOLUTION": ("0.015625", _float),
    "BILINEAR_XI_CELLS": ("256", _int),
    "BILINEAR_WEIGHT": ("bracket", _choice("bracket", "homogeneous")),

    "ILLPOSED_N_LIST": ("16,32,64,128", _float_list),
    "ILLPOSED_S": ("-3.5", _float),
    "ILLPOSED_EPSILON": ("0.1", _float),
    "ILLPOSED_BETA": ("1", _int),
    "ILLPOSED_XI_RESOLUTION": ("0.002", _float),
    "ILLPOSED_T_NODES": ("33", _int),
    "ILLPOSED_KERNEL": ("closed", _choice("closed", "simpson")),
    "ILLPOSED_TIME_FACTORS": ("1", _float_list),

    "CHECKS_MULTIPLIER_SAMPLES": ("1000000", _int),
    "CHECKS_MULTIPLIER_TOL": ("1e-12", _float),
    "CHECKS_EQUIVALENCE_GRID": ("1000", _int),
    "CHECKS_EQUIVALENCE_TOL": ("1e-9", _float),
    "CHECKS_ENERGY_MODES": ("256", _int),
    "CHECKS_ENERGY_TOL": ("1e-10", _float),
    "CHECKS_KERNEL_SAMPLES": ("1000", _int),
    "CHECKS_KERNEL_TOL": ("1e-10", _float),
    "CHECKS_LEMMA_BOUND": ("10", _float),
    "CHECKS_CUBIC_SAMPLES": ("20", _int),
}

# Command-line flag -> config key, per subcommand
FLAG_KEYS: Dict[str, Dict[str, str]] = {
    "solve": {"s": "SOLVE_SOBOLEV_S", "T": "SOLVE_T", "modes": "SOLVE_MODES", "period": "SOLVE_PERIOD"},
    "bilinear-sweep": {"N_list": "BILINEAR_N_LIST", "s": "BILINEAR_S", "a": "BILINEAR_A", "b": "BILINEAR_B", "alpha": "BILINEAR_ALPHA"},
    "illposed-sweep": {"N_list": "ILLPOSED_N_LIST", "s": "ILLPOSED_S", "epsilon": "ILLPOSED_EPSILON"},
    "checks": {},
}
COMMON_FLAGS = {"out": "RUN_OUTPUT_DIR", "format": "RUN_FORMAT", "seed": "RUN_SEED", "workers": "RUN_WORKERS"}


def read_config_file(path: str) -> Dict[str, str]:
    """Raw KEY=value pairs of a config file"""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path)
    missing = sorted(key for key, value in values.items() if value is None)
    if missing:
        raise ConfigError(f"{path}: keys without a value: {', '.join(missing)}")
    return dict(values)


def flag_overrides(command: str, flags: Mapping[str, Optional[str]]) -> Dict[str, str]:
    """Translate the flags that were given into config keys"""
    if command not in FLAG_KEYS:
        raise ConfigError(f"unknown command {command!r}")
    mapping = {**COMMON_FLAGS, **FLAG_KEYS[command]}
    overrides = {}
    for flag, value in flags.items():
        if value is None:
            continue
        if flag not in mapping:
            raise ConfigError(f"--{flag.replace('_', '-')} does not apply to {command}")
        overrides[mapping[flag]] = str(value)
    return overrides


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration: every key of SCHEMA as text, plus parsed values"""

    raw: Mapping[str, str]

    def __post_init__(self):
        unknown = sorted(set(self.raw) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        parsed = {}
        for key, (_, parser) in SCHEMA.items():
            try:
                parsed[key] = parser(self.raw[key])
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"{key}={self.raw.get(key)!r}: {exc}") from exc
        object.__setattr__(self, "_parsed", parsed)
        if self.get("RUN_WORKERS") < 1:
            raise ConfigError("RUN_WORKERS must be >= 1")

    def get(self, key: str):
        return self._parsed[key]

    def provenance(self) -> Dict[str, str]:
        """The resolved text of every key, sorted"""
        return {key: self.raw[key] for key in sorted(self.raw)}

    @property
    def output_dir(self) -> str:
        return self.get("RUN_OUTPUT_DIR")

    @property
    def format(self) -> str:
        return self.get("RUN_FORMAT")

    @property
    def seed(self) -> int:
        return self.get("RUN_SEED")

    @property
    def workers(self) -> int:
        return self.get("RUN_WORKERS")

    def _build(self, factory, *args, **kwargs):
        try:
            return factory(*args, **kwargs)
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc

    def dispersion(self, prefix: str) -> DispersionParams:
        return self._build(DispersionParams, self.get(f"{prefix}_BETA"))

    def solver_config(self, T: Optional[float] = None) -> SolverConfig:
        return self._build(
            SolverConfig,
            T=self.get("SOLVE_T") if T is None else T,
            n_time_nodes=self.get("SOLVE_TIME_NODES"),
            picard_tol=self.get("SOLVE_PICARD_TOL"),
            max_picard_iters=self.get("SOLVE_MAX_ITERS"),
            dealias_fraction=self.get("SOLVE_DEALIAS"),
            sobolev_s=self.get("SOLVE_SOBOLEV_S"),
            oracle_substeps=self.get("SOLVE_ORACLE_SUBSTEPS"),
        )

    def bilinear_template(self) -> BilinearSpec:
        N_list = self.get("BILINEAR_N_LIST")
        a = self.get("BILINEAR_A")
        alpha = self.get("BILINEAR_ALPHA")
        if alpha is None:
            alpha = self._build(alpha_for, a)
        cells = self.get("BILINEAR_XI_CELLS")
        if cells < 8:
            raise ConfigError("BILINEAR_XI_CELLS must be >= 8")
        N = min(N_list)
        return self._build(
            BilinearSpec,
            N=N,
            alpha=alpha,
            s=self.get("BILINEAR_S"),
            b=self.get("BILINEAR_B"),
            a=a,
            params=self.dispersion("BILINEAR"),
            tau_resolution=self.get("BILINEAR_TAU_RESOLUTION"),
            xi_resolution=float(N) ** (-alpha) / cells,
            frequency_weight=self.get("BILINEAR_WEIGHT"),
        )

    def illposed_template(self) -> IllposedSpec:
        return self._build(
            IllposedSpec,
            N=min(self.get("ILLPOSED_N_LIST")),
            s=self.get("ILLPOSED_S"),
            epsilon=self.get("ILLPOSED_EPSILON"),
            params=self.dispersion("ILLPOSED"),
            xi_resolution=self.get("ILLPOSED_XI_RESOLUTION"),
            t_quadrature_nodes=self.get("ILLPOSED_T_NODES"),
            kernel_method=self.get("ILLPOSED_KERNEL"),
            time_factors=self.get("ILLPOSED_TIME_FACTORS"),
        )

    def check_settings(self) -> CheckSettings:
        return self._build(
            CheckSettings,
            seed=self.seed,
            multiplier_samples=self.get("CHECKS_MULTIPLIER_SAMPLES"),
            multiplier_tol=self.get("CHECKS_MULTIPLIER_TOL"),
            equivalence_grid=self.get("CHECKS_EQUIVALENCE_GRID"),
            equivalence_tol=self.get("CHECKS_EQUIVALENCE_TOL"),
            energy_modes=self.get("CHECKS_ENERGY_MODES"),
            energy_tol=self.get("CHECKS_ENERGY_TOL"),
            kernel_samples=self.get("CHECKS_KERNEL_SAMPLES"),
            kernel_tol=self.get("CHECKS_KERNEL_TOL"),
            lemma_bound=self.get("CHECKS_LEMMA_BOUND"),
            cubic_samples=self.get("CHECKS_CUBIC_SAMPLES"),
        )


def default_values() -> Dict[str, str]:
    return {key: default for key, (default, _) in SCHEMA.items()}


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Resolve defaults < file < overrides into a RunConfig

    Raises:
        ConfigError: missing file, unknown key or malformed value
    """
    values = default_values()
    if path:
        from_file = read_config_file(path)
        unknown = sorted(set(from_file) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"{path}: unknown key(s): {', '.join(unknown)}")
        values.update(from_file)
        logger.debug("loaded %d key(s) from %s", len(from_file), path)
    values.update(overrides or {})
    return RunConfig(values)


def log_level(verbose: bool = False) -> str:
    """Level name from BOUSSINESQ_LOG_LEVEL (a local .env is honoured), INFO when verbose"""
    load_dotenv()
    if verbose:
        return "INFO"
    level = os.getenv(LOG_LEVEL_VARIABLE, "WARNING").upper()
    if level not in LOG_LEVELS:
        raise ConfigError(f"{LOG_LEVEL_VARIABLE}={level!r} is not one of {', '.join(LOG_LEVELS)}")
    return level
