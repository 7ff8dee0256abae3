"""
Experiment Reports
Log-log slope fits over sweep points and deterministic CSV / JSON writers
"""

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Fits with a larger RMS log residual are flagged unreliable
UNRELIABLE_RESIDUAL = 0.2

CSV_COLUMNS = ("N", "value", "log_N", "log_value")
FIT_COLUMNS = ("fit", "fitted_slope", "fit_residual", "predicted_exponent", "pass", "informational", "reliable")


def fit_log_slope(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """
    Least-squares line through (log N, log value)

    Returns:
        (slope, intercept, RMS residual of the log values)
    """
    if len(points) < 3:
        raise InvalidArgumentError(f"a slope fit needs at least 3 points, got {len(points)}")
    n_values = np.array([p[0] for p in points], dtype=float)
    values = np.array([p[1] for p in points], dtype=float)
    if np.any(n_values <= 0) or np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise InvalidArgumentError("slope fits need positive finite N and values")
    log_n = np.log(n_values)
    log_v = np.log(values)
    fit = stats.linregress(log_n, log_v)
    residual = float(np.sqrt(np.mean((log_v - (fit.intercept + fit.slope * log_n)) ** 2)))
    return float(fit.slope), float(fit.intercept), residual


@dataclass(frozen=True)
class ExperimentReport:
    """Per-N measurements with the fitted growth exponent and its verdict"""

    name: str
    points: Tuple[Tuple[float, float], ...]
    fitted_slope: float
    fit_residual: float
    predicted_exponent: float
    passed: bool
    informational: bool = False
    details: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.points) < 3:
            raise InvalidArgumentError("a report needs at least 3 points")

    @property
    def reliable(self) -> bool:
        return self.fit_residual <= UNRELIABLE_RESIDUAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "points": [
                {"N": n, "value": v, "log_N": float(np.log(n)), "log_value": float(np.log(v))}
                for n, v in self.points
            ],
            "fitted_slope": self.fitted_slope,
            "fit_residual": self.fit_residual,
            "predicted_exponent": self.predicted_exponent,
            "pass": self.passed,
            "informational": self.informational,
            "reliable": self.reliable,
            "details": dict(self.details),
        }


def build_report(
    name: str,
    points: Sequence[Tuple[float, float]],
    predicted_exponent: float,
    verdict,
    informational: bool = False,
    details: Optional[Mapping[str, Any]] = None,
) -> ExperimentReport:
    """Fit the points and apply verdict(slope) -> bool"""
    ordered = tuple(sorted((float(n), float(v)) for n, v in points))
    slope, _, residual = fit_log_slope(ordered)
    report = ExperimentReport(
        name=name,
        points=ordered,
        fitted_slope=slope,
        fit_residual=residual,
        predicted_exponent=float(predicted_exponent),
        passed=bool(verdict(slope)),
        informational=informational,
        details=dict(details or {}),
    )
    if not report.reliable:
        logger.warning("%s: fit residual %.3f marks the report unreliable", name, residual)
    return report


def _provenance_rows(config: Mapping[str, str]):
    return [f"# {key}={config[key]}\n" for key in sorted(config)]


def write_csv(path: str, header_rows: Sequence[Sequence[Any]], rows: Sequence[Sequence[Any]], config: Mapping[str, str]) -> str:
    """CSV with a '# key=value' provenance block, then header and data rows"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.writelines(_provenance_rows(config))
        writer = csv.writer(f, lineterminator="\n")
        for row in header_rows:
            writer.writerow(row)
        for row in rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return path


def write_json(path: str, payload: Mapping[str, Any], config: Mapping[str, str]) -> str:
    document = {"config": dict(sorted(config.items())), **payload}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_report(report: ExperimentReport, out_dir: str, fmt: str, config: Mapping[str, str]) -> str:
    """Write the report as <out_dir>/<name>.<fmt>; returns the path"""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report.name}.{fmt}")
    if fmt == "json":
        return write_json(path, report.to_dict(), config)
    if fmt != "csv":
        raise InvalidArgumentError(f"unknown report format {fmt!r}")
    rows = [[n, v, float(np.log(n)), float(np.log(v))] for n, v in report.points]
    rows.append(FIT_COLUMNS)
    rows.append([
        "fit",
        report.fitted_slope,
        report.fit_residual,
        report.predicted_exponent,
        report.passed,
        report.informational,
        report.reliable,
    ])
    return write_csv(path, [CSV_COLUMNS], rows, config)
