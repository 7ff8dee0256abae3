"""
Boussinesq Lab - Command-Line Front End
Runs the solver, the bilinear and ill-posedness sweeps and the property suites
for u_tt = u_xx + beta u_xxxx + u_xxxxxx + (u^2)_xx, and writes their reports
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.models.norms import hs_norm_torus
from src.probes.bilinear import bilinear_ratio_sweep
from src.probes.illposed import illposed_sweep
from src.probes.suites import CHECK_COLUMNS, CheckResult, run_all_checks
from src.solvers.picard import integral_equation_residual, period_doubling_discrepancy, picard_solve
from src.solvers.step_oracle import step_oracle_solve
from src.solvers.torus import TorusGrid, Trajectory, bump_spectrum
from src.utils.config import RunConfig, flag_overrides, load_config, log_level
from src.utils.errors import (
    ConfigError,
    InvalidArgumentError,
    NoContractionError,
    StepInstabilityError,
)
from src.utils.reports import ExperimentReport, write_csv, write_json, write_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_NO_CONTRACTION = 2
EXIT_CONFIG = 3

TRAJECTORY_COLUMNS = ("time", "hs_norm", "oracle_discrepancy")
SOLVE_SUMMARY_COLUMNS = (
    "summary",
    "T",
    "iterations",
    "last_residual",
    "integral_residual",
    "max_discrepancy",
    "period_doubling",
)


class BoussinesqLab:
    """Runs one subcommand against a resolved RunConfig"""

    def __init__(self, config: RunConfig):
        self.config = config
        os.makedirs(config.output_dir, exist_ok=True)

    def _path(self, name: str) -> str:
        return os.path.join(self.config.output_dir, f"{name}.{self.config.format}")

    def solve(self) -> int:
        """Picard solve with optional T-halving, cross-checked against the step oracle"""
        config = self.config
        print("🌊 Solving the Cauchy problem...")
        try:
            grid = TorusGrid(config.get("SOLVE_PERIOD"), config.get("SOLVE_MODES"))
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc
        params = config.dispersion("SOLVE")
        amplitude = config.get("SOLVE_AMPLITUDE")
        if amplitude > 0:
            phi_spectrum = bump_spectrum(grid, config.get("SOLVE_WIDTH"), config.get("SOLVE_CUTOFF"), amplitude)
        else:
            phi_spectrum = np.zeros_like
        psi_spectrum = np.zeros_like
        phi = grid.sample_spectrum(phi_spectrum)
        psi = grid.sample_spectrum(psi_spectrum)

        T = config.get("SOLVE_T")
        halvings = config.get("SOLVE_MAX_HALVINGS")
        while True:
            solver_config = config.solver_config(T)
            try:
                trajectory = picard_solve(phi, psi, grid, params, solver_config)
                break
            except NoContractionError as exc:
                if halvings <= 0:
                    print(f"❌ {exc}")
                    print(f"💡 Try a shorter horizon, e.g. --T {T / 2:g}")
                    return EXIT_NO_CONTRACTION
                halvings -= 1
                T /= 2.0
                print(f"⚠️  No contraction; retrying with T = {T:g}")

        try:
            oracle = step_oracle_solve(phi, psi, grid, params, solver_config)
        except StepInstabilityError as exc:
            print(f"❌ {exc}")
            return EXIT_NO_CONTRACTION
        s = solver_config.sobolev_s
        discrepancy = np.atleast_1d(hs_norm_torus(trajectory.u_hat - oracle.u_hat, grid, s))
        integral_residual = integral_equation_residual(trajectory, phi, psi, params, solver_config)

        try:
            doubling, _ = period_doubling_discrepancy(phi_spectrum, psi_spectrum, grid, params, solver_config)
        except NoContractionError as exc:
            print(f"❌ Period-doubling run failed: {exc}")
            return EXIT_NO_CONTRACTION
        tolerance = config.get("SOLVE_DOUBLING_TOL")
        if not doubling < tolerance:
            print(f"❌ Period P and 2P solutions differ by {doubling:.3e} (tolerance {tolerance:g})")
            print(f"💡 Try a longer period, e.g. --period {2.0 * grid.period:g}")
            return EXIT_FAILED
        path = self._write_trajectory(trajectory, discrepancy, integral_residual, doubling, T)

        print(f"✅ Converged in {trajectory.iterations} iteration(s) on [0, {T:g}]")
        print(f"   oracle discrepancy {float(np.max(discrepancy)):.3e}, integral residual {integral_residual:.3e}")
        print(f"   period P vs 2P discrepancy {doubling:.3e}")
        print(f"📄 Trajectory written to {path}")
        return EXIT_PASS

    def _write_trajectory(
        self,
        trajectory: Trajectory,
        discrepancy,
        integral_residual: float,
        doubling: float,
        T: float,
    ) -> str:
        norms = trajectory.hs_norms(self.config.solver_config(T).sobolev_s)
        rows = [[float(t), float(n), float(d)] for t, n, d in zip(trajectory.times, norms, discrepancy)]
        last = trajectory.residuals[-1] if trajectory.residuals else 0.0
        summary = {
            "T": float(T),
            "iterations": int(trajectory.iterations),
            "last_residual": float(last),
            "integral_residual": float(integral_residual),
            "max_discrepancy": float(np.max(discrepancy)),
            "period_doubling": float(doubling),
        }
        provenance = self.config.provenance()
        path = self._path("solve_trajectory")
        if self.config.format == "json":
            payload = {
                "trajectory": [dict(zip(TRAJECTORY_COLUMNS, row)) for row in rows],
                "residuals": [float(r) for r in trajectory.residuals],
                **summary,
            }
            return write_json(path, payload, provenance)
        rows.append(list(SOLVE_SUMMARY_COLUMNS))
        rows.append(["summary"] + [summary[key] for key in SOLVE_SUMMARY_COLUMNS[1:]])
        return write_csv(path, [TRAJECTORY_COLUMNS], rows, provenance)

    def _finish_sweep(self, report: ExperimentReport) -> int:
        path = write_report(report, self.config.output_dir, self.config.format, self.config.provenance())
        for n, value in report.points:
            print(f"   N={n:>8g}  value={value:.6e}")
        tag = " (informational)" if report.informational else ""
        print(f"📈 slope {report.fitted_slope:.4f}, predicted {report.predicted_exponent:.4f}{tag}")
        if not report.reliable:
            print(f"⚠️  fit residual {report.fit_residual:.3f} marks the fit unreliable")
        print(f"{'✅' if report.passed else '❌'} pass={str(report.passed).lower()}")
        print(f"📄 Report written to {path}")
        return EXIT_PASS if report.passed else EXIT_FAILED

    def bilinear_sweep(self) -> int:
        template = self.config.bilinear_template()
        N_list = self.config.get("BILINEAR_N_LIST")
        print(f"🔬 Bilinear sweep over N = {', '.join(f'{n:g}' for n in N_list)}")
        report = bilinear_ratio_sweep(template, N_list, self.config.workers)
        return self._finish_sweep(report)

    def illposed_sweep(self) -> int:
        template = self.config.illposed_template()
        N_list = self.config.get("ILLPOSED_N_LIST")
        print(f"🔬 Ill-posedness sweep over N = {', '.join(f'{n:g}' for n in N_list)}")
        report = illposed_sweep(template, N_list, self.config.workers)
        return self._finish_sweep(report)

    def checks(self) -> int:
        print("🧪 Running property suites...")
        results = run_all_checks(self.config.check_settings())
        self._print_table(results)
        path = self._write_checks(results)
        passed = all(r.passed for r in results)
        print(f"{'✅ All checks passed' if passed else '❌ Some checks failed'}")
        print(f"📄 Checks written to {path}")
        return EXIT_PASS if passed else EXIT_FAILED

    @staticmethod
    def _print_table(results: List[CheckResult]) -> None:
        print("\n" + "=" * 78)
        for r in results:
            mark = "✓" if r.passed else "✗"
            print(f"{mark} {r.suite:<12} {r.name:<48} {r.measured:.3e}")
        print("=" * 78 + "\n")

    def _write_checks(self, results: List[CheckResult]) -> str:
        provenance = self.config.provenance()
        path = self._path("checks")
        if self.config.format == "json":
            payload = {
                "checks": [dict(zip(CHECK_COLUMNS, r.to_row())) for r in results],
                "pass": all(r.passed for r in results),
            }
            return write_json(path, payload, provenance)
        return write_csv(path, [CHECK_COLUMNS], [r.to_row() for r in results], provenance)

    def run(self, command: str) -> int:
        handlers = {
            "solve": self.solve,
            "bilinear-sweep": self.bilinear_sweep,
            "illposed-sweep": self.illposed_sweep,
            "checks": self.checks,
        }
        return handlers[command]()


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 3), not argparse's exit 2"""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="KEY=value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", help="csv or json")
    common.add_argument("--seed", help="seed for randomized suites")
    common.add_argument("--workers", help="parallel sweep workers")
    common.add_argument("--N-list", dest="N_list", help="comma-separated N values")
    common.add_argument("--s", help="Sobolev index")
    common.add_argument("--a", help="output modulation index")
    common.add_argument("--b", help="input modulation index")
    common.add_argument("--alpha", help="rectangle width exponent")
    common.add_argument("--epsilon", help="witness-time exponent offset")
    common.add_argument("--T", dest="T", help="time horizon")
    common.add_argument("--modes", help="torus mode count")
    common.add_argument("--period", help="torus period")
    common.add_argument("--verbose", action="store_true", help="log at INFO level")

    parser = _ArgumentParser(description="Spectral lab for the sixth-order Boussinesq equation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    sub.add_parser("solve", parents=[common], help="Picard solve with oracle cross-check")
    sub.add_parser("bilinear-sweep", parents=[common], help="bilinear-estimate counterexample sweep")
    sub.add_parser("illposed-sweep", parents=[common], help="ill-posedness growth sweep")
    sub.add_parser("checks", parents=[common], help="property suites")
    return parser


FLAG_NAMES = ("out", "format", "seed", "workers", "N_list", "s", "a", "b", "alpha", "epsilon", "T", "modes", "period")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit status"""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=log_level(args.verbose), format="%(levelname)s %(name)s: %(message)s")
        flags: Dict[str, Optional[str]] = {name: getattr(args, name) for name in FLAG_NAMES}
        config = load_config(args.config, flag_overrides(args.command, flags))
        return BoussinesqLab(config).run(args.command)
    except (ConfigError, InvalidArgumentError, OSError) as exc:
        print(f"❌ Error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
