"""Command-line interface: validate | diagnose | solve | normalform | transform."""
import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from src.config import config
from src.errors import (
    ConfigError,
    InadmissibleDatumError,
    InvariantFailure,
    NonharmonicError,
    ParseError,
    ResolutionError,
)
from src.models import (
    Basis,
    ExperimentConfig,
    NormalFormReport,
    OperatorSpec,
    SolveOptions,
    SolveReport,
    ValidationReport,
)
from src.reporting import summarize_checks, to_json, write_curve_csv, write_json
from src.tools import field_io
from src.tools.division_solver import admissibility, residual, solve
from src.tools.hypoellipticity_diagnostics import DiagnosisOptions, diagnose_operator, exact_real_from_text
from src.tools.multiplier_calculus import apply_operator, diff_symbol, lstar_symbol, operator_label, parse_operator
from src.tools.normal_form import (
    CoefficientFunction,
    OVERSAMPLING,
    reduce,
    resolution_check,
    solve_variable,
    variable_residual,
)
from src.tools.spectral_transforms import (
    GridSpec,
    SpectralField,
    analyze_basis,
    decay_classify,
    synthesize,
)
from src.workflow import ValidationWorkflow

logger = logging.getLogger(__name__)

# flag dest -> ExperimentConfig field
FLAG_FIELDS = {
    "h1": "h1", "h2": "h2", "c_re": "c_re", "c_im": "c_im", "K": "K", "n": "n", "radii": "radii",
    "qmax": "qmax", "tol": "tol", "seed": "seed", "out": "out", "input": "input", "basis": "basis",
    "operator": "operator", "exact_c": "exact_c", "threshold": "liouville_threshold", "trials": "trials",
}


def _radii(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"radii must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file mirroring ExperimentConfig")
    common.add_argument("--h1", type=float)
    common.add_argument("--h2", type=float)
    common.add_argument("--c-re", dest="c_re", type=float)
    common.add_argument("--c-im", dest="c_im", type=float)
    common.add_argument("--exact-c", dest="exact_c", help='exact real c: "p/q", a decimal, or "liouville[:N]"')
    common.add_argument("--operator", help='shorthand such as "d1 + (0.5+1i) d2" or a JSON term list')
    common.add_argument("--a-file", dest="a_file", help="a(x1) as series JSON or samples CSV")
    common.add_argument("--K", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--radii", type=_radii)
    common.add_argument("--qmax", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--threshold", type=float, help="Liouville evidence threshold")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--basis", choices=[b.value for b in Basis])
    common.add_argument("--input")
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="nonharmonic", description="Nonharmonic spectral toolkit on [0,1]^2")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    sub.add_parser("diagnose", parents=[common], help="classify global hypoellipticity / solvability")
    sub.add_parser("solve", parents=[common], help="solve Pw = f")
    sub.add_parser("normalform", parents=[common], help="reduce ∂1 + a(x1)∂2 to constant coefficients")
    transform = sub.add_parser("transform", parents=[common], help="grid <-> coefficient conversion")
    transform.add_argument("--inverse", action="store_true")
    return parser


def _read_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def _describe_validation(e: ValidationError, source: str) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return f"{source}: " + "; ".join(parts)


def load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    """File fields first, flags override."""
    data: Dict[str, Any] = {
        "seed": config.NHS_SEED,
        "qmax": config.NHS_QMAX,
        "tol": config.NHS_REL_TOL,
        "liouville_threshold": config.NHS_LIOUVILLE_THRESHOLD,
    }
    source = "flags"
    if getattr(args, "config", None):
        data.update(_read_config_file(args.config))
        source = args.config
    for dest, name in FLAG_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[name] = value
    if getattr(args, "a_file", None):
        data["a_series"] = _load_a(args.a_file).to_series().model_dump()
    if data.get("exact_c") and data.get("c_re") is None:
        data["c_re"] = float(exact_real_from_text(str(data["exact_c"])))
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_describe_validation(e, source))


def _load_a(path: str) -> CoefficientFunction:
    try:
        if os.path.splitext(path)[1].lower() == ".csv":
            return CoefficientFunction.from_csv(path)
        return CoefficientFunction.from_json(path)
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(f"{path}: {e}")


class NonharmonicApp:
    """Runs one subcommand against a validated ExperimentConfig."""

    def __init__(self, experiment: ExperimentConfig, stdout=None):
        self.experiment = experiment
        self.stdout = stdout or sys.stdout

    def _emit(self, report: Any, filename: Optional[str] = None):
        self.stdout.write(to_json(report))
        if filename and self.experiment.out:
            path = write_json(report, os.path.join(self.experiment.out, filename))
            logger.info(f"💾 wrote {path}")

    def _out_dir(self) -> str:
        out = self.experiment.out or config.get_output_dir_path()
        os.makedirs(out, exist_ok=True)
        return out

    def _operator(self) -> OperatorSpec:
        exp = self.experiment
        if exp.operator:
            return parse_operator(exp.operator)
        if exp.c is not None:
            return OperatorSpec.first_order(exp.c)
        raise ConfigError("an operator is required: pass --operator or --c-re/--c-im")

    def _diagnosis_options(self) -> DiagnosisOptions:
        exp = self.experiment
        return DiagnosisOptions(
            qmax=exp.qmax,
            threshold=exp.liouville_threshold,
            rel_tol=exp.tol,
            exact_real=exact_real_from_text(exp.exact_c) if exp.exact_c else None,
            radii=tuple(exp.radii),
        )

    def cmd_validate(self) -> int:
        logger.info("🚀 Running validation suite")
        workflow = ValidationWorkflow()
        state = workflow.run(self.experiment)
        summary = summarize_checks(state.checks)
        report = ValidationReport(config=self.experiment, passed=not summary["failed"], total=summary["total"],
                                  failed=summary["failed"], checks=state.checks)
        self._emit(report, "validation.json")
        if summary["failed"]:
            raise InvariantFailure(f"{len(summary['failed'])} check(s) failed: {', '.join(summary['failed'])}")
        logger.info(f"✅ {summary['passed']}/{summary['total']} checks passed")
        return 0

    def cmd_diagnose(self) -> int:
        op = self._operator()
        logger.info(f"🧭 Diagnosing {operator_label(op)} at h={self.experiment.boundary.as_tuple()}")
        report = diagnose_operator(op, self.experiment.boundary, self._diagnosis_options())
        self._emit(report, "diagnosis.json")
        if self.experiment.out and report.exponent_curve is not None:
            path = write_curve_csv(report.exponent_curve, os.path.join(self.experiment.out, "exponent_curve.csv"))
            logger.info(f"💾 wrote {path}")
        return 0

    def _read_datum(self, path: str):
        if os.path.splitext(path)[1].lower() == ".json":
            return field_io.read_spectral_json(path), None
        grid = field_io.read_grid(path)
        return analyze_basis(grid, self.experiment.boundary, self.experiment.K, self.experiment.basis), grid

    def cmd_solve(self) -> int:
        exp = self.experiment
        if not exp.input:
            raise ConfigError("solve needs --input")
        h = exp.boundary
        if exp.a_series is not None:
            return self._solve_variable()
        op = self._operator()
        fhat, grid = self._read_datum(exp.input)
        symbol = diff_symbol(op, h) if fhat.basis == Basis.L else lstar_symbol(op, h)
        sigma = symbol.on_lattice(fhat.trunc)
        opts = SolveOptions(zero_tol=exp.tol * float(np.max(np.abs(sigma))))
        logger.info(f"➗ Solving {operator_label(op)} on K={fhat.trunc} ({fhat.basis.value})")
        what = solve(symbol, fhat, opts, h)

        out = self._out_dir()
        spec = grid.spec if grid is not None else GridSpec.square(exp.grid_n)
        w = synthesize(what, h, spec)
        write_json(field_io.spectral_to_dict(what), os.path.join(out, "solution.json"))
        ext = ".csv" if exp.input.lower().endswith(".csv") else ".bin"
        field_io.write_grid(w, os.path.join(out, "solution" + ext))

        grid_residual = None
        if grid is not None:
            pw = apply_operator(op, h, w, fhat.basis)
            f_band = synthesize(fhat, h, spec)
            grid_residual = float(np.sqrt(np.mean(np.abs(pw.values - f_band.values) ** 2)))
        report = SolveReport(
            admissibility=admissibility(fhat, symbol, opts),
            residual=residual(symbol, what, fhat),
            decay=decay_classify(what, h),
            grid_residual=grid_residual,
        )
        self._emit(report, "solve_report.json")
        return 0

    def _solve_variable(self) -> int:
        exp = self.experiment
        h = exp.boundary
        a = CoefficientFunction.from_series(exp.a_series)
        f = field_io.read_grid(exp.input)
        logger.info(f"➗ Solving ∂1 + a(x1)∂2 with a0={a.mean:.6g} on {f.spec.n1}x{f.spec.n2}")
        w = solve_variable(a, h, f, SolveOptions())
        out = self._out_dir()
        ext = ".csv" if exp.input.lower().endswith(".csv") else ".bin"
        field_io.write_grid(w, os.path.join(out, "solution" + ext))
        self._emit({"a0": a.mean, "grid_residual": variable_residual(a, h, w, f)}, "solve_report.json")
        return 0

    def cmd_normalform(self) -> int:
        exp = self.experiment
        if exp.a_series is None:
            raise ConfigError("normalform needs an a-series (--a-file or a_series in the config file)")
        h = exp.boundary
        a = CoefficientFunction.from_series(exp.a_series)
        a0, p0 = reduce(a)
        K = exp.K
        n = max(exp.grid_n, OVERSAMPLING * K)
        rng = np.random.default_rng(exp.seed)
        side = 2 * K + 1
        coeffs = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
        w_hat = SpectralField(K, coeffs / np.linalg.norm(coeffs))
        logger.info(f"🔁 Normal form: a0={a0:.17g}, band={a.effective_band}, test grid n={n}")
        resolution = resolution_check(a, h, w_hat, n, n)
        diagnosis = diagnose_operator(p0, h, self._diagnosis_options())
        report = NormalFormReport(a0=a0, band=a.effective_band, h1=h.h1, h2=h.h2,
                                  reduced_operator=operator_label(p0), resolution=resolution, diagnosis=diagnosis)
        self._emit(report, "normalform.json")
        if not resolution.converged:
            raise ResolutionError(f"intertwining residual did not converge: {resolution.coarse:.3g} -> {resolution.fine:.3g}")
        return 0

    def cmd_transform(self, inverse: bool = False) -> int:
        exp = self.experiment
        if not exp.input:
            raise ConfigError("transform needs --input")
        h = exp.boundary
        if inverse:
            c = field_io.read_spectral_json(exp.input)
            spec = GridSpec.square(exp.n if exp.n is not None else 4 * c.trunc + 4)
            grid = synthesize(c, h, spec)
            path = field_io.write_grid(grid, os.path.join(self._out_dir(), "grid.csv"))
            logger.info(f"💾 wrote {path}")
            return 0
        grid = field_io.read_grid(exp.input)
        c = analyze_basis(grid, h, exp.K, exp.basis)
        self._emit(field_io.spectral_to_dict(c), "spectral.json")
        return 0

    def run(self, command: str, inverse: bool = False) -> int:
        if command == "validate":
            return self.cmd_validate()
        if command == "diagnose":
            return self.cmd_diagnose()
        if command == "solve":
            return self.cmd_solve()
        if command == "normalform":
            return self.cmd_normalform()
        if command == "transform":
            return self.cmd_transform(inverse)
        raise ConfigError(f"unknown command {command!r}")


def setup_logging(level: Optional[str] = None):
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, (level or config.LOG_LEVEL).upper(), logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """Parse, dispatch and map failures onto the exit-code contract."""
    args = build_parser().parse_args(argv)
    setup_logging()
    if not config.validate():
        return ConfigError.exit_code
    try:
        experiment = load_experiment(args)
        return NonharmonicApp(experiment, stdout).run(args.command, getattr(args, "inverse", False))
    except InadmissibleDatumError as e:
        if e.report is not None:
            (stdout or sys.stdout).write(to_json(e.report))
        logger.error(f"❌ {e}")
        return e.exit_code
    except NonharmonicError as e:
        logger.error(f"❌ {e}")
        return e.exit_code
    except (ValidationError, ValueError) as e:
        logger.error(f"❌ invalid input: {e}")
        return ConfigError.exit_code


def main_sync():
    """Synchronous entry point."""
    sys.exit(main())


if __name__ == "__main__":
    main_sync()
