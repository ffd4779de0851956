"""Checks of the Fourier division solver on manufactured data."""
import math
from typing import List, Tuple

import numpy as np

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.errors import InadmissibleDatumError
from src.models import CheckerType, ExperimentConfig
from src.tools.division_solver import residual, solve
from src.tools.multiplier_calculus import apply_multiplier, symbol_constant_P
from src.tools.spectral_transforms import SpectralField

# ∂₁ − ∂₂ on h = (e, e): σ vanishes on the diagonal ξ₁ = ξ₂
REFERENCE_C = -1.0
REFERENCE_H = (math.e, math.e)

SOLUTION_TOL = 1e-8
RESIDUAL_TOL = 1e-10
MANUFACTURED_CASES = 10


def _off_diagonal(rng: np.random.Generator, K: int) -> SpectralField:
    side = 2 * K + 1
    coeffs = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    np.fill_diagonal(coeffs, 0.0)
    return SpectralField(K, coeffs)


def _manufactured(config: ExperimentConfig) -> Measurement:
    s = symbol_constant_P(REFERENCE_C, REFERENCE_H)
    rng = np.random.default_rng(config.seed)
    worst_err, worst_res = 0.0, 0.0
    for _ in range(MANUFACTURED_CASES):
        w = _off_diagonal(rng, config.K)
        f = apply_multiplier(s, w)
        got = solve(s, f)
        worst_err = max(worst_err, float(np.linalg.norm(got.coeffs - w.coeffs) / np.linalg.norm(w.coeffs)))
        worst_res = max(worst_res, residual(s, got, f) / max(1.0, float(np.max(np.abs(f.coeffs)))))
    passed = worst_err < SOLUTION_TOL and worst_res < RESIDUAL_TOL
    return Measurement(worst_err, SOLUTION_TOL, passed=passed,
                       detail=f"{MANUFACTURED_CASES} cases, worst relative residual {worst_res:.3g}")


def _inadmissible_witness(config: ExperimentConfig) -> Measurement:
    s = symbol_constant_P(REFERENCE_C, REFERENCE_H)
    K = max(config.K, 2)
    f = SpectralField.delta(K, (2, 2))
    f.coeffs[K + 1, K - 1] = 1.0
    try:
        solve(s, f)
    except InadmissibleDatumError as e:
        witnesses = [tuple(v.xi) for v in e.report.violations]
        return Measurement(passed=witnesses == [(2, 2)], detail=f"witnesses {witnesses}")
    return Measurement(passed=False, detail="datum on the zero set was accepted")


class SolverChecker(BaseChecker):
    """Recovery of manufactured solutions and rejection of data on the zero set."""

    checker_type = CheckerType.SOLVER

    def checks(self) -> List[Tuple[str, CheckFn]]:
        return [
            ("manufactured_solutions", _manufactured),
            ("inadmissible_witness", _inadmissible_witness),
        ]
