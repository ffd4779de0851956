"""Checks of the global hypoellipticity / solvability classification and its Diophantine oracle."""
import math
from typing import List, Optional, Tuple

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import CheckerType, ExperimentConfig, Verdict
from src.tools.diophantine import brute_force_exponents, liouville_constant, liouville_evidence, min_scaled_distance
from src.tools.hypoellipticity_diagnostics import DiagnosisOptions, classify_constant_P

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
E = math.e

# (label, c, h, expected (GH, GS), exact value of c, qmax)
CLASSIFICATION_TABLE: List[Tuple[str, complex, Tuple[float, float], Tuple[Verdict, Verdict], Optional[object], int]] = [
    ("c=i torus", 1j, (1.0, 1.0), (Verdict.YES, Verdict.YES), None, 10_000),
    ("c=1/2 torus", 0.5, (1.0, 1.0), (Verdict.NO, Verdict.YES), None, 10_000),
    ("c=golden torus", GOLDEN, (1.0, 1.0), (Verdict.YES, Verdict.YES), None, 10_000),
    ("c=Liouville torus", float(liouville_constant()), (1.0, 1.0), (Verdict.NO, Verdict.NO),
     liouville_constant(), 1_000_000),
    ("c=2 h=(2,1)", 2.0, (2.0, 1.0), (Verdict.YES, Verdict.YES), None, 10_000),
    ("c=-1 h=(e,e)", -1.0, (E, E), (Verdict.NO, Verdict.YES), None, 10_000),
]

HURWITZ_FLOOR = 0.40
ORACLE_Q = 10_000
RECORD_Q = 2_000


def _classification_case(label, c, h, expected, exact, qmax):
    def check(config: ExperimentConfig) -> Measurement:
        opts = DiagnosisOptions(qmax=qmax, threshold=config.liouville_threshold, exact_real=exact,
                                radii=tuple(r for r in config.radii if r <= 1000) or (10,))
        report = classify_constant_P(c, h, opts)
        got = (report.gh_verdict, report.gs_verdict)
        return Measurement(passed=got == expected,
                           detail=f"{label}: got ({got[0].value},{got[1].value}), "
                                  f"expected ({expected[0].value},{expected[1].value}); {report.deciding_branch}")
    return check


def _continued_fraction_oracle(config: ExperimentConfig) -> Measurement:
    q_brute, v_brute = min_scaled_distance(GOLDEN, ORACLE_Q, method="brute")
    q_cf, v_cf = min_scaled_distance(GOLDEN, ORACLE_Q, method="convergents")
    agree = q_brute == q_cf and v_brute == v_cf
    return Measurement(v_brute, None, passed=agree and v_brute >= HURWITZ_FLOOR,
                       detail=f"min q·dist(qφ,ℤ) over 2 ≤ q ≤ {ORACLE_Q}: brute q={q_brute}, convergents q={q_cf}")


def _record_exponent_oracle(config: ExperimentConfig) -> Measurement:
    _, mus = brute_force_exponents(GOLDEN, RECORD_Q)
    report = liouville_evidence(GOLDEN, RECORD_Q, config.liouville_threshold)
    gap = abs(float(mus.max()) - report.max_exponent)
    return Measurement(gap, 1e-12, detail=f"max μ(q) over q ≤ {RECORD_Q}: brute {float(mus.max()):.6g}, "
                                          f"convergents {report.max_exponent:.6g}")


class DiagnosticsChecker(BaseChecker):
    """Verdicts on the reference table and the convergent-based record search."""

    checker_type = CheckerType.DIAGNOSTICS

    def checks(self) -> List[Tuple[str, CheckFn]]:
        cases = [(f"classify[{row[0]}]", _classification_case(*row)) for row in CLASSIFICATION_TABLE]
        return cases + [("continued_fraction_oracle", _continued_fraction_oracle),
                         ("record_exponent_oracle", _record_exponent_oracle)]
