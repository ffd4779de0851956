"""Fourier division Pw = f for multipliers, with admissibility against the zero set."""
import logging
from typing import Optional, Tuple

import numpy as np

from src.errors import GrowthGuardError, InadmissibleDatumError
from src.models import (
    AdmissibilityReport,
    AdmissibilityViolation,
    Basis,
    FreqIndex,
    SolveOptions,
    SolveReport,
)
from src.tools.eigenbasis import BoundaryLike, as_boundary, weights_2d
from src.tools.multiplier_calculus import Symbol
from src.tools.spectral_transforms import SpectralField, decay_classify

logger = logging.getLogger(__name__)

# zero_tol default, relative to max |σ| over the truncation
RELATIVE_ZERO_TOL = 1e-12


def _symbol_values(s: Symbol, fhat: SpectralField) -> np.ndarray:
    if Basis(s.basis) != fhat.basis:
        raise ValueError(f"symbol acts on the {s.basis.value} system, datum is tagged {fhat.basis.value}")
    return s.on_lattice(fhat.trunc)


def default_zero_tol(sigma: np.ndarray) -> float:
    return RELATIVE_ZERO_TOL * float(np.max(np.abs(sigma))) if sigma.size else 0.0


def _tolerances(sigma: np.ndarray, opts: SolveOptions) -> Tuple[float, float]:
    zero_tol = default_zero_tol(sigma) if opts.zero_tol is None else opts.zero_tol
    data_tol = zero_tol if opts.data_tol is None else opts.data_tol
    return zero_tol, data_tol


def admissibility(fhat: SpectralField, s: Symbol, opts: Optional[SolveOptions] = None) -> AdmissibilityReport:
    """f̂ must vanish wherever σ does: violations are |σ| ≤ zero_tol with |f̂| > data_tol."""
    opts = opts or SolveOptions()
    sigma = _symbol_values(s, fhat)
    zero_tol, data_tol = _tolerances(sigma, opts)
    abs_sigma = np.abs(sigma)
    abs_f = np.abs(fhat.coeffs)
    bad = (abs_sigma <= zero_tol) & (abs_f > data_tol)
    K = fhat.trunc
    violations = [
        AdmissibilityViolation(xi=FreqIndex(int(i) - K, int(j) - K), abs_sigma=float(abs_sigma[i, j]),
                               abs_f=float(abs_f[i, j]))
        for i, j in np.argwhere(bad)
    ]
    return AdmissibilityReport(admissible=not violations, violations=violations, zero_tol=zero_tol)


def _check_growth(what: SpectralField, h: BoundaryLike, guard: float):
    xi1, xi2 = what.lattice()
    weight = weights_2d(h, xi1, xi2)
    over = np.abs(what.coeffs) > weight ** guard
    if not over.any():
        return
    idx = np.argwhere(over)
    i, j = min(idx, key=lambda p: (weight[p[0], p[1]], p[0], p[1]))
    witness = FreqIndex(int(i) - what.trunc, int(j) - what.trunc)
    raise GrowthGuardError(
        f"|ŵ{tuple(witness)}| = {abs(what.coeffs[i, j]):.3g} exceeds ⟨ξ⟩^{guard:g} = {weight[i, j] ** guard:.3g}",
        witness=witness,
    )


def solve(s: Symbol, fhat: SpectralField, opts: Optional[SolveOptions] = None,
          h: Optional[BoundaryLike] = None) -> SpectralField:
    """ŵ(ξ) = f̂(ξ)/σ(ξ) off the zero set, 0 on it."""
    opts = opts or SolveOptions()
    report = admissibility(fhat, s, opts)
    if not report.admissible:
        first = report.violations[0].xi
        raise InadmissibleDatumError(
            f"datum is not admissible: {len(report.violations)} violation(s), first at {tuple(first)}",
            report=report,
        )
    sigma = _symbol_values(s, fhat)
    zero = np.abs(sigma) <= report.zero_tol
    safe = np.where(zero, 1.0, sigma)
    what = fhat.with_coeffs(np.where(zero, 0.0, fhat.coeffs / safe))
    if opts.growth_guard is not None:
        boundary = h if h is not None else s.boundary
        if boundary is None:
            raise ValueError("growth_guard needs boundary parameters to weight the solution")
        _check_growth(what, as_boundary(boundary), opts.growth_guard)
    logger.debug(f"➗ solved on {what.coeffs.size} modes, {int(zero.sum())} on the zero set")
    return what


def residual(s: Symbol, what: SpectralField, fhat: SpectralField) -> float:
    """max_ξ |σ(ξ)ŵ(ξ) − f̂(ξ)|."""
    if what.trunc != fhat.trunc:
        raise ValueError("truncations differ")
    sigma = _symbol_values(s, fhat)
    return float(np.max(np.abs(sigma * what.coeffs - fhat.coeffs)))


def solve_with_report(s: Symbol, fhat: SpectralField, opts: Optional[SolveOptions] = None,
                      h: Optional[BoundaryLike] = None) -> Tuple[SpectralField, SolveReport]:
    """solve plus the admissibility, residual and decay class of the result."""
    opts = opts or SolveOptions()
    what = solve(s, fhat, opts, h)
    boundary = h if h is not None else s.boundary
    decay = decay_classify(what, boundary) if boundary is not None else None
    report = SolveReport(
        admissibility=admissibility(fhat, s, opts),
        residual=residual(s, what, fhat),
        decay=decay,
    )
    return what, report
