"""Global hypoellipticity / solvability diagnostics for Fourier multipliers.

The global conditions quantify over all of ℤ², so the gates here answer at
a finite truncation and return witnesses. classify_constant_P is the only
entry point that issues unconditional verdicts, and only on branches of
the constant-coefficient classification that decide exactly.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config import config
from src.models import (
    BoundaryParams,
    DiagnosisReport,
    ExponentCurve,
    ExponentShell,
    FreqIndex,
    OperatorSpec,
    Verdict,
)
from src.tools.diophantine import (
    ContinuedFraction,
    RealLike,
    continued_fraction,
    liouville_constant,
    liouville_evidence,
)
from src.tools.eigenbasis import BoundaryLike, as_boundary, weights_2d
from src.tools.multiplier_calculus import (
    AffineForm,
    Symbol,
    diff_symbol,
    first_order_coefficient,
    symbol_constant_P,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ContinuedFraction",
    "DiagnosisOptions",
    "GateResult",
    "classify_constant_P",
    "continued_fraction",
    "diagnose_operator",
    "exponent_curve",
    "ghe_gate",
    "gs_gate",
    "liouville_evidence",
    "scale_adjusted_exponent",
    "zero_set",
]

# lattice points evaluated per block
BLOCK_SIZE = 1 << 20

# relation "fails" only when its residual exceeds tol·scale by this factor
AMBIGUITY_FACTOR = 1e4

BRANCH_RELATION_FAILS_I = "constant-coefficient theorem: c·log h2 ≠ −log h1, case I (h1·h2^a ≠ 1)"
BRANCH_RELATION_FAILS_II = "constant-coefficient theorem: c·log h2 ≠ −log h1, case II (h1·h2^a = 1, b ≠ 0)"
BRANCH_RELATION_AMBIGUOUS = "relation c·log h2 = −log h1 undecided at tolerance"
BRANCH_IMAGINARY = "relation holds: Im c ≠ 0 (torus)"
BRANCH_RATIONAL = "relation holds: c rational"
BRANCH_LIOUVILLE = "relation holds: c irrational with Liouville evidence"
BRANCH_NON_LIOUVILLE = "relation holds: c irrational without Liouville evidence"
BRANCH_PRECISION = "relation holds: c real, precision exhausted before depth"
BRANCH_GATES = "general symbol: truncated gates only"


@dataclass(frozen=True)
class GateResult:
    """Finite-truncation verdict of a lower-bound gate."""
    passed: bool
    witness: Optional[FreqIndex] = None
    abs_sigma: Optional[float] = None
    weight: Optional[float] = None
    bound: Optional[float] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class DiagnosisOptions:
    """Knobs of classify_constant_P; defaults come from Config."""
    qmax: int = field(default_factory=lambda: config.NHS_QMAX)
    threshold: float = field(default_factory=lambda: config.NHS_LIOUVILLE_THRESHOLD)
    rel_tol: float = field(default_factory=lambda: config.NHS_REL_TOL)
    assert_exact: Optional[bool] = None
    exact_real: Optional[RealLike] = None
    radii: Sequence[int] = (10, 100, 1000, 10000)
    zero_set_radius: int = 10
    sample_limit: int = 50


def _lattice_blocks(R: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Row blocks of the square |ξ_j| ≤ R."""
    side = 2 * R + 1
    rows = max(1, BLOCK_SIZE // side)
    xi2 = np.arange(-R, R + 1)
    for start in range(-R, R + 1, rows):
        xi1 = np.arange(start, min(start + rows, R + 1))
        yield np.meshgrid(xi1, xi2, indexing="ij")


def _abs_values(s: Symbol, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    return np.abs(np.broadcast_to(s(xi1, xi2), xi1.shape))


def zero_set(s: Symbol, R: int, tol: float = 0.0) -> List[FreqIndex]:
    """All ξ with |ξ_j| ≤ R and |σ(ξ)| ≤ tol, in lexicographic order."""
    if R < 0 or tol < 0:
        raise ValueError("R and tol must be nonnegative")
    cache = s.zero_cache
    if cache is not None and cache.radius >= R and cache.tol == tol:
        return [p for p in cache.points if abs(p.xi1) <= R and abs(p.xi2) <= R]
    points: List[FreqIndex] = []
    for xi1, xi2 in _lattice_blocks(R):
        mask = _abs_values(s, xi1, xi2) <= tol
        points.extend(FreqIndex(int(a), int(b)) for a, b in zip(xi1[mask], xi2[mask]))
    return points


def _gate(s: Symbol, h: BoundaryLike, R: int, M: float, threshold: float, zero_tol: Optional[float]) -> GateResult:
    if R <= 0 or M <= 0:
        raise ValueError("R and M must be positive")
    h = as_boundary(h)
    best: Optional[Tuple[float, int, int, float, float]] = None
    checked = 0
    for xi1, xi2 in _lattice_blocks(R):
        sigma = _abs_values(s, xi1, xi2)
        weight = weights_2d(h, xi1, xi2)
        region = weight >= threshold
        if zero_tol is not None:
            region &= sigma > zero_tol
        checked += int(region.sum())
        bound = weight ** (-M)
        bad = region & (sigma <= bound)
        if not bad.any():
            continue
        idx = np.flatnonzero(bad.ravel())
        order = np.lexsort((xi2.ravel()[idx], xi1.ravel()[idx], weight.ravel()[idx]))
        k = idx[order[0]]
        cand = (float(weight.ravel()[k]), int(xi1.ravel()[k]), int(xi2.ravel()[k]),
                float(sigma.ravel()[k]), float(bound.ravel()[k]))
        if best is None or cand[:3] < best[:3]:
            best = cand
    if best is None:
        return GateResult(passed=True, checked=checked)
    weight, a, b, sigma, bound = best
    return GateResult(passed=False, witness=FreqIndex(a, b), abs_sigma=sigma, weight=weight,
                      bound=bound, checked=checked)


def ghe_gate(s: Symbol, h: BoundaryLike, R: int, M: float, threshold: Optional[float] = None) -> GateResult:
    """|σ(ξ)| > ⟨ξ⟩^{−M} for every |ξ_j| ≤ R with ⟨ξ⟩ ≥ threshold (default M).

    The witness is the violating ξ of smallest weight.
    """
    return _gate(s, h, R, M, M if threshold is None else threshold, None)


def gs_gate(s: Symbol, h: BoundaryLike, R: int, M: float, zero_tol: float = 0.0,
            threshold: Optional[float] = None) -> GateResult:
    """As ghe_gate, but points with |σ| ≤ zero_tol are exempt and there is no weight threshold by default."""
    return _gate(s, h, R, M, 0.0 if threshold is None else threshold, zero_tol)


def scale_adjusted_exponent(M: float, k: complex, threshold: float) -> float:
    """Exponent keeping gate verdicts for k·σ, given a weight threshold > 1."""
    if threshold <= 1:
        raise ValueError("threshold must exceed 1")
    return M + max(0.0, -math.log(abs(k))) / math.log(threshold)


def _ring_min_weight(h: BoundaryParams, m: int) -> float:
    """min ⟨ξ⟩ on |ξ|∞ = m."""
    r = np.arange(-m, m + 1)
    full = np.full_like(r, m)
    xi1 = np.concatenate([full, -full, r, r])
    xi2 = np.concatenate([r, r, full, -full])
    return float(weights_2d(h, xi1, xi2).min())


def _affine_shell_min(form: AffineForm, lo: int, hi: int) -> Optional[Tuple[float, int, int]]:
    """min nonzero |σ| over lo < |ξ|∞ ≤ hi, minimising over ξ₁ in closed form per ξ₂."""
    xi2 = np.arange(-hi, hi + 1)
    base = form.offset + form.slope2 * xi2.astype(float)
    b1 = form.slope1
    if b1 == 0:
        tstar = np.zeros(xi2.shape)
    else:
        tstar = -(b1.conjugate() * base).real / (abs(b1) ** 2)
    fl = np.floor(np.clip(tstar, -hi - 2, hi + 2)).astype(np.int64)
    inner = np.abs(xi2) <= lo
    intervals = (
        (np.where(inner, lo + 1, -hi), np.full(xi2.shape, hi)),
        (np.full(xi2.shape, -hi), np.where(inner, -lo - 1, hi)),
    )
    best_val = np.full(xi2.shape, np.inf)
    best_t = np.zeros(xi2.shape, dtype=np.int64)
    for a, b in intervals:
        for cand in (fl - 1, fl, fl + 1, fl + 2, a, a + 1, b - 1, b):
            t = np.clip(cand, a, b)
            val = np.abs(form.evaluate(t, xi2))
            val = np.where(val > 0, val, np.inf)
            better = val < best_val
            best_val = np.where(better, val, best_val)
            best_t = np.where(better, t, best_t)
    k = int(np.argmin(best_val))
    if not np.isfinite(best_val[k]):
        return None
    return float(best_val[k]), int(best_t[k]), int(xi2[k])


def _general_shell_min(s: Symbol, lo: int, hi: int) -> Optional[Tuple[float, int, int]]:
    best = None
    for xi1, xi2 in _lattice_blocks(hi):
        sigma = _abs_values(s, xi1, xi2)
        mask = (np.maximum(np.abs(xi1), np.abs(xi2)) > lo) & (sigma > 0)
        if not mask.any():
            continue
        vals = np.where(mask, sigma, np.inf)
        k = np.unravel_index(int(np.argmin(vals)), vals.shape)
        cand = (float(vals[k]), int(xi1[k]), int(xi2[k]))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def exponent_curve(s: Symbol, h: BoundaryLike, radii: Sequence[int]) -> ExponentCurve:
    """Per-shell min |σ| over nonzero entries and the implied exponent.

    Shell s is R_{s−1} < |ξ|∞ ≤ R_s (the first shell contains the origin);
    M_s = −log min|σ| / log min⟨ξ⟩, the weight minimum taken on the shell's
    inner ring away from the origin.
    """
    h = as_boundary(h)
    radii = [int(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] < 1:
        raise ValueError("radii must be positive and strictly increasing")
    bounds = list(zip([-1] + radii[:-1], radii))

    def scan(bound: Tuple[int, int]) -> Optional[ExponentShell]:
        lo, hi = bound
        if s.affine is not None:
            found = _affine_shell_min(s.affine, lo, hi)
        else:
            found = _general_shell_min(s, lo, hi)
        if found is None:
            return None
        sigma, a, b = found
        weight = _ring_min_weight(h, max(lo + 1, 1))
        implied = -math.log(sigma) / math.log(weight)
        return ExponentShell(radius=hi, min_abs_sigma=sigma, min_weight=weight,
                             implied_exponent=implied, argmin=FreqIndex(a, b))

    logger.debug(f"🔍 Scanning {len(bounds)} shells up to R={radii[-1]} ({'affine' if s.affine else 'lattice'})")
    with ThreadPoolExecutor(max_workers=config.thread_cap()) as pool:
        shells = [shell for shell in pool.map(scan, bounds) if shell is not None]
    return ExponentCurve(shells=shells)


def _relation(c: complex, h: BoundaryParams, opts: DiagnosisOptions) -> Tuple[Optional[bool], float]:
    """Whether c·log h₂ = −log h₁ holds (None when ambiguous), and the residual."""
    residual = abs(c * h.log_h2 + h.log_h1)
    if opts.assert_exact is not None:
        return opts.assert_exact, residual
    scale = max(abs(h.log_h1), abs(c) * abs(h.log_h2))
    if scale == 0.0 or residual <= opts.rel_tol * scale:
        return True, residual
    if residual >= AMBIGUITY_FACTOR * opts.rel_tol * scale:
        return False, residual
    return None, residual


def classify_constant_P(c: complex, h: BoundaryLike, opts: Optional[DiagnosisOptions] = None) -> DiagnosisReport:
    """GH / GS verdicts for P = ∂₁ + c∂₂ under the boundary weights h."""
    c = complex(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    h = as_boundary(h)
    opts = opts or DiagnosisOptions()
    symbol = symbol_constant_P(c, h)
    notes: List[str] = []
    diophantine = None
    evidence_based = False

    holds, residual = _relation(c, h, opts)
    if holds is None:
        gh = gs = Verdict.UNKNOWN
        branch = BRANCH_RELATION_AMBIGUOUS
        notes.append(f"|c·log h2 + log h1| = {residual:.3g} inside the ambiguity band")
    elif not holds:
        gh = gs = Verdict.YES
        real_offset = h.log_h1 + c.real * h.log_h2
        branch = BRANCH_RELATION_FAILS_I if real_offset != 0 else BRANCH_RELATION_FAILS_II
    elif c.imag != 0:
        if not h.is_torus:
            if opts.assert_exact:
                raise ValueError("c·log h2 = −log h1 with Im c ≠ 0 forces h = (1, 1)")
            notes.append("h is numerically indistinguishable from the torus")
        gh = gs = Verdict.YES
        branch = BRANCH_IMAGINARY
    else:
        real_value = opts.exact_real if opts.exact_real is not None else c.real
        diophantine = liouville_evidence(real_value, opts.qmax, opts.threshold)
        if diophantine.rational:
            gh, gs = Verdict.NO, Verdict.YES
            branch = BRANCH_RATIONAL
        elif diophantine.precision_exhausted:
            gh = gs = Verdict.UNKNOWN
            branch = BRANCH_PRECISION
            notes.append("supply an exact value (exact_real) to decide")
        elif diophantine.liouville_evidence:
            gh = gs = Verdict.NO
            evidence_based = True
            branch = BRANCH_LIOUVILLE
        else:
            gh = gs = Verdict.YES
            evidence_based = True
            branch = BRANCH_NON_LIOUVILLE
        if evidence_based:
            notes.append(f"Diophantine evidence to q ≤ {opts.qmax}: tail max exponent "
                         f"{diophantine.tail_max_exponent:.4g} vs threshold {opts.threshold}")

    zeros = zero_set(symbol, opts.zero_set_radius)
    curve = exponent_curve(symbol, h, opts.radii)
    logger.info(f"🧭 c={c}, h={h.as_tuple()}: GH={gh.value}, GS={gs.value} ({branch})")
    return DiagnosisReport(
        c_re=c.real,
        c_im=c.imag,
        h1=h.h1,
        h2=h.h2,
        gh_verdict=gh,
        gs_verdict=gs,
        # the L*-side classification coincides with the L-side one
        adjoint_gh_verdict=gh,
        adjoint_gs_verdict=gs,
        deciding_branch=branch,
        evidence_based=evidence_based,
        relation_residual=residual,
        zero_set_radius=opts.zero_set_radius,
        zero_set_sample=zeros[:opts.sample_limit],
        exponent_curve=curve,
        diophantine=diophantine,
        notes=notes,
    )


def diagnose_operator(op: OperatorSpec, h: BoundaryLike, opts: Optional[DiagnosisOptions] = None) -> DiagnosisReport:
    """Route ∂₁ + c∂₂ to the exact classification; other symbols get truncated gates only."""
    c = first_order_coefficient(op)
    if c is not None:
        return classify_constant_P(c, h, opts)
    h = as_boundary(h)
    opts = opts or DiagnosisOptions()
    symbol = diff_symbol(op, h)
    curve = exponent_curve(symbol, h, opts.radii)
    R = opts.zero_set_radius
    M = max(1.0, math.ceil(max(curve.bounded_by, 0.0)) + 1.0)
    ghe = ghe_gate(symbol, h, R, M)
    gs = gs_gate(symbol, h, R, M)
    notes = [
        f"ghe_gate(R={R}, M={M:g}) {'passed' if ghe else f'failed at {tuple(ghe.witness)}'}",
        f"gs_gate(R={R}, M={M:g}) {'passed' if gs else f'failed at {tuple(gs.witness)}'}",
    ]
    return DiagnosisReport(
        h1=h.h1,
        h2=h.h2,
        gh_verdict=Verdict.UNKNOWN,
        gs_verdict=Verdict.UNKNOWN,
        adjoint_gh_verdict=Verdict.UNKNOWN,
        adjoint_gs_verdict=Verdict.UNKNOWN,
        deciding_branch=BRANCH_GATES,
        zero_set_radius=R,
        zero_set_sample=zero_set(symbol, R)[:opts.sample_limit],
        exponent_curve=curve,
        notes=notes,
    )


def exact_real_from_text(text: str) -> RealLike:
    """"liouville[:N]" for the truncated Liouville constant, else a decimal or p/q string."""
    text = text.strip()
    if text.lower().startswith("liouville"):
        _, _, terms = text.partition(":")
        return liouville_constant(int(terms) if terms else 6)
    if "/" in text:
        return Fraction(text)
    return text
