"""Normal form of P = ∂₁ + a(x₁)∂₂.

With a₀ the mean of a and A(x₁) = ∫₀^{x₁} a − x₁a₀, the conjugation

    Ψ_a w(x₁,x₂) = Σ_{ξ₂} e^{(log h₂ + 2πiξ₂)A(x₁)} ℱ₂w(x₁,ξ₂) u_{ξ₂}(x₂)

satisfies Ψ_a∘P = P₀∘Ψ_a with P₀ = ∂₁ + a₀∂₂, and Ψ_a⁻¹ = Ψ_{−a}.
Ψ_a is applied pointwise per (x₁, ξ₂); only the derivatives taken after it
see the widened x₁ band, so those paths require an oversampled grid.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np

from src.errors import AliasingError, ResolutionError
from src.models import ASeries, Axis, Direction, OperatorSpec, ResolutionReport, SolveOptions, Term
from src.tools import field_io
from src.tools.division_solver import solve
from src.tools.eigenbasis import TWO_PI, BoundaryLike, as_boundary, frequency_range, weights_1d
from src.tools.multiplier_calculus import diff_symbol
from src.tools.spectral_transforms import (
    GridField,
    GridSpec,
    PartialField,
    SpectralField,
    analyze,
    analyze_1d,
    partial_analyze,
    partial_synthesize,
    spectral_derivative,
    synthesize,
)

logger = logging.getLogger(__name__)

# grid points per unit of x₁ band required on derivative paths
OVERSAMPLING = 16

# modes below this fraction of the peak do not count toward the band
BAND_TOL = 1e-10

IMAGINARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoefficientFunction:
    """Real 1-periodic a(x₁) as a finite Fourier series; coeffs[k + band] = a_k."""
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size % 2 == 0:
            raise ValueError("coefficients must cover k = −B..B")
        mirror = np.conj(coeffs[::-1])
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if np.max(np.abs(coeffs - mirror)) >= IMAGINARY_TOL * scale:
            raise ValueError("a(x₁) must be real-valued: a_{−k} ≠ conj(a_k)")
        # exact Hermitian symmetry from here on
        object.__setattr__(self, "coeffs", 0.5 * (coeffs + mirror))

    @property
    def band(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def mean(self) -> float:
        return float(self.coeffs[self.band].real)

    @property
    def effective_band(self) -> int:
        k = np.flatnonzero(np.abs(self.coeffs) > 0)
        return int(np.max(np.abs(k - self.band))) if k.size else 0

    @classmethod
    def constant(cls, a0: float) -> "CoefficientFunction":
        return cls(np.array([a0], dtype=complex))

    @classmethod
    def from_modes(cls, mean: float, modes: Union[Dict[int, complex], Iterable[Tuple[int, complex]]]) -> "CoefficientFunction":
        """Modes for k > 0 imply their conjugates; explicit k < 0 entries must agree."""
        items = list(modes.items()) if isinstance(modes, dict) else list(modes)
        band = max([abs(int(k)) for k, _ in items], default=0)
        coeffs = np.zeros(2 * band + 1, dtype=complex)
        coeffs[band] = mean
        given = set()
        for k, value in items:
            k = int(k)
            if k == 0:
                raise ValueError("the k = 0 mode is the mean; pass it separately")
            coeffs[k + band] += complex(value)
            given.add(k)
        for k in list(given):
            if -k not in given:
                coeffs[-k + band] = np.conj(coeffs[k + band])
        return cls(coeffs)

    @classmethod
    def from_series(cls, series: ASeries) -> "CoefficientFunction":
        modes = [(int(m["k"]), complex(m.get("re", 0.0), m.get("im", 0.0))) for m in series.modes]
        return cls.from_modes(series.mean, modes)

    @classmethod
    def from_samples(cls, values, trim: float = 1e-15) -> "CoefficientFunction":
        """Samples a(k/n); modes below trim·peak are dropped, Nyquist is discarded."""
        values = np.asarray(values)
        if np.iscomplexobj(values):
            if np.max(np.abs(values.imag)) >= IMAGINARY_TOL * max(1.0, float(np.max(np.abs(values)))):
                raise ValueError("a(x₁) samples carry an imaginary part")
            values = values.real
        n = values.size
        if n < 3:
            raise ValueError("need at least 3 samples of a(x₁)")
        spectrum = np.fft.fft(values.astype(float)) / n
        full = (n - 1) // 2
        coeffs = spectrum[frequency_range(full) % n]
        keep = np.abs(coeffs) > trim * float(np.max(np.abs(coeffs)))
        keep[full] = True
        band = int(np.max(np.abs(np.flatnonzero(keep) - full)))
        coeffs = np.where(keep, coeffs, 0.0)[full - band:full + band + 1]
        return cls(coeffs)

    @classmethod
    def from_json(cls, path: str) -> "CoefficientFunction":
        return cls.from_series(field_io.read_series_json(path))

    @classmethod
    def from_csv(cls, path: str) -> "CoefficientFunction":
        x, values = field_io.read_samples_csv(path)
        n = values.size
        if not np.allclose(x, np.arange(n) / n, atol=1e-12):
            raise ValueError(f"{path}: samples must sit on the uniform grid k/{n}")
        return cls.from_samples(values)

    def to_series(self) -> ASeries:
        B = self.band
        modes = [{"k": k, "re": float(self.coeffs[k + B].real), "im": float(self.coeffs[k + B].imag)}
                 for k in range(1, B + 1) if self.coeffs[k + B] != 0]
        return ASeries(mean=self.mean, modes=modes)

    def evaluate(self, x) -> np.ndarray:
        """a(x); real by construction."""
        x = np.asarray(x, dtype=float)
        k = frequency_range(self.band)
        phase = np.exp(1j * TWO_PI * np.multiply.outer(np.mod(x, 1.0), k))
        return (phase @ self.coeffs).real

    def __add__(self, other: "CoefficientFunction") -> "CoefficientFunction":
        band = max(self.band, other.band)
        out = np.zeros(2 * band + 1, dtype=complex)
        out[band - self.band:band + self.band + 1] += self.coeffs
        out[band - other.band:band + other.band + 1] += other.coeffs
        return CoefficientFunction(out)

    def __neg__(self) -> "CoefficientFunction":
        return CoefficientFunction(-self.coeffs)


@dataclass(frozen=True, eq=False)
class PrimitiveData:
    """a₀ and A(x₁) = ∫₀^{x₁} a − x₁a₀ sampled on x."""
    a0: float
    x: np.ndarray
    A_samples: np.ndarray
    source: CoefficientFunction


def primitive(a: CoefficientFunction, x) -> np.ndarray:
    """A(x) = Σ_{k≠0} a_k (e^{2πikx} − 1)/(2πik)."""
    x = np.asarray(x, dtype=float)
    k = frequency_range(a.band)
    nonzero = k != 0
    k = k[nonzero]
    if k.size == 0:
        return np.zeros(x.shape)
    weights = a.coeffs[nonzero] / (1j * TWO_PI * k)
    phase = np.exp(1j * TWO_PI * np.multiply.outer(np.mod(x, 1.0), k))
    return ((phase - 1.0) @ weights).real


def mean_and_primitive(a: CoefficientFunction, n: int = 64) -> PrimitiveData:
    """a₀ and A on the uniform grid k/n; exact for band-limited a."""
    x = np.arange(n) / n
    return PrimitiveData(a0=a.mean, x=x, A_samples=primitive(a, x), source=a)


def compose_coefficients(a: CoefficientFunction, b: CoefficientFunction) -> CoefficientFunction:
    """Ψ_a∘Ψ_b = Ψ_{a+b}."""
    return a + b


def estimate_band(f: GridField, h: BoundaryLike, axis: int = 0, rel_tol: float = BAND_TOL) -> int:
    """Largest |ξ_j| whose 1-D coefficients exceed rel_tol of the peak."""
    h = as_boundary(h)
    n = f.spec.shape[axis]
    K = (n - 1) // 2
    hj = h.h1 if axis == 0 else h.h2
    coeffs = np.abs(analyze_1d(f.values, hj, K, axis))
    profile = coeffs.max(axis=1 - axis)
    peak = float(profile.max())
    if peak == 0.0:
        return 0
    idx = np.flatnonzero(profile > rel_tol * peak)
    return int(np.max(np.abs(idx - K)))


def _check_oversampling(f: GridField, h: BoundaryLike, band: Optional[int]):
    band = estimate_band(f, h, 0) if band is None else band
    needed = OVERSAMPLING * max(band, 1)
    if f.spec.n1 < needed:
        raise AliasingError(f"x1 grid of {f.spec.n1} points cannot oversample band {band}; need n1 >= {needed}")


def psi_apply(a: CoefficientFunction, h: BoundaryLike, w: GridField,
              direction: Union[Direction, str] = Direction.FORWARD,
              band: Optional[int] = None, check: bool = True) -> GridField:
    """Ψ_a w (forward) or Ψ_{−a} w (inverse) on the grid nodes."""
    h = as_boundary(h)
    if check:
        _check_oversampling(w, h, band)
    sign = 1.0 if Direction(direction) == Direction.FORWARD else -1.0
    K2 = (w.spec.n2 - 1) // 2
    partial = partial_analyze(w, h, Axis.X2, K2)
    A = primitive(a, w.spec.axis_nodes(0))
    factor = np.exp(sign * np.multiply.outer(A, h.log_h2 + 1j * TWO_PI * frequency_range(K2)))
    rotated = PartialField(Axis.X2, K2, partial.values * factor, w.spec, partial.basis)
    return partial_synthesize(rotated, h)


def reduce(a: CoefficientFunction) -> Tuple[float, OperatorSpec]:
    """P₀ = ∂₁ + a₀∂₂."""
    a0 = a.mean
    return a0, OperatorSpec(terms=[Term(alpha1=1, alpha2=0, re=1.0), Term(alpha1=0, alpha2=1, re=a0)])


def apply_variable_operator(a: CoefficientFunction, h: BoundaryLike, w: GridField) -> GridField:
    """Pw = ∂₁w + a(x₁)·∂₂w with spectral derivatives and a pointwise product."""
    h = as_boundary(h)
    d1 = spectral_derivative(w, h, 0)
    d2 = spectral_derivative(w, h, 1)
    a_nodes = a.evaluate(w.spec.axis_nodes(0))
    return GridField(w.spec, d1.values + a_nodes[:, None] * d2.values)


def _apply_constant(a0: float, h: BoundaryLike, w: GridField) -> GridField:
    d1 = spectral_derivative(w, h, 0)
    d2 = spectral_derivative(w, h, 1)
    return GridField(w.spec, d1.values + a0 * d2.values)


def _grid_rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(values) ** 2)))


def intertwine_residual(a: CoefficientFunction, h: BoundaryLike, w: GridField, band: Optional[int] = None) -> float:
    """‖Ψ_a(Pw) − P₀(Ψ_a w)‖ on the grid."""
    h = as_boundary(h)
    _check_oversampling(w, h, band)
    left = psi_apply(a, h, apply_variable_operator(a, h, w), check=False)
    right = _apply_constant(a.mean, h, psi_apply(a, h, w, check=False))
    return _grid_rms(left.values - right.values)


def resolution_check(a: CoefficientFunction, h: BoundaryLike, w_hat: SpectralField, n1: int, n2: int,
                     floor_rel: float = 1e-10, require: bool = False) -> ResolutionReport:
    """Intertwining residual at (n1, n2) and the doubled grid.

    Converged when the fine residual is at most a quarter of the coarse one,
    or when both sit below the round-off floor floor_rel·max(1, ‖Pw‖).
    """
    h = as_boundary(h)
    coarse_spec = GridSpec(n1, n2)
    fine_spec = coarse_spec.doubled()
    coarse = intertwine_residual(a, h, synthesize(w_hat, h, coarse_spec), band=w_hat.trunc)
    w_fine = synthesize(w_hat, h, fine_spec)
    fine = intertwine_residual(a, h, w_fine, band=w_hat.trunc)
    floor = floor_rel * max(1.0, _grid_rms(apply_variable_operator(a, h, w_fine).values))
    ratio = coarse / fine if fine > 0 else math.inf
    converged = fine <= coarse / 4.0 or (coarse <= floor and fine <= floor)
    report = ResolutionReport(n_coarse=[n1, n2], n_fine=list(fine_spec.shape), coarse=coarse, fine=fine,
                              ratio=ratio, floor=floor, converged=converged)
    if require and not converged:
        raise ResolutionError(f"intertwining residual {coarse:.3g} -> {fine:.3g} under grid doubling did not converge")
    logger.debug(f"🔁 residual {coarse:.3g} (n={n1}) -> {fine:.3g} (n={2 * n1}), converged={converged}")
    return report


def solve_variable(a: CoefficientFunction, h: BoundaryLike, f: GridField,
                   opts: Optional[SolveOptions] = None, band: Optional[int] = None) -> GridField:
    """w = Ψ_{−a}(P₀⁻¹ Ψ_a f); raises InadmissibleDatumError when Ψ_a f ∉ 𝔼₀."""
    h = as_boundary(h)
    _check_oversampling(f, h, band)
    a0, p0 = reduce(a)
    g = psi_apply(a, h, f, check=False)
    K = f.spec.max_trunc()
    g_hat = analyze(g, h, K)
    w_hat = solve(diff_symbol(p0, h), g_hat, opts, h)
    w0 = synthesize(w_hat, h, f.spec)
    return psi_apply(a, h, w0, Direction.INVERSE, check=False)


def variable_residual(a: CoefficientFunction, h: BoundaryLike, w: GridField, f: GridField) -> float:
    """‖Pw − f‖ on the grid."""
    return _grid_rms(apply_variable_operator(a, h, w).values - f.values)


def partial_regularity_profile(w: GridField, h: BoundaryLike, k: int,
                               noise_floor: float = 1e-13) -> Tuple[np.ndarray, np.ndarray]:
    """(ξ₂, ‖d^k/dx₁^k ℱ₂w(·,ξ₂)‖) with the x₁ norm taken on 1-D coefficients."""
    h = as_boundary(h)
    K2 = (w.spec.n2 - 1) // 2
    partial = partial_analyze(w, h, Axis.X2, K2)
    K1 = (w.spec.n1 - 1) // 2
    coeffs = analyze_1d(partial.values, h.h1, K1, 0)
    peak = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    coeffs = np.where(np.abs(coeffs) > noise_floor * peak, coeffs, 0.0)
    symbol = (h.log_h1 + 1j * TWO_PI * frequency_range(K1)) ** k
    norms = np.linalg.norm(symbol[:, None] * coeffs, axis=0)
    return frequency_range(K2), norms


def partial_regularity_ok(w: GridField, h: BoundaryLike, max_k: int = 4, max_N: int = 4,
                          tail_tol: float = 1e-8) -> bool:
    """‖d^k ℱ₂w(·,ξ₂)‖·⟨ξ₂⟩^N stays bounded and decays over the outer half of ξ₂, for all k, N ≤ the maxima."""
    h = as_boundary(h)
    for k in range(max_k + 1):
        xi2, norms = partial_regularity_profile(w, h, k)
        weight = weights_1d(h.h2, xi2)
        for N in range(max_N + 1):
            scaled = norms * weight ** N
            peak = float(scaled.max())
            if peak == 0.0:
                continue
            outer = np.abs(xi2) >= (xi2.max() + 1) // 2
            if float(scaled[outer].max()) > tail_tol * peak:
                return False
    return True
