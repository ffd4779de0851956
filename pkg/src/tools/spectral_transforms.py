"""L_h- and L_h*-Fourier transforms on the uniform grid of [0,1)².

For f satisfying the boundary conditions, the weighted function f·h^{∓x} is
1-periodic, so the L-transform f̂(ξ) = (f, v_ξ) reduces to a plain DFT of
f·h^{−x} (and the L*-transform f̂_*(ξ) = (f, u_ξ) to a DFT of f·h^{+x}).
Both are exact for band-limited weighted fields with n_j > 2K.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import AliasingError
from src.models import Axis, Basis, DecayClass, DecayReport, FrameBounds, FreqIndex
from src.tools.eigenbasis import (
    BoundaryLike,
    TWO_PI,
    as_boundary,
    eigenvalues_2d,
    frequency_lattice,
    frequency_range,
    l2_norm_exact,
    weights_2d,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Uniform N₁×N₂ grid with nodes x_k = (k₁/n1, k₂/n2)."""
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 4 or self.n2 < 4:
            raise ValueError(f"grid must have at least 4 samples per axis, got {self.n1}x{self.n2}")

    @classmethod
    def square(cls, n: int) -> "GridSpec":
        return cls(n, n)

    @classmethod
    def default_for(cls, K: int) -> "GridSpec":
        """n = 4K+4 keeps products of two band-K fields alias free."""
        return cls.square(4 * K + 4)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n1, self.n2)

    def axis_nodes(self, axis: int) -> np.ndarray:
        n = self.n1 if axis == 0 else self.n2
        return np.arange(n) / n

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        """x₁, x₂ arrays of shape (n1, n2)."""
        return np.meshgrid(self.axis_nodes(0), self.axis_nodes(1), indexing="ij")

    def max_trunc(self) -> int:
        """Largest alias-free K for both axes."""
        return (min(self.n1, self.n2) - 1) // 2

    def doubled(self) -> "GridSpec":
        return GridSpec(2 * self.n1, 2 * self.n2)


@dataclass
class GridField:
    """Complex samples of a function on a GridSpec."""
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.spec.shape:
            raise ValueError(f"values of shape {self.values.shape} do not match grid {self.spec.shape}")

    @classmethod
    def from_function(cls, spec: GridSpec, fn) -> "GridField":
        x1, x2 = spec.nodes()
        return cls(spec, np.broadcast_to(fn(x1, x2), spec.shape).astype(complex))

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridField":
        return cls(spec, np.zeros(spec.shape, dtype=complex))

    def grid_norm(self) -> float:
        """Discrete L² norm (mean of |f|² over the nodes)."""
        return float(np.sqrt(np.mean(np.abs(self.values) ** 2)))


@dataclass
class SpectralField:
    """Coefficients f̂(ξ) for |ξ₁|, |ξ₂| ≤ K; coeffs[ξ₁+K, ξ₂+K]."""
    trunc: int
    coeffs: np.ndarray
    basis: Basis = Basis.L

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        side = 2 * self.trunc + 1
        if self.trunc < 0 or self.coeffs.shape != (side, side):
            raise ValueError(f"coefficients must cover the ({side})² lattice, got {self.coeffs.shape}")
        self.basis = Basis(self.basis)

    @classmethod
    def zeros(cls, K: int, basis: Basis = Basis.L) -> "SpectralField":
        return cls(K, np.zeros((2 * K + 1, 2 * K + 1), dtype=complex), basis)

    @classmethod
    def delta(cls, K: int, xi: Tuple[int, int], basis: Basis = Basis.L, value: complex = 1.0) -> "SpectralField":
        out = cls.zeros(K, basis)
        out.coeffs[xi[0] + K, xi[1] + K] = value
        return out

    def at(self, xi: Tuple[int, int]) -> complex:
        return complex(self.coeffs[xi[0] + self.trunc, xi[1] + self.trunc])

    def lattice(self) -> Tuple[np.ndarray, np.ndarray]:
        return frequency_lattice(self.trunc)

    def l2(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.trunc, coeffs, self.basis)

    def nonzero_modes(self, tol: float = 0.0):
        idx = np.argwhere(np.abs(self.coeffs) > tol)
        return [FreqIndex(int(i) - self.trunc, int(j) - self.trunc) for i, j in idx]


@dataclass
class PartialField:
    """Partial transform: frequency in the transformed axis, samples in the other.

    axis=x2 stores ℱ₂f(x₁, ξ₂) with values[k₁, ξ₂+K];
    axis=x1 stores ℱ₁f(ξ₁, x₂) with values[ξ₁+K, k₂].
    """
    axis: Axis
    trunc: int
    values: np.ndarray
    spec: GridSpec
    basis: Basis = Basis.L

    def __post_init__(self):
        self.axis = Axis(self.axis)
        self.basis = Basis(self.basis)
        self.values = np.asarray(self.values, dtype=complex)
        side = 2 * self.trunc + 1
        expected = (self.spec.n1, side) if self.axis == Axis.X2 else (side, self.spec.n2)
        if self.values.shape != expected:
            raise ValueError(f"partial field of shape {self.values.shape} does not match {expected}")

    @property
    def axis_index(self) -> int:
        return 1 if self.axis == Axis.X2 else 0


def _weight_sign(basis: Basis) -> float:
    # conj(v_ξ) = h^{-x}e^{-2πix·ξ}; conj(u_ξ) = h^{+x}e^{-2πix·ξ}
    return -1.0 if Basis(basis) == Basis.L else 1.0


def _check_alias(n: int, K: int, what: str = "axis"):
    if n <= 2 * K:
        raise AliasingError(f"{what}: {n} samples cannot resolve |ξ| ≤ {K}; need n > 2K")


def analyze_1d(values: np.ndarray, hj: float, K: int, axis: int, basis: Basis = Basis.L) -> np.ndarray:
    """Weighted DFT along one axis, returning modes −K..K along that axis."""
    n = values.shape[axis]
    _check_alias(n, K, f"axis {axis}")
    xj = np.arange(n) / n
    shape = [1] * values.ndim
    shape[axis] = n
    weighted = values * np.power(hj, _weight_sign(basis) * xj).reshape(shape)
    spectrum = np.fft.fft(weighted, axis=axis) / n
    return np.take(spectrum, frequency_range(K) % n, axis=axis)


def synthesize_1d(coeffs: np.ndarray, hj: float, n: int, axis: int, basis: Basis = Basis.L) -> np.ndarray:
    """Σ c(ξ_j) u_{ξ_j}(x_j) (or v_{ξ_j} for Lstar) at n nodes along one axis."""
    K = (coeffs.shape[axis] - 1) // 2
    shape = list(coeffs.shape)
    shape[axis] = n
    spectrum = np.zeros(shape, dtype=complex)
    index = [slice(None)] * coeffs.ndim
    for pos, xi in enumerate(frequency_range(K)):
        index[axis] = xi % n
        src = [slice(None)] * coeffs.ndim
        src[axis] = pos
        spectrum[tuple(index)] += coeffs[tuple(src)]
    xj = np.arange(n) / n
    wshape = [1] * coeffs.ndim
    wshape[axis] = n
    return np.fft.ifft(spectrum, axis=axis) * n * np.power(hj, -_weight_sign(basis) * xj).reshape(wshape)


def _analyze(f: GridField, h: BoundaryLike, K: int, basis: Basis) -> SpectralField:
    h = as_boundary(h)
    n1, n2 = f.spec.shape
    _check_alias(n1, K, "x1")
    _check_alias(n2, K, "x2")
    sign = _weight_sign(basis)
    x1 = f.spec.axis_nodes(0)
    x2 = f.spec.axis_nodes(1)
    weight = np.power(h.h1, sign * x1)[:, None] * np.power(h.h2, sign * x2)[None, :]
    spectrum = np.fft.fft2(f.values * weight) / (n1 * n2)
    r = frequency_range(K)
    return SpectralField(K, spectrum[np.ix_(r % n1, r % n2)], basis)


def analyze(f: GridField, h: BoundaryLike, K: int) -> SpectralField:
    """f̂(ξ) = (f, v_ξ) for |ξ_j| ≤ K."""
    return _analyze(f, h, K, Basis.L)


def analyze_star(f: GridField, h: BoundaryLike, K: int) -> SpectralField:
    """f̂_*(ξ) = (f, u_ξ) for |ξ_j| ≤ K."""
    return _analyze(f, h, K, Basis.LSTAR)


def analyze_basis(f: GridField, h: BoundaryLike, K: int, basis: Basis) -> SpectralField:
    return _analyze(f, h, K, Basis(basis))


def synthesize(c: SpectralField, h: BoundaryLike, spec: GridSpec) -> GridField:
    """Σ f̂(ξ) u_ξ (L tag) or Σ f̂_*(ξ) v_ξ (Lstar tag) on the grid nodes."""
    h = as_boundary(h)
    n1, n2 = spec.shape
    r = frequency_range(c.trunc)
    spectrum = np.zeros(spec.shape, dtype=complex)
    # modes folding onto one bin still sum correctly at the nodes
    np.add.at(spectrum, (np.repeat(r % n1, r.size), np.tile(r % n2, r.size)), c.coeffs.ravel())
    sign = -_weight_sign(c.basis)
    weight = np.power(h.h1, sign * spec.axis_nodes(0))[:, None] * np.power(h.h2, sign * spec.axis_nodes(1))[None, :]
    return GridField(spec, np.fft.ifft2(spectrum) * (n1 * n2) * weight)


def partial_analyze(f: GridField, h: BoundaryLike, axis: Union[Axis, str], K_axis: int,
                    basis: Basis = Basis.L) -> PartialField:
    """ℱ_j f: 1-D weighted transform in the chosen variable only."""
    h = as_boundary(h)
    axis = Axis(axis)
    if axis == Axis.X2:
        values = analyze_1d(f.values, h.h2, K_axis, 1, basis)
    else:
        values = analyze_1d(f.values, h.h1, K_axis, 0, basis)
    return PartialField(axis, K_axis, values, f.spec, basis)


def partial_synthesize(p: PartialField, h: BoundaryLike) -> GridField:
    """f(x₁,x₂) = Σ ℱ₂f(x₁,ξ₂) u_{ξ₂}(x₂) (and the x₁ analogue)."""
    h = as_boundary(h)
    if p.axis == Axis.X2:
        values = synthesize_1d(p.values, h.h2, p.spec.n2, 1, p.basis)
    else:
        values = synthesize_1d(p.values, h.h1, p.spec.n1, 0, p.basis)
    return GridField(p.spec, values)


def spectral_derivative(f: GridField, h: BoundaryLike, axis: int, order: int = 1) -> GridField:
    """∂_j^order f through the derivative symbol (log h_j + 2πiξ_j)^order."""
    h = as_boundary(h)
    hj = h.h1 if axis == 0 else h.h2
    n = f.spec.shape[axis]
    K = (n - 1) // 2
    coeffs = analyze_1d(f.values, hj, K, axis)
    shape = [1, 1]
    shape[axis] = 2 * K + 1
    factor = (math.log(hj) + 1j * TWO_PI * frequency_range(K)) ** order
    return GridField(f.spec, synthesize_1d(coeffs * factor.reshape(shape), hj, n, axis))


def _random_coeffs(rng: np.random.Generator, K: int) -> np.ndarray:
    side = 2 * K + 1
    return rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))


def _envelope(h1: float, h2: float) -> Tuple[float, float]:
    """[inf, sup] of h₁^{x₁}h₂^{x₂} over [0,1]²."""
    return min(1.0, h1) * min(1.0, h2), max(1.0, h1) * max(1.0, h2)


def frame_bounds(h: BoundaryLike, trials: int, grid: GridSpec, K: int,
                 seed: Optional[int] = None) -> FrameBounds:
    """Empirical frame constants (Σ|f̂|²)^{1/2}/‖f‖ over random band-limited fields.

    Σ|f̂|² = ‖f·h^{−x}‖² by Parseval on the weighted function, so the ratios lie
    in [inf h^{−x}, sup h^{−x}] (and [inf h^{x}, sup h^{x}] on the L* side).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    h = as_boundary(h)
    rng = np.random.default_rng(seed)
    envelope = _envelope(1.0 / h.h1, 1.0 / h.h2)
    envelope_star = _envelope(h.h1, h.h2)
    ratios, ratios_star = [], []
    for _ in range(trials):
        c = _random_coeffs(rng, K)
        for basis, sink in ((Basis.L, ratios), (Basis.LSTAR, ratios_star)):
            field_ = synthesize(SpectralField(K, c, basis), h, grid)
            norm = l2_norm_exact(c, h, star=basis == Basis.LSTAR)
            if norm == 0.0:
                continue
            coeffs = analyze_basis(field_, h, K, basis).coeffs
            sink.append(float(np.linalg.norm(coeffs)) / norm)

    bounds = FrameBounds(
        lower=min(ratios), upper=max(ratios),
        lower_star=min(ratios_star), upper_star=max(ratios_star),
        envelope=list(envelope), envelope_star=list(envelope_star), trials=trials,
    )
    slack = 1e-9
    if bounds.lower < envelope[0] - slack or bounds.upper > envelope[1] + slack:
        logger.warning(f"⚠️ frame ratios [{bounds.lower}, {bounds.upper}] leave envelope {envelope}")
    logger.debug(f"frame bounds for h={h.as_tuple()}: [{bounds.lower:.6g}, {bounds.upper:.6g}]")
    return bounds


def sobolev_seminorm(c: SpectralField, h: BoundaryLike, k: int) -> float:
    """max_{j≤k} (Σ |λ_ξ^j f̂(ξ)|²)^{1/2}, the spectral surrogate of ‖f‖_{H^k_L}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    xi1, xi2 = c.lattice()
    modulus = np.abs(eigenvalues_2d(h, xi1, xi2))
    mass = np.abs(c.coeffs) ** 2
    return max(float(np.sqrt(np.sum(modulus ** (2 * j) * mass))) for j in range(k + 1))


def pk_seminorm(coeffs_1d: np.ndarray, hj: float, K: int) -> float:
    """p_K(φ) = Σ_{β≤K} ‖d^βφ/dx^β‖ for a 1-D coefficient vector over −N..N."""
    N = (len(coeffs_1d) - 1) // 2
    symbol = math.log(hj) + 1j * TWO_PI * frequency_range(N)
    return float(sum(np.linalg.norm(symbol ** beta * coeffs_1d) for beta in range(K + 1)))


def _inscribed_weight(h: BoundaryLike, K: int) -> float:
    """Smallest ⟨ξ⟩ on the lattice boundary max|ξ_j| = K."""
    r = frequency_range(K)
    edge1 = weights_2d(h, np.full_like(r, K), r)
    edge2 = weights_2d(h, np.full_like(r, -K), r)
    edge3 = weights_2d(h, r, np.full_like(r, K))
    edge4 = weights_2d(h, r, np.full_like(r, -K))
    return float(min(edge1.min(), edge2.min(), edge3.min(), edge4.min()))


@dataclass
class ShellMaxima:
    """Per dyadic ⟨ξ⟩-shell maxima; radius is ⟨ξ⟩ at the maximiser."""
    index: np.ndarray
    radius: np.ndarray
    maximum: np.ndarray
    populated: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))


def shell_maxima(weights: np.ndarray, values: np.ndarray, cutoff: float) -> ShellMaxima:
    """Re-bin |values| into shells [2^s, 2^{s+1}) of the weight, up to cutoff."""
    weights = np.asarray(weights, dtype=float).ravel()
    values = np.abs(np.asarray(values)).ravel()
    top = max(0, int(math.floor(math.log2(cutoff))) if cutoff >= 1 else 0)
    shells = np.floor(np.log2(np.maximum(weights, 1.0))).astype(int)
    index, radius, maximum, populated = [], [], [], []
    for s in range(top):
        mask = shells == s
        index.append(s)
        populated.append(bool(mask.any()))
        if not mask.any():
            radius.append(2.0 ** s)
            maximum.append(0.0)
            continue
        local = np.flatnonzero(mask)
        best = local[np.argmax(values[local])]
        radius.append(float(weights[best]))
        maximum.append(float(values[best]))
    return ShellMaxima(np.array(index), np.array(radius), np.array(maximum), np.array(populated, dtype=bool))


def decay_classify(data: Union[SpectralField, Tuple[Sequence[float], Sequence[complex]]],
                   h: Optional[BoundaryLike] = None, *, max_order: float = 20.0,
                   drift_tol: float = 0.25, noise_floor: float = 1e-13, tail: int = 4) -> DecayReport:
    """Classify a coefficient sequence as rapid (S), moderate (S′), unbounded or indeterminate.

    Shell maxima M_s at radii R_s give local exponents e_s = log M_s / log R_s.
    Rapid: numerically finite support, or e_s below −max_order. Unbounded: e_s
    keeps increasing across the tail shells. Moderate: e_s stabilises.
    """
    if isinstance(data, SpectralField):
        if h is None:
            raise ValueError("boundary parameters are required to weight a SpectralField")
        xi1, xi2 = data.lattice()
        weights = weights_2d(h, xi1, xi2).ravel()
        values = np.abs(data.coeffs).ravel()
        # only shells lying entirely inside the square truncation
        cutoff = _inscribed_weight(h, data.trunc)
    else:
        weights = np.asarray(data[0], dtype=float).ravel()
        values = np.abs(np.asarray(data[1])).ravel()
        cutoff = 2.0 ** (math.floor(math.log2(max(weights.max(), 1.0))) + 1) if weights.size else 1.0

    peak = float(values.max()) if values.size else 0.0
    if peak == 0.0:
        return DecayReport(decay_class=DecayClass.RAPID, fitted_exponent=-math.inf, residual=0.0)
    values = np.where(values <= noise_floor * peak, 0.0, values)

    shells = shell_maxima(weights, values, cutoff)
    nonzero = np.flatnonzero(shells.maximum > 0)
    if nonzero.size == 0:
        return DecayReport(decay_class=DecayClass.RAPID, fitted_exponent=-math.inf, residual=0.0)
    if nonzero[-1] < len(shells.maximum) - 1:
        # trailing shells vanish: finite support at this depth
        return DecayReport(decay_class=DecayClass.RAPID, fitted_exponent=-math.inf, residual=0.0,
                           shell_radii=shells.radius[nonzero].tolist())

    usable = nonzero[shells.radius[nonzero] >= 2.0]
    if usable.size < 3:
        return DecayReport(decay_class=DecayClass.INDETERMINATE, fitted_exponent=math.nan, residual=math.nan,
                           shell_radii=shells.radius[usable].tolist())

    log_r = np.log(shells.radius[usable])
    log_m = np.log(shells.maximum[usable])
    slope, intercept = np.polyfit(log_r, log_m, 1)
    residual = float(np.sqrt(np.mean((log_m - (slope * log_r + intercept)) ** 2)))
    exponents = log_m / log_r
    tail_idx = usable[-min(tail, usable.size):]
    tail_exp = exponents[-len(tail_idx):]
    drift = float(np.polyfit(shells.index[tail_idx].astype(float), tail_exp, 1)[0]) if len(tail_idx) >= 2 else 0.0

    if exponents[-1] < -max_order:
        decay_class = DecayClass.RAPID
    elif drift > drift_tol:
        decay_class = DecayClass.UNBOUNDED
    elif drift < -drift_tol:
        decay_class = DecayClass.INDETERMINATE
    else:
        decay_class = DecayClass.MODERATE

    return DecayReport(
        decay_class=decay_class,
        fitted_exponent=float(slope),
        residual=residual,
        shell_radii=shells.radius[usable].tolist(),
        shell_exponents=exponents.tolist(),
        drift=drift,
    )
