"""Closed-form eigen-system of L_h = ∂₁² + ∂₂² with boundary weights h.

The eigenfunctions are u_ξ(x) = h^x e^{2πi x·ξ} with eigenvalues
λ_ξ = (log h₁ + 2πiξ₁)² + (log h₂ + 2πiξ₂)²; the conjugate system
v_ξ(x) = h^{-x} e^{2πi x·ξ} consists of eigenfunctions of the adjoint and
satisfies (u_ξ, v_η) = δ_ξη. Neither family is normalised.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.models import BoundaryParams, FreqIndex

BoundaryLike = Union[BoundaryParams, Tuple[float, float]]
FreqLike = Union[FreqIndex, Tuple[int, int]]

TWO_PI = 2.0 * math.pi

# Order of L_h; weights use (1+|λ|²)^{1/2m}.
MODEL_ORDER = 2


@dataclass(frozen=True)
class EigenData:
    """Eigenvalue and weight ⟨ξ⟩ of one 2-D mode."""
    eigenvalue: complex
    weight: float


@dataclass(frozen=True)
class EigenData1D:
    """Eigenvalue and weight ⟨ξ_j⟩ of one 1-D factor mode."""
    eigenvalue: complex
    weight: float


def as_boundary(h: BoundaryLike) -> BoundaryParams:
    """Accept a BoundaryParams or a plain (h1, h2) pair."""
    if isinstance(h, BoundaryParams):
        return h
    h1, h2 = h
    return BoundaryParams(h1=float(h1), h2=float(h2))


def _log_h(h: BoundaryParams) -> Tuple[float, float]:
    return math.log(h.h1), math.log(h.h2)


def eigenvalues_2d(h: BoundaryLike, xi1, xi2) -> np.ndarray:
    """Vectorised λ_ξ over integer arrays xi1, xi2."""
    h = as_boundary(h)
    l1, l2 = _log_h(h)
    z1 = l1 + 1j * TWO_PI * np.asarray(xi1, dtype=float)
    z2 = l2 + 1j * TWO_PI * np.asarray(xi2, dtype=float)
    return z1 * z1 + z2 * z2


def eigenvalue_2d(h: BoundaryLike, xi: FreqLike) -> complex:
    """λ_ξ = (log h₁ + 2πiξ₁)² + (log h₂ + 2πiξ₂)²."""
    return complex(eigenvalues_2d(h, xi[0], xi[1]))


def weight_general(eigenvalue, m: int = MODEL_ORDER):
    """(1+|λ|²)^{1/2m}; only m = 2 is used by the public weights."""
    return (1.0 + np.abs(eigenvalue) ** 2) ** (1.0 / (2 * m))


def weights_2d(h: BoundaryLike, xi1, xi2) -> np.ndarray:
    """Vectorised ⟨ξ⟩ over integer arrays."""
    return weight_general(eigenvalues_2d(h, xi1, xi2))


def weight_2d(h: BoundaryLike, xi: FreqLike) -> float:
    """⟨ξ⟩ = (1+|λ_ξ|²)^{1/4}."""
    return float(weights_2d(h, xi[0], xi[1]))


def eigen_data(h: BoundaryLike, xi: FreqLike) -> EigenData:
    lam = eigenvalue_2d(h, xi)
    return EigenData(eigenvalue=lam, weight=float(weight_general(lam)))


def eigenvalues_1d(hj: float, xij) -> np.ndarray:
    """Vectorised λ_{ξ_j} = −i log h_j + 2πξ_j."""
    if hj <= 0:
        raise ValueError(f"boundary weight must be positive, got {hj}")
    return -1j * math.log(hj) + TWO_PI * np.asarray(xij, dtype=float)


def eigenvalue_1d(hj: float, xij: int) -> complex:
    return complex(eigenvalues_1d(hj, xij))


def weights_1d(hj: float, xij) -> np.ndarray:
    """⟨ξ_j⟩ = (1+|λ_{ξ_j}|²)^{1/2}."""
    return np.sqrt(1.0 + np.abs(eigenvalues_1d(hj, xij)) ** 2)


def weight_1d(hj: float, xij: int) -> float:
    return float(weights_1d(hj, xij))


def eigen_data_1d(hj: float, xij: int) -> EigenData1D:
    lam = eigenvalue_1d(hj, xij)
    return EigenData1D(eigenvalue=lam, weight=float(math.sqrt(1.0 + abs(lam) ** 2)))


def _phase(x1, x2, xi1, xi2) -> np.ndarray:
    # reduce x·ξ mod 1 first so integer phases are exact at the boundary
    t = np.mod(np.asarray(x1, dtype=float) * xi1 + np.asarray(x2, dtype=float) * xi2, 1.0)
    return np.exp(1j * TWO_PI * t)


def eval_u(h: BoundaryLike, xi: FreqLike, x) -> Union[complex, np.ndarray]:
    """u_ξ(x) = h₁^{x₁} h₂^{x₂} e^{2πi x·ξ}; x is a pair of scalars or arrays."""
    h = as_boundary(h)
    x1, x2 = x
    values = (np.power(h.h1, x1) * np.power(h.h2, x2)) * _phase(x1, x2, xi[0], xi[1])
    return complex(values) if np.ndim(values) == 0 else values


def eval_v(h: BoundaryLike, xi: FreqLike, x) -> Union[complex, np.ndarray]:
    """v_ξ(x) = h₁^{−x₁} h₂^{−x₂} e^{2πi x·ξ}."""
    h = as_boundary(h)
    x1, x2 = x
    values = (np.power(h.h1, np.negative(x1)) * np.power(h.h2, np.negative(x2))) * _phase(x1, x2, xi[0], xi[1])
    return complex(values) if np.ndim(values) == 0 else values


def eval_u_1d(hj: float, xij: int, xj) -> np.ndarray:
    """1-D factor u_{ξ_j}(x_j) = h_j^{x_j} e^{2πi x_j ξ_j}."""
    xj = np.asarray(xj, dtype=float)
    return np.power(hj, xj) * np.exp(1j * TWO_PI * np.mod(xj * xij, 1.0))


def eval_v_1d(hj: float, xij: int, xj) -> np.ndarray:
    xj = np.asarray(xj, dtype=float)
    return np.power(hj, -xj) * np.exp(1j * TWO_PI * np.mod(xj * xij, 1.0))


def frequency_range(K: int) -> np.ndarray:
    """Integers −K..K in SpectralField order."""
    return np.arange(-K, K + 1)


def frequency_lattice(K: int) -> Tuple[np.ndarray, np.ndarray]:
    """ξ₁, ξ₂ index arrays of shape (2K+1, 2K+1), 'ij' indexing."""
    r = frequency_range(K)
    return np.meshgrid(r, r, indexing="ij")


def gram_1d(hj: float, m) -> np.ndarray:
    """∫₀¹ h_j^{2x} e^{2πimx} dx, the Gram entry (u_ξ, u_η) with m = ξ_j − η_j."""
    m = np.asarray(m, dtype=float)
    lj = math.log(hj)
    if lj == 0.0:
        return np.where(m == 0, 1.0 + 0j, 0j)
    return math.expm1(2.0 * lj) / (2.0 * lj + 1j * TWO_PI * m)


def gram_matrix_1d(hj: float, K: int) -> np.ndarray:
    """(2K+1)×(2K+1) Gram matrix of the 1-D factors u_{ξ_j}, |ξ_j| ≤ K."""
    r = frequency_range(K)
    return gram_1d(hj, r[:, None] - r[None, :])


def l2_norm_exact(coeffs: np.ndarray, h: BoundaryLike, star: bool = False) -> float:
    """True L² norm of Σ c(ξ) u_ξ (or Σ c(ξ) v_ξ when star) for a (2K+1)² array."""
    h = as_boundary(h)
    K = (coeffs.shape[0] - 1) // 2
    h1, h2 = (1.0 / h.h1, 1.0 / h.h2) if star else (h.h1, h.h2)
    g1 = gram_matrix_1d(h1, K)
    g2 = gram_matrix_1d(h2, K)
    # ‖f‖² = Σ c[a,b] conj(c[c,d]) G1[a,c] G2[b,d]
    value = np.einsum("ab,ac,bd,cd->", coeffs, g1, g2, np.conj(coeffs), optimize=True)
    return float(math.sqrt(max(value.real, 0.0)))
