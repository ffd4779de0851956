"""Checks of the closed-form eigen-system: biorthogonality, eigen-relation, weight equivalence."""
import math
from typing import List, Tuple

import numpy as np

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import CheckerType, ExperimentConfig, OperatorSpec
from src.tools.eigenbasis import (
    TWO_PI,
    eigen_data,
    eigen_data_1d,
    eigenvalue_2d,
    eval_u,
    eval_v,
    frequency_lattice,
    weights_2d,
)
from src.tools.multiplier_calculus import apply_operator
from src.tools.spectral_transforms import GridField, GridSpec

BIORTHOGONALITY_TOL = 1e-10
EIGEN_RELATION_TOL = 1e-8
WEIGHT_TOL = 0.05

# largest |ξ_j| in the pairwise biorthogonality sweep
BIORTHOGONALITY_RADIUS = 4

WEIGHT_RADIUS = 2000


def _biorthogonality(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    n = config.grid_n
    radius = min(BIORTHOGONALITY_RADIUS, config.K, (n - 1) // 2)
    spec = GridSpec.square(n)
    x1, x2 = spec.nodes()
    xi1, xi2 = frequency_lattice(radius)
    modes = list(zip(xi1.ravel(), xi2.ravel()))
    U = np.array([eval_u(h, xi, (x1, x2)).ravel() for xi in modes])
    V = np.array([eval_v(h, xi, (x1, x2)).ravel() for xi in modes])
    gram = U @ V.conj().T / (n * n)
    error = float(np.max(np.abs(gram - np.eye(len(modes)))))
    return Measurement(error, BIORTHOGONALITY_TOL, detail=f"{len(modes) ** 2} pairs, |ξ_j| ≤ {radius}")


def _eigen_relation(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    spec = GridSpec.square(config.grid_n)
    laplacian = OperatorSpec.laplacian()
    worst = 0.0
    K = min(config.K, spec.max_trunc())
    for xi in ((0, 0), (1, -2), (K, K), (-K, 1)):
        u = GridField.from_function(spec, lambda a, b: eval_u(h, xi, (a, b)))
        lu = apply_operator(laplacian, h, u)
        lam = eigenvalue_2d(h, xi)
        scale = max(1.0, abs(lam)) * float(np.max(np.abs(u.values)))
        worst = max(worst, float(np.max(np.abs(lu.values - lam * u.values))) / scale)
    return Measurement(worst, EIGEN_RELATION_TOL, detail="L_h u_ξ = λ_ξ u_ξ on the grid")


def _weight_equivalence(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    R = WEIGHT_RADIUS
    xi1 = np.array([R, 0, R, -R])
    xi2 = np.array([0, R, R, R])
    ratio = weights_2d(h, xi1, xi2) / np.sqrt(1.0 + xi1 ** 2 + xi2 ** 2)
    error = float(np.max(np.abs(ratio / TWO_PI - 1.0)))
    return Measurement(error, WEIGHT_TOL, detail=f"⟨ξ⟩/√(1+|ξ|²) vs 2π at |ξ|∞ = {R}")


def _eigen_data_invariants(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    worst = 0.0
    for xi in zip(*(axis.ravel() for axis in frequency_lattice(min(config.K, 8)))):
        mode = eigen_data(h, xi)
        f1, f2 = eigen_data_1d(h.h1, int(xi[0])), eigen_data_1d(h.h2, int(xi[1]))
        if min(mode.weight, f1.weight, f2.weight) < 1.0:
            return Measurement(passed=False, detail=f"weight below 1 at ξ={tuple(int(v) for v in xi)}")
        worst = max(
            worst,
            abs(mode.weight ** 4 - (1 + abs(mode.eigenvalue) ** 2)) / mode.weight ** 4,
            abs(mode.eigenvalue + f1.eigenvalue ** 2 + f2.eigenvalue ** 2) / max(1.0, abs(mode.eigenvalue)),
        )
    return Measurement(worst, EIGEN_RELATION_TOL, detail="⟨ξ⟩⁴ = 1+|λ_ξ|² and λ_ξ = −(λ_ξ₁² + λ_ξ₂²)")


def _weight_positive(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    xi1, xi2 = frequency_lattice(64)
    ratio = weights_2d(h, xi1, xi2) / np.sqrt(1.0 + xi1 ** 2 + xi2 ** 2)
    low, high = float(ratio.min()), float(ratio.max())
    ok = low > 0 and math.isfinite(high)
    return Measurement(low, None, passed=ok, detail=f"ratio range [{low:.4g}, {high:.4g}] over |ξ_j| ≤ 64")


class EigenbasisChecker(BaseChecker):
    """Biorthogonality of {u_ξ}, {v_ξ} and the weight ⟨ξ⟩ against the Euclidean bracket."""

    checker_type = CheckerType.EIGENBASIS

    def checks(self) -> List[Tuple[str, CheckFn]]:
        return [
            ("biorthogonality", _biorthogonality),
            ("eigen_relation", _eigen_relation),
            ("weight_equivalence", _weight_equivalence),
            ("weight_bounds", _weight_positive),
            ("eigen_data", _eigen_data_invariants),
        ]
