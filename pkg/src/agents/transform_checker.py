"""Checks of the L_h / L_h* transforms: round trip, frame bounds, partial factorisation, derivative symbol."""
from typing import List, Tuple

import numpy as np

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import Axis, Basis, CheckerType, ExperimentConfig
from src.tools.eigenbasis import TWO_PI, eval_u
from src.tools.spectral_transforms import (
    GridField,
    GridSpec,
    SpectralField,
    analyze_1d,
    analyze_basis,
    frame_bounds,
    partial_analyze,
    spectral_derivative,
    synthesize,
)

ROUND_TRIP_TOL = 1e-9
FRAME_SLACK = 1e-9
FACTORISATION_TOL = 1e-12
DERIVATIVE_TOL = 1e-8

ROUND_TRIP_TRIALS = 5


def _random_field(rng: np.random.Generator, K: int, basis: Basis) -> SpectralField:
    side = 2 * K + 1
    return SpectralField(K, rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side)), basis)


def _round_trip(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    spec = GridSpec.square(config.grid_n)
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(ROUND_TRIP_TRIALS):
        for basis in (Basis.L, Basis.LSTAR):
            c = _random_field(rng, config.K, basis)
            back = analyze_basis(synthesize(c, h, spec), h, config.K, basis)
            worst = max(worst, float(np.max(np.abs(back.coeffs - c.coeffs))) / float(np.max(np.abs(c.coeffs))))
    return Measurement(worst, ROUND_TRIP_TOL, detail=f"{2 * ROUND_TRIP_TRIALS} fields, K={config.K}")


def _frame_bounds(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    bounds = frame_bounds(h, config.trials, GridSpec.square(config.grid_n), config.K, config.seed)
    excess = max(
        bounds.envelope[0] - bounds.lower,
        bounds.upper - bounds.envelope[1],
        bounds.envelope_star[0] - bounds.lower_star,
        bounds.upper_star - bounds.envelope_star[1],
        0.0,
    )
    return Measurement(excess, FRAME_SLACK,
                       detail=f"ratios [{bounds.lower:.6g}, {bounds.upper:.6g}] in {bounds.envelope}")


def _partial_factorisation(config: ExperimentConfig) -> Measurement:
    """ℱ₁ℱ₂f = f̂."""
    h = config.boundary
    spec = GridSpec.square(config.grid_n)
    rng = np.random.default_rng(config.seed + 1)
    c = _random_field(rng, config.K, Basis.L)
    f = synthesize(c, h, spec)
    partial = partial_analyze(f, h, Axis.X2, config.K)
    full = analyze_1d(partial.values, h.h1, config.K, 0)
    error = float(np.max(np.abs(full - c.coeffs))) / float(np.max(np.abs(c.coeffs)))
    return Measurement(error, FACTORISATION_TOL * max(1.0, config.K), detail="x2 then x1 against the 2-D transform")


def _derivative_symbol(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    spec = GridSpec.square(config.grid_n)
    K = min(config.K, spec.max_trunc())
    worst = 0.0
    for eta in ((0, 0), (K, -1), (-K, K)):
        u = GridField.from_function(spec, lambda a, b: eval_u(h, eta, (a, b)))
        for axis, lj in ((0, h.log_h1), (1, h.log_h2)):
            factor = lj + 1j * TWO_PI * eta[axis]
            d = spectral_derivative(u, h, axis)
            scale = max(1.0, abs(factor)) * float(np.max(np.abs(u.values)))
            worst = max(worst, float(np.max(np.abs(d.values - factor * u.values))) / scale)
    return Measurement(worst, DERIVATIVE_TOL, detail="∂_j u_η = (log h_j + 2πiη_j) u_η")


class TransformChecker(BaseChecker):
    """Exactness of the band-limited transforms and their frame constants."""

    checker_type = CheckerType.TRANSFORMS

    def checks(self) -> List[Tuple[str, CheckFn]]:
        return [
            ("round_trip", _round_trip),
            ("frame_bounds", _frame_bounds),
            ("partial_factorisation", _partial_factorisation),
            ("derivative_symbol", _derivative_symbol),
        ]
