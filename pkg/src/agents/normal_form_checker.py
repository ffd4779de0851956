"""Checks of the normal-form conjugation Ψ_a for P = ∂₁ + a(x₁)∂₂."""
import math
from typing import List, Tuple

import numpy as np

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import CheckerType, Direction, ExperimentConfig
from src.tools.normal_form import (
    CoefficientFunction,
    compose_coefficients,
    intertwine_residual,
    psi_apply,
    resolution_check,
)
from src.tools.spectral_transforms import GridSpec, SpectralField, synthesize

INTERTWINE_TOL = 1e-6
ROUND_TRIP_TOL = 1e-9
GROUP_LAW_TOL = 1e-8

# band of the test field and its grid
TEST_BAND = 4
TEST_N = 128


def _coefficient(config: ExperimentConfig) -> CoefficientFunction:
    if config.a_series is not None:
        return CoefficientFunction.from_series(config.a_series)
    return CoefficientFunction.from_modes(1.0, {1: 0.5})


def _boundary(config: ExperimentConfig):
    if config.h1 == 1.0 and config.h2 == 1.0:
        return (2.0, math.e)
    return config.boundary


def _test_field(config: ExperimentConfig) -> SpectralField:
    rng = np.random.default_rng(config.seed)
    side = 2 * TEST_BAND + 1
    coeffs = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    return SpectralField(TEST_BAND, coeffs / np.linalg.norm(coeffs))


def _grid_rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(values) ** 2)))


def _intertwining(config: ExperimentConfig) -> Measurement:
    a, h = _coefficient(config), _boundary(config)
    w = synthesize(_test_field(config), h, GridSpec.square(TEST_N))
    value = intertwine_residual(a, h, w, band=TEST_BAND)
    return Measurement(value, INTERTWINE_TOL, detail="‖Ψ_a P w − P₀ Ψ_a w‖")


def _resolution(config: ExperimentConfig) -> Measurement:
    a, h = _coefficient(config), _boundary(config)
    report = resolution_check(a, h, _test_field(config), TEST_N, TEST_N)
    return Measurement(report.fine, None, passed=report.converged,
                       detail=f"{report.coarse:.3g} -> {report.fine:.3g} (floor {report.floor:.3g})")


def _round_trip(config: ExperimentConfig) -> Measurement:
    a, h = _coefficient(config), _boundary(config)
    w = synthesize(_test_field(config), h, GridSpec.square(TEST_N))
    forward = psi_apply(a, h, w, Direction.FORWARD, band=TEST_BAND)
    back = psi_apply(a, h, forward, Direction.INVERSE, check=False)
    return Measurement(_grid_rms(back.values - w.values) / _grid_rms(w.values), ROUND_TRIP_TOL)


def _group_law(config: ExperimentConfig) -> Measurement:
    a, h = _coefficient(config), _boundary(config)
    b = CoefficientFunction.from_modes(0.3, {2: 0.25j})
    w = synthesize(_test_field(config), h, GridSpec.square(TEST_N))
    composed = psi_apply(a, h, psi_apply(b, h, w, band=TEST_BAND), check=False)
    direct = psi_apply(compose_coefficients(a, b), h, w, band=TEST_BAND)
    return Measurement(_grid_rms(composed.values - direct.values) / _grid_rms(w.values), GROUP_LAW_TOL)


class NormalFormChecker(BaseChecker):
    """Intertwining, invertibility and composition of Ψ_a."""

    checker_type = CheckerType.NORMAL_FORM

    def checks(self) -> List[Tuple[str, CheckFn]]:
        return [
            ("intertwining", _intertwining),
            ("resolution", _resolution),
            ("psi_round_trip", _round_trip),
            ("psi_group_law", _group_law),
        ]
