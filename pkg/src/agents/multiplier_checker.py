"""Checks of the multiplier calculus: symbol consistency, grid action, adjoint duality."""
from typing import List, Tuple

import numpy as np

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import Basis, CheckerType, ExperimentConfig, OperatorSpec
from src.tools.multiplier_calculus import (
    adjoint_symbol,
    apply_operator,
    diff_symbol,
    formal_adjoint,
    lstar_symbol,
    parse_operator,
    symbol_constant_P,
)
from src.tools.spectral_transforms import GridSpec, SpectralField, spectral_derivative, synthesize

GRID_ACTION_TOL = 1e-9
DUALITY_TOL = 1e-10

DEFAULT_C = complex(0.5, 0.25)


def _c(config: ExperimentConfig) -> complex:
    return config.c if config.c is not None and config.c != 0 else DEFAULT_C


def _operator(config: ExperimentConfig) -> OperatorSpec:
    if config.operator:
        return parse_operator(config.operator)
    return OperatorSpec.first_order(_c(config))


def _random(config: ExperimentConfig, basis: Basis, offset: int) -> SpectralField:
    rng = np.random.default_rng(config.seed + offset)
    side = 2 * config.K + 1
    return SpectralField(config.K, rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side)), basis)


def _symbol_consistency(config: ExperimentConfig) -> Measurement:
    h = config.boundary
    c = _c(config)
    explicit = symbol_constant_P(c, h).on_lattice(config.K)
    generic = diff_symbol(OperatorSpec.first_order(c), h).on_lattice(config.K)
    return Measurement(float(np.max(np.abs(explicit - generic))), 0.0, detail=f"c={c}")


def _grid_action(config: ExperimentConfig) -> Measurement:
    """∂₁ + c∂₂ through the 2-D multiplier against 1-D spectral derivatives."""
    h = config.boundary
    c = _c(config)
    spec = GridSpec.square(config.grid_n)
    f = synthesize(_random(config, Basis.L, 2), h, spec)
    via_symbol = apply_operator(OperatorSpec.first_order(c), h, f)
    direct = spectral_derivative(f, h, 0).values + c * spectral_derivative(f, h, 1).values
    scale = float(np.max(np.abs(direct)))
    return Measurement(float(np.max(np.abs(via_symbol.values - direct))) / scale, GRID_ACTION_TOL)


def _adjoint_symbols(config: ExperimentConfig) -> Measurement:
    """conj σ_P = τ_{P*} on the lattice."""
    h = config.boundary
    op = _operator(config)
    left = adjoint_symbol(diff_symbol(op, h)).on_lattice(config.K)
    right = lstar_symbol(formal_adjoint(op), h).on_lattice(config.K)
    scale = max(1.0, float(np.max(np.abs(right))))
    return Measurement(float(np.max(np.abs(left - right))) / scale, DUALITY_TOL)


def _adjoint_pairing(config: ExperimentConfig) -> Measurement:
    """(Pf, g) = (f, P*g) for f in the u-system and g in the v-system."""
    h = config.boundary
    op = _operator(config)
    K = config.K
    # products of two band-K fields stay alias free on the doubled-band grid
    spec = GridSpec.square(max(config.grid_n, 4 * K * max(1, op.order) + 4))
    f = synthesize(_random(config, Basis.L, 3), h, spec)
    g = synthesize(_random(config, Basis.LSTAR, 4), h, spec)
    pf = apply_operator(op, h, f, Basis.L)
    pstar_g = apply_operator(formal_adjoint(op), h, g, Basis.LSTAR)
    left = np.mean(pf.values * np.conj(g.values))
    right = np.mean(f.values * np.conj(pstar_g.values))
    scale = max(1.0, abs(left))
    return Measurement(abs(left - right) / scale, DUALITY_TOL)


class MultiplierChecker(BaseChecker):
    """Symbols of constant-coefficient operators and their adjoints."""

    checker_type = CheckerType.MULTIPLIERS

    def checks(self) -> List[Tuple[str, CheckFn]]:
        return [
            ("symbol_consistency", _symbol_consistency),
            ("grid_action", _grid_action),
            ("adjoint_symbols", _adjoint_symbols),
            ("adjoint_pairing", _adjoint_pairing),
        ]
