import math

import numpy as np
import pytest

from src.errors import AliasingError
from src.models import Axis, Basis, DecayClass
from src.tools.eigenbasis import eigenvalues_2d, eval_u, frequency_range, l2_norm_exact
from src.tools.spectral_transforms import (
    GridField,
    GridSpec,
    SpectralField,
    analyze,
    analyze_1d,
    analyze_basis,
    analyze_star,
    decay_classify,
    frame_bounds,
    partial_analyze,
    partial_synthesize,
    pk_seminorm,
    sobolev_seminorm,
    spectral_derivative,
    synthesize,
)
from tests.conftest import E, random_spectral

BOUNDARIES = [(1.0, 1.0), (math.e, 2.0), (0.4, 1.7)]


@pytest.mark.parametrize("h", BOUNDARIES)
@pytest.mark.parametrize("basis", [Basis.L, Basis.LSTAR])
def test_round_trip(rng, h, basis):
    K, spec = 16, GridSpec.square(72)
    worst = 0.0
    for _ in range(20):
        c = random_spectral(rng, K, basis)
        back = analyze_basis(synthesize(c, h, spec), h, K, basis)
        worst = max(worst, float(np.max(np.abs(back.coeffs - c.coeffs))))
    assert worst < 1e-9


def test_analyze_star_matches_basis_dispatch(rng):
    h = (0.5, 3.0)
    c = random_spectral(rng, 4, Basis.LSTAR)
    f = synthesize(c, h, GridSpec.square(20))
    np.testing.assert_allclose(analyze_star(f, h, 4).coeffs, c.coeffs, atol=1e-12)
    assert analyze_star(f, h, 4).basis == Basis.LSTAR


def test_single_mode_synthesis_matches_eigenfunction():
    h = (2.0, 0.5)
    spec = GridSpec.square(16)
    f = synthesize(SpectralField.delta(5, (2, -3)), h, spec)
    np.testing.assert_allclose(f.values, eval_u(h, (2, -3), spec.nodes()), rtol=1e-12, atol=1e-12)


def test_aliasing_rejected():
    K = 16
    f = GridField.zeros(GridSpec.square(2 * K))
    with pytest.raises(AliasingError):
        analyze(f, (1.0, 1.0), K)
    with pytest.raises(AliasingError):
        analyze_1d(f.values, 1.0, K, axis=0)


def test_grid_shape_mismatch():
    with pytest.raises(ValueError):
        GridField(GridSpec(8, 8), np.zeros((8, 9)))
    with pytest.raises(ValueError):
        GridSpec(2, 8)


@pytest.mark.parametrize("h", BOUNDARIES)
def test_derivative_symbol_on_eigenfunctions(h):
    spec = GridSpec.square(36)
    nodes = spec.nodes()
    for xi in [(0, 0), (3, -8), (-8, 8), (5, 1)]:
        u = GridField(spec, eval_u(h, xi, nodes))
        for axis in (0, 1):
            expected = (math.log(h[axis]) + 2j * math.pi * xi[axis]) * u.values
            got = spectral_derivative(u, h, axis).values
            assert np.max(np.abs(got - expected)) < 1e-8


def test_second_derivative_order():
    h = (E, 1.5)
    spec = GridSpec.square(24)
    u = GridField(spec, eval_u(h, (2, -1), spec.nodes()))
    lam1 = (1.0 + 4j * math.pi) ** 2
    np.testing.assert_allclose(spectral_derivative(u, h, 0, order=2).values, lam1 * u.values, atol=1e-9)


def test_partial_transform_round_trip_and_factorisation(rng):
    h = (0.7, 2.2)
    K, spec = 6, GridSpec(28, 30)
    c = random_spectral(rng, K)
    f = synthesize(c, h, spec)
    for axis in (Axis.X1, Axis.X2):
        p = partial_analyze(f, h, axis, K)
        np.testing.assert_allclose(partial_synthesize(p, h).values, f.values, atol=1e-10)
    p2 = partial_analyze(f, h, Axis.X2, K)
    full = analyze_1d(p2.values, h[0], K, axis=0)
    assert np.max(np.abs(full - c.coeffs)) < 1e-12 * max(1, K) + 1e-12


def test_frame_bounds_inside_envelope():
    bounds = frame_bounds((E ** 2, 1.0), trials=100, grid=GridSpec.square(20), K=4, seed=7)
    assert bounds.envelope == pytest.approx([E ** -2, 1.0])
    assert bounds.lower >= E ** -2 - 1e-9
    assert bounds.upper <= 1.0 + 1e-9
    assert bounds.lower_star >= 1.0 - 1e-9
    assert bounds.upper_star <= E ** 2 + 1e-9
    assert bounds.trials == 100


def test_frame_bounds_torus_is_isometric():
    bounds = frame_bounds((1.0, 1.0), trials=10, grid=GridSpec.square(20), K=4, seed=1)
    for value in (bounds.lower, bounds.upper, bounds.lower_star, bounds.upper_star):
        assert value == pytest.approx(1.0, abs=1e-9)


def test_frame_bounds_rejects_zero_trials():
    with pytest.raises(ValueError):
        frame_bounds((1.0, 1.0), trials=0, grid=GridSpec.square(8), K=2)


def test_l2_norm_exact_matches_fine_quadrature(rng):
    h = (2.0, 0.5)
    c = random_spectral(rng, 2)
    fine = synthesize(c, h, GridSpec.square(2048))
    # midpoint error of the nonperiodic |f|² is O(1/n)
    assert fine.grid_norm() == pytest.approx(l2_norm_exact(c.coeffs, h), rel=5e-3)


def test_sobolev_and_pk_seminorms(rng):
    c = random_spectral(rng, 3)
    h = (1.3, 0.8)
    assert sobolev_seminorm(c, h, 0) == pytest.approx(c.l2())
    assert sobolev_seminorm(c, h, 2) >= sobolev_seminorm(c, h, 1) >= sobolev_seminorm(c, h, 0)
    coeffs = c.coeffs[:, 3]
    assert pk_seminorm(coeffs, 1.3, 0) == pytest.approx(np.linalg.norm(coeffs))
    with pytest.raises(ValueError):
        sobolev_seminorm(c, h, -1)


def test_sobolev_seminorm_is_max_of_eigenvalue_weighted_norms(rng):
    c = random_spectral(rng, 3)
    h = (2.0, 0.5)
    xi1, xi2 = c.lattice()
    modulus = np.abs(eigenvalues_2d(h, xi1, xi2))
    norms = [np.sqrt(np.sum(modulus ** (2 * j) * np.abs(c.coeffs) ** 2)) for j in range(3)]
    assert sobolev_seminorm(c, h, 2) == pytest.approx(max(norms), rel=1e-14)


def _constant_one_error(n: int, basis: Basis):
    K = 4
    h = (E, 1.0)
    f = GridField(GridSpec.square(n), np.ones((n, n), dtype=complex))
    c = analyze(f, h, K) if basis == Basis.L else analyze_star(f, h, K)
    xi1 = frequency_range(K)
    if basis == Basis.L:
        expected = (1 - math.exp(-1)) / (1 + 2j * math.pi * xi1)
    else:
        expected = (math.e - 1) / (1 - 2j * math.pi * xi1)
    off_axis = np.delete(c.coeffs, K, axis=1)
    return float(np.max(np.abs(c.coeffs[:, K] - expected))), float(np.max(np.abs(off_axis)))


@pytest.mark.parametrize("basis", [Basis.L, Basis.LSTAR])
def test_constant_field_approaches_closed_form(basis):
    # f = 1 breaks the boundary condition, so the DFT converges at first order
    coarse, coarse_off = _constant_one_error(64, basis)
    fine, fine_off = _constant_one_error(1024, basis)
    assert coarse_off == 0.0
    assert fine_off == 0.0
    assert 8.0 < coarse / fine < 32.0
    assert fine < 1.5e-3


def test_decay_moderate_recovers_exponent():
    weights = 2.0 ** np.arange(1, 11)
    report = decay_classify((weights, weights ** 2))
    assert report.decay_class == DecayClass.MODERATE
    assert report.fitted_exponent == pytest.approx(2.0, abs=1e-9)
    assert abs(report.drift) < 1e-9


def test_decay_unbounded_when_exponent_drifts():
    k = np.arange(1, 11)
    weights = 2.0 ** k
    report = decay_classify((weights, weights ** k))
    assert report.decay_class == DecayClass.UNBOUNDED
    assert report.drift == pytest.approx(1.0, abs=1e-9)


def test_decay_rapid_cases():
    weights = 2.0 ** np.arange(1, 11)
    assert decay_classify((weights, weights ** -25.0)).decay_class == DecayClass.RAPID
    assert decay_classify((weights, np.zeros(10))).decay_class == DecayClass.RAPID
    delta = SpectralField.delta(32, (0, 0))
    assert decay_classify(delta, (1.0, 1.0)).decay_class == DecayClass.RAPID


def test_decay_indeterminate_with_few_shells():
    report = decay_classify(([2.0, 4.0], [1.0, 1.0]))
    assert report.decay_class == DecayClass.INDETERMINATE


def test_decay_needs_boundary_for_spectral_field():
    with pytest.raises(ValueError):
        decay_classify(SpectralField.zeros(2))


def test_decay_of_smooth_field_is_rapid():
    h = (2.0, E)
    K, spec = 24, GridSpec.square(64)
    c = SpectralField.zeros(K)
    for xi in [(0, 0), (1, -2), (3, 2)]:
        c.coeffs[xi[0] + K, xi[1] + K] = 1.0 + 0.5j
    back = analyze(synthesize(c, h, spec), h, K)
    assert decay_classify(back, h).decay_class == DecayClass.RAPID


def test_frequency_range_order():
    assert list(frequency_range(2)) == [-2, -1, 0, 1, 2]
