import math

import mpmath
import numpy as np
import pytest

from src.models import BoundaryParams
from src.tools.eigenbasis import (
    TWO_PI,
    as_boundary,
    eigen_data,
    eigen_data_1d,
    eigenvalue_1d,
    eigenvalue_2d,
    eigenvalues_2d,
    eval_u,
    eval_u_1d,
    eval_v,
    eval_v_1d,
    frequency_lattice,
    frequency_range,
    gram_1d,
    l2_norm_exact,
    weight_1d,
    weight_2d,
    weight_general,
    weights_1d,
    weights_2d,
)


def test_eigenvalue_closed_form():
    h = (2.0, 3.0)
    expected = (math.log(2.0) + 2j * math.pi) ** 2 + (math.log(3.0) - 2j * math.pi) ** 2
    assert eigenvalue_2d(h, (1, -1)) == pytest.approx(expected, rel=1e-14)


def test_eigenvalue_1d_and_weight():
    lam = eigenvalue_1d(math.e, 3)
    assert lam == pytest.approx(-1j + 6 * math.pi)
    assert weight_1d(math.e, 3) == pytest.approx(math.sqrt(1 + abs(lam) ** 2))


def test_eigen_data_records():
    h = (math.e, math.e ** 2)
    mode = eigen_data(h, (1, 2))
    assert mode.eigenvalue == pytest.approx(5 - 20 * math.pi ** 2 + 20j * math.pi, rel=1e-13)
    assert mode.weight >= 1.0
    assert mode.weight ** 4 == pytest.approx(1 + abs(mode.eigenvalue) ** 2, rel=1e-13)
    f1, f2 = eigen_data_1d(h[0], 1), eigen_data_1d(h[1], 2)
    assert f1.weight ** 2 == pytest.approx(1 + abs(f1.eigenvalue) ** 2)
    assert -(f1.eigenvalue ** 2 + f2.eigenvalue ** 2) == pytest.approx(mode.eigenvalue, rel=1e-13)
    assert eigen_data((1.0, 1.0), (0, 0)).weight == 1.0


def test_weight_general_matches_model_order():
    xi1, xi2 = frequency_lattice(3)
    lam = eigenvalues_2d((0.5, 2.0), xi1, xi2)
    np.testing.assert_allclose(weight_general(lam, 2), weights_2d((0.5, 2.0), xi1, xi2))
    assert weight_2d((1.0, 1.0), (0, 0)) == pytest.approx(1.0)


def test_boundary_rejects_nonpositive():
    with pytest.raises(ValueError):
        as_boundary((0.0, 1.0))
    with pytest.raises(ValueError):
        BoundaryParams(h1=1.0, h2=-2.0)


def test_boundary_condition_of_eigenfunctions():
    h = (0.7, 2.5)
    x2 = np.linspace(0, 1, 7)
    for xi in [(0, 0), (3, -2), (-5, 4)]:
        left = eval_u(h, xi, (np.zeros_like(x2), x2))
        right = eval_u(h, xi, (np.ones_like(x2), x2))
        np.testing.assert_allclose(right, 0.7 * left, rtol=1e-13)
        left_v = eval_v(h, xi, (np.zeros_like(x2), x2))
        right_v = eval_v(h, xi, (np.ones_like(x2), x2))
        np.testing.assert_allclose(right_v, left_v / 0.7, rtol=1e-13)


def test_biorthogonality_quadrature():
    h1, h2 = 0.5, 3.0
    n, K = 256, 8
    x = np.arange(n) / n
    modes = frequency_range(K)
    grams = []
    for hj in (h1, h2):
        U = np.array([eval_u_1d(hj, m, x) for m in modes])
        V = np.array([eval_v_1d(hj, m, x) for m in modes])
        grams.append(U @ V.conj().T / n)
    # (u_ξ, v_η) factorises over the two variables
    full = np.kron(grams[0], grams[1])
    assert full.shape == (289, 289)
    assert np.max(np.abs(full - np.eye(289))) < 1e-10


def test_weight_equivalence_bounds():
    h = (2.0, 3.0)
    xi1, xi2 = frequency_lattice(60)
    ratio = weights_2d(h, xi1, xi2) / np.sqrt(1.0 + xi1 ** 2 + xi2 ** 2)
    assert ratio.min() >= 0.9
    assert ratio.max() <= TWO_PI + 0.5

    r = np.arange(-2000, 2001, 50)
    ring1 = np.concatenate([np.full(r.size, 2000), r])
    ring2 = np.concatenate([r, np.full(r.size, -2000)])
    ring_ratio = weights_2d(h, ring1, ring2) / np.sqrt(1.0 + ring1 ** 2 + ring2 ** 2)
    assert ring_ratio.min() >= 0.9
    assert ring_ratio.max() <= TWO_PI + 0.5
    assert np.all(np.abs(ring_ratio / TWO_PI - 1.0) < 0.05)


def test_weight_against_factor_weights_on_axes():
    h = (2.0, 3.0)
    for xi in [(2000, 0), (0, 2000), (-2000, 0)]:
        total = weight_2d(h, xi)
        split = weight_1d(h[0], xi[0]) + weight_1d(h[1], xi[1])
        assert abs(total / split - 1.0) < 0.1


def test_weight_against_factor_weights_off_axis():
    h = (2.0, 3.0)
    r = np.arange(-2000, 2001, 97)
    xi1 = np.full(r.size, 2000)
    ratio = weights_2d(h, xi1, r) / (weights_1d(h[0], xi1) + weights_1d(h[1], r))
    assert np.all(ratio > 1 / math.sqrt(2) - 0.05)
    assert np.all(ratio < 1.05)


@pytest.mark.parametrize("hj", [0.4, 1.0, math.e, 5.0])
@pytest.mark.parametrize("m", [0, 1, -3])
def test_gram_entries_against_quadrature(hj, m):
    expected = mpmath.quad(lambda x: mpmath.power(hj, 2 * x) * mpmath.expjpi(2 * m * x), [0, 1])
    assert complex(gram_1d(hj, m)) == pytest.approx(complex(expected), abs=1e-12)


def test_l2_norm_exact_torus_is_coefficient_norm(rng):
    coeffs = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert l2_norm_exact(coeffs, (1.0, 1.0)) == pytest.approx(np.linalg.norm(coeffs))


def test_l2_norm_exact_single_mode():
    coeffs = np.zeros((3, 3), dtype=complex)
    coeffs[1, 1] = 1.0
    h1, h2 = 2.0, 0.5
    # ‖h^x‖² = ∫h₁^{2x₁} · ∫h₂^{2x₂}
    expected = math.sqrt((h1 ** 2 - 1) / (2 * math.log(h1)) * (h2 ** 2 - 1) / (2 * math.log(h2)))
    assert l2_norm_exact(coeffs, (h1, h2)) == pytest.approx(expected, rel=1e-13)
    star = math.sqrt((h1 ** -2 - 1) / (-2 * math.log(h1)) * (h2 ** -2 - 1) / (-2 * math.log(h2)))
    assert l2_norm_exact(coeffs, (h1, h2), star=True) == pytest.approx(star, rel=1e-13)
