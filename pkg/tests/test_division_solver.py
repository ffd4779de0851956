import numpy as np
import pytest

from src.errors import GrowthGuardError, InadmissibleDatumError
from src.models import Basis, DecayClass, FreqIndex, SolveOptions
from src.tools.division_solver import admissibility, residual, solve, solve_with_report
from src.tools.eigenbasis import weights_2d
from src.tools.multiplier_calculus import Symbol, apply_multiplier, symbol_constant_P
from src.tools.spectral_transforms import SpectralField, decay_classify
from tests.conftest import E, random_spectral

REFERENCE = symbol_constant_P(-1.0, (E, E))


def _off_diagonal(field: SpectralField) -> SpectralField:
    xi1, xi2 = field.lattice()
    return field.with_coeffs(np.where(xi1 == xi2, 0.0, field.coeffs))


def test_manufactured_solutions(rng):
    for _ in range(10):
        w = _off_diagonal(random_spectral(rng, 8))
        f = apply_multiplier(REFERENCE, w)
        got = solve(REFERENCE, f)
        assert np.max(np.abs(got.coeffs - w.coeffs)) < 1e-8
        assert residual(REFERENCE, got, f) < 1e-10 * max(1.0, float(np.max(np.abs(f.coeffs))))


def test_solution_vanishes_on_zero_set(rng):
    f = apply_multiplier(REFERENCE, random_spectral(rng, 4))
    w = solve(REFERENCE, f)
    for k in range(-4, 5):
        assert w.at((k, k)) == 0


def test_inadmissible_datum_reports_witness():
    f = SpectralField.delta(8, (2, 2))
    f.coeffs[1 + 8, -1 + 8] = 1.0
    report = admissibility(f, REFERENCE)
    assert not report.admissible
    assert [v.xi for v in report.violations] == [FreqIndex(2, 2)]
    with pytest.raises(InadmissibleDatumError) as info:
        solve(REFERENCE, f)
    assert info.value.report.violations[0].xi == FreqIndex(2, 2)
    assert info.value.exit_code == 3


def test_zero_datum_gives_zero_solution():
    w = solve(REFERENCE, SpectralField.zeros(5))
    assert not np.any(w.coeffs)


def test_basis_mismatch_rejected(rng):
    with pytest.raises(ValueError):
        solve(REFERENCE, random_spectral(rng, 2, Basis.LSTAR))


def test_data_tolerance_admits_small_entries():
    f = SpectralField.delta(3, (1, 1), value=1e-14)
    assert admissibility(f, REFERENCE).admissible
    assert not admissibility(f, REFERENCE, SolveOptions(data_tol=0.0)).admissible


def test_report_contents(rng):
    w = _off_diagonal(random_spectral(rng, 6))
    f = apply_multiplier(REFERENCE, w)
    got, report = solve_with_report(REFERENCE, f)
    assert report.admissibility.admissible
    assert report.residual < 1e-10 * float(np.max(np.abs(f.coeffs)))
    assert report.decay is not None
    assert np.allclose(got.coeffs, w.coeffs)


def _growing_symbol(K_max: int = 8):
    """σ(ξ_k) = ⟨ξ_k⟩^{−k} at ξ_k = (2^k, 0), k ≤ K_max, and 1 elsewhere."""
    def sigma(xi1, xi2):
        xi1 = np.asarray(xi1)
        xi2 = np.asarray(xi2)
        out = np.ones(np.broadcast(xi1, xi2).shape, dtype=complex)
        weight = weights_2d((1.0, 1.0), xi1, xi2)
        for k in range(1, K_max + 1):
            out = np.where((xi1 == 2 ** k) & (xi2 == 0), weight ** (-k), out)
        return out
    return Symbol.user(sigma, label="growing")


def _bounded_datum(K: int) -> SpectralField:
    f = SpectralField.zeros(K)
    for k in range(1, 9):
        f.coeffs[2 ** k + K, K] = 1.0
    return f


def test_moderate_datum_with_unbounded_solution():
    K = 512
    s, f = _growing_symbol(), _bounded_datum(K)
    w = solve(s, f, SolveOptions(zero_tol=0.0))
    assert decay_classify(f, (1.0, 1.0)).decay_class == DecayClass.MODERATE
    report = decay_classify(w, (1.0, 1.0))
    assert report.decay_class == DecayClass.UNBOUNDED
    assert report.drift > 0.25


def test_growth_guard_names_smallest_violator():
    K = 256
    s, f = _growing_symbol(), _bounded_datum(K)
    with pytest.raises(GrowthGuardError) as info:
        solve(s, f, SolveOptions(zero_tol=0.0, growth_guard=3.5), h=(1.0, 1.0))
    assert info.value.witness == FreqIndex(16, 0)


def test_growth_guard_needs_boundary():
    s = _growing_symbol()
    with pytest.raises(ValueError):
        solve(s, _bounded_datum(256), SolveOptions(zero_tol=0.0, growth_guard=3.0))


def test_growth_guard_passes_for_tame_solution():
    f = apply_multiplier(REFERENCE, SpectralField.delta(4, (-4, -3)))
    got = solve(REFERENCE, f, SolveOptions(growth_guard=0.5), h=(E, E))
    assert got.at((-4, -3)) == pytest.approx(1.0)
