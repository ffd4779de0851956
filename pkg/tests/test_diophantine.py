import math
from fractions import Fraction

import mpmath
import pytest

from src.tools.diophantine import (
    FLOAT_EPS,
    brute_force_exponents,
    continued_fraction,
    exact_value,
    exponent_at,
    liouville_constant,
    liouville_evidence,
    min_scaled_distance,
    tail_window_start,
)
from tests.conftest import GOLDEN


def test_continued_fraction_of_rational_terminates():
    cf = continued_fraction(Fraction(415, 93), 10)
    assert cf.terms == [4, 2, 6, 7]
    assert cf.terminated
    assert cf.convergents()[-1] == Fraction(415, 93)


def test_golden_convergents_are_fibonacci():
    cf = continued_fraction(GOLDEN, 15)
    assert cf.terms == [1] * 16
    assert cf.denominators[:8] == [1, 1, 2, 3, 5, 8, 13, 21]
    assert not cf.precision_exhausted


def test_float_precision_is_exhausted():
    cf = continued_fraction(math.sqrt(2.0), 60)
    assert cf.precision_exhausted
    assert cf.depth < 60
    assert cf.quotients[:15] == [2] * 15
    assert cf.denominators[-1] ** 2 <= 1.0 / FLOAT_EPS


def test_continued_fraction_of_mpf_goes_deeper():
    with mpmath.workdps(60):
        cf = continued_fraction(mpmath.sqrt(2), 60)
    assert cf.depth > 40
    assert set(cf.quotients) == {2}


def test_exact_value_kinds():
    assert exact_value(Fraction(1, 3)) == (Fraction(1, 3), 0.0)
    assert exact_value(7) == (Fraction(7), 0.0)
    assert exact_value("1/3") == (Fraction(1, 3), 0.0)
    value, eps = exact_value("3.14159")
    assert value == Fraction(314159, 100000)
    assert eps == pytest.approx(1e-5)
    assert exact_value(0.5) == (Fraction(1, 2), FLOAT_EPS)
    with pytest.raises(ValueError):
        exact_value(math.inf)
    with pytest.raises(ValueError):
        exact_value("pi")


def test_min_scaled_distance_golden_ratio():
    q_brute, brute = min_scaled_distance(GOLDEN, 10 ** 4, method="brute")
    q_conv, conv = min_scaled_distance(GOLDEN, 10 ** 4, method="convergents")
    assert q_brute == q_conv == 3
    assert brute == pytest.approx(conv, abs=1e-12)
    assert 0.40 <= brute <= 1 / math.sqrt(5)


def test_min_scaled_distance_unknown_method():
    with pytest.raises(ValueError):
        min_scaled_distance(GOLDEN, 10, method="guess")


def test_exponents_and_brute_force_oracle():
    qs, mus = brute_force_exponents(Fraction(1, 7), 20)
    assert list(qs) == list(range(2, 21))
    assert math.isinf(mus[5])  # q = 7
    assert exponent_at(Fraction(1, 3), 2) == pytest.approx(1 - math.log(Fraction(1, 3)) / math.log(2))


def test_records_sit_on_convergents():
    _, mus = brute_force_exponents(GOLDEN, 2000)
    report = liouville_evidence(GOLDEN, 2000)
    assert float(mus.max()) == pytest.approx(report.max_exponent, abs=1e-12)


def test_liouville_constant_has_evidence():
    report = liouville_evidence(liouville_constant(), 10 ** 6)
    assert not report.rational
    assert report.liouville_evidence
    assert report.tail_start == 100
    assert report.tail_max_exponent >= 3.5
    assert 100 in report.denominators and 10 ** 6 in report.denominators


def test_golden_ratio_has_no_evidence():
    report = liouville_evidence(GOLDEN, 10 ** 4)
    assert not report.rational
    assert not report.liouville_evidence
    assert report.tail_max_exponent < 2.5
    assert report.running_max == sorted(report.running_max)


@pytest.mark.parametrize("x", [0.5, 0.1, Fraction(355, 113), "0.25", 3])
def test_rationals_are_detected(x):
    report = liouville_evidence(x, 10 ** 4)
    assert report.rational
    assert not report.liouville_evidence


def test_float_liouville_constant_reads_as_rational():
    assert liouville_evidence(float(liouville_constant()), 10 ** 6).rational


def test_tail_window_start():
    assert tail_window_start(10 ** 6) == 100
    assert tail_window_start(8) == 2


def test_argument_validation():
    with pytest.raises(ValueError):
        continued_fraction(GOLDEN, 0)
    with pytest.raises(ValueError):
        liouville_evidence(GOLDEN, 1)
    with pytest.raises(ValueError):
        liouville_constant(0)
