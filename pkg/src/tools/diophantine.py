"""Continued fractions and finite-depth irrationality evidence.

All arithmetic is exact (fractions.Fraction). Inputs carry a precision: a
float is its exact binary value with ε = 2⁻⁵², an mpmath number has
ε = 10^−dps, and Fractions or "p/q" strings are exact. Convergents whose
q² exceeds 1/ε are not trusted.
"""
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

import mpmath
import numpy as np

from src.models import IrrationalityReport

logger = logging.getLogger(__name__)

RealLike = Union[int, float, str, Fraction, mpmath.mpf]

FLOAT_EPS = 2.0 ** -52


@dataclass
class ContinuedFraction:
    """x = [a0; a1, a2, ...] with convergents p_n/q_n, n = 0..depth."""
    a0: int
    quotients: List[int] = field(default_factory=list)
    numerators: List[int] = field(default_factory=list)
    denominators: List[int] = field(default_factory=list)
    terminated: bool = False
    precision_exhausted: bool = False

    @property
    def terms(self) -> List[int]:
        return [self.a0] + self.quotients

    @property
    def depth(self) -> int:
        return len(self.quotients)

    def convergents(self) -> List[Fraction]:
        return [Fraction(p, q) for p, q in zip(self.numerators, self.denominators)]


def exact_value(x: RealLike) -> Tuple[Fraction, float]:
    """(exact rational value of the input, its precision ε; 0 when exact)."""
    if isinstance(x, Fraction):
        return x, 0.0
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return Fraction(int(x)), 0.0
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"x must be finite, got {x}")
        return Fraction(float(x)), FLOAT_EPS
    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise ValueError(f"x must be finite, got {x}")
        man, exp = x.man_exp
        value = Fraction(int(man)) * (Fraction(2) ** int(exp))
        return value, float(mpmath.mpf(10) ** (-mpmath.mp.dps))
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            try:
                return Fraction(text), 0.0
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"cannot read rational {text!r}: {e}")
        try:
            dec = Decimal(text)
        except InvalidOperation:
            raise ValueError(f"cannot read real number {text!r}")
        if not dec.is_finite():
            raise ValueError(f"x must be finite, got {text!r}")
        # a decimal string is known to its last digit
        digits = max(0, -dec.as_tuple().exponent)
        return Fraction(dec), (10.0 ** -digits if digits else 0.0)
    raise TypeError(f"unsupported real type {type(x).__name__}")


def _expansion(value: Fraction, eps: float) -> Iterator[Tuple[int, int, int, bool]]:
    """Yield (a_n, p_n, q_n, trusted) until the expansion terminates."""
    p_prev, q_prev = 1, 0
    a = math.floor(value)
    p, q = a, 1
    rest = value - a
    yield a, p, q, True
    limit = math.inf if eps == 0 else 1.0 / eps
    while rest != 0:
        value = 1 / rest
        a = math.floor(value)
        rest = value - a
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        yield a, p, q, q * q <= limit


def continued_fraction(x: RealLike, depth: int) -> ContinuedFraction:
    """Standard expansion to `depth` partial quotients after a0."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    value, eps = exact_value(x)
    steps = _expansion(value, eps)
    a0, p0, q0, _ = next(steps)
    cf = ContinuedFraction(a0=a0, numerators=[p0], denominators=[q0])
    for a, p, q, trusted in steps:
        if not trusted:
            cf.precision_exhausted = True
            logger.debug(f"⚠️ precision exhausted at q={q}")
            return cf
        cf.quotients.append(a)
        cf.numerators.append(p)
        cf.denominators.append(q)
        if cf.depth >= depth:
            return cf
    cf.terminated = True
    return cf


def _log_fraction(value: Fraction) -> float:
    return math.log(value.numerator) - math.log(value.denominator)


def distance_to_integers(qx: Fraction) -> Fraction:
    return abs(qx - round(qx))


def exponent_at(value: Fraction, q: int) -> float:
    """μ(q) = 1 − log dist(qx, ℤ) / log q; +inf when qx is an integer."""
    d = distance_to_integers(q * value)
    if d == 0:
        return math.inf
    return 1.0 - _log_fraction(d) / math.log(q)


def brute_force_exponents(x: RealLike, Q: int) -> Tuple[np.ndarray, np.ndarray]:
    """μ(q) for every q in [2, Q]; the oracle for the convergent-based records."""
    value, _ = exact_value(x)
    qs = np.arange(2, Q + 1)
    return qs, np.array([exponent_at(value, int(q)) for q in qs])


def min_scaled_distance(x: RealLike, Q: int, q_min: int = 2, method: str = "convergents") -> Tuple[int, float]:
    """argmin and min of q·dist(qx, ℤ) over q_min ≤ q ≤ Q."""
    value, eps = exact_value(x)
    if method == "brute":
        candidates = range(q_min, Q + 1)
    elif method == "convergents":
        candidates = [q for _, _, q, trusted in _bounded(value, eps, Q) if trusted and q >= q_min]
        # q·d(q) > q_n·d(q_n) for q_n < q < q_{n+1}, but the window may start between convergents
        first = min(candidates, default=Q + 1)
        candidates = sorted(set(candidates) | set(range(q_min, min(first, Q + 1))))
    else:
        raise ValueError(f"unknown method {method!r}")
    best_q, best = 0, math.inf
    for q in candidates:
        scaled = q * distance_to_integers(q * value)
        if scaled < best:
            best_q, best = q, scaled
    return best_q, float(best)


def _bounded(value: Fraction, eps: float, Q: int) -> Iterator[Tuple[int, int, int, bool]]:
    for step in _expansion(value, eps):
        if step[2] > Q:
            return
        yield step


def liouville_constant(terms: int = 6) -> Fraction:
    """Σ_{k=1}^{terms} 10^{−k!} as an exact rational."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return sum((Fraction(1, 10 ** math.factorial(k)) for k in range(1, terms + 1)), Fraction(0))


def tail_window_start(qmax: int) -> int:
    """Exponents at small q are inflated by the log q normalisation; records count from here."""
    return max(2, int(math.ceil(qmax ** (1.0 / 3.0))))


def liouville_evidence(x: RealLike, qmax: int, threshold: float = 3.5,
                       tail_start: Optional[int] = None) -> IrrationalityReport:
    """Record exponents μ(q) over q ≤ qmax from the convergents.

    Between consecutive convergents q_n < q < q_{n+1}, dist(qx) ≥ dist(q_n x)
    and log q > log q_n, so only convergent denominators (and the q below
    the first nontrivial convergent) can set a record.
    """
    if qmax < 2:
        raise ValueError("qmax must be >= 2")
    value, eps = exact_value(x)
    start = tail_window_start(qmax) if tail_start is None else max(2, tail_start)

    denominators: List[int] = []
    exhausted = False
    rational = False
    last_q = 1
    resolution = 4 * eps * max(1, abs(value))
    for _, p, q, trusted in _expansion(value, eps):
        if q > qmax:
            break
        if not trusted:
            exhausted = True
            break
        if q >= 2 and (not denominators or q > denominators[-1]):
            denominators.append(q)
        last_q = q
        if eps and abs(value - Fraction(p, q)) <= resolution:
            # p/q agrees with x to input precision; later quotients are noise
            rational = True
            break
    else:
        rational = True

    first = denominators[0] if denominators else qmax + 1
    sweep = list(range(2, min(first, qmax + 1)))
    if exhausted:
        # untrusted expansion: restrict the sweep to trustworthy q too
        sweep = [q for q in sweep if eps == 0 or q * q <= 1.0 / eps]
    candidates = sorted(set(sweep) | set(denominators))

    exponents = [exponent_at(value, q) for q in candidates]
    finite = [(q, e) for q, e in zip(candidates, exponents) if math.isfinite(e)]
    qs = [q for q, _ in finite]
    mus = [e for _, e in finite]
    running, best = [], -math.inf
    for e in mus:
        best = max(best, e)
        running.append(best)
    tail = [e for q, e in finite if q >= start]
    tail_max = max(tail, default=0.0)
    evidence = (not rational) and tail_max >= threshold

    if exhausted:
        logger.warning(f"⚠️ precision exhausted before q={qmax} (last trusted q={last_q})")
    logger.debug(f"🔍 {len(qs)} record candidates up to q={qmax}, tail max μ={tail_max:.4g}")
    return IrrationalityReport(
        value=_describe(x),
        rational=rational,
        denominators=qs,
        exponents=mus,
        running_max=running,
        max_exponent=max(mus, default=0.0),
        tail_start=start,
        tail_max_exponent=tail_max,
        threshold=threshold,
        liouville_evidence=evidence,
        depth=qmax,
        precision_exhausted=exhausted,
    )


def _describe(x: RealLike) -> str:
    if isinstance(x, Fraction):
        if x.denominator.bit_length() > 64:
            return f"fraction(denominator~10^{len(str(x.denominator)) - 1})"
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)
