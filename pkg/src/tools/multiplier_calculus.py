"""Symbols of constant-coefficient operators in the L_h calculus.

∂_j acts on u_ξ by the factor (log h_j + 2πiξ_j) and on v_ξ by
(−log h_j + 2πiξ_j), so every constant-coefficient operator is a Fourier
multiplier on either system. Symbols are evaluators rather than tables so
that diagnostics can scan very large lattices.
"""
import json
import logging
import math
import re
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from src.errors import ParseError
from src.models import Basis, BoundaryParams, FreqIndex, OperatorSpec, Term
from src.tools.eigenbasis import TWO_PI, BoundaryLike, as_boundary
from src.tools.spectral_transforms import GridField, SpectralField, analyze_basis, synthesize

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AffineForm:
    """σ(ξ) = offset + slope1·ξ₁ + slope2·ξ₂, evaluated on split real/imaginary parts."""
    offset: complex
    slope1: complex
    slope2: complex

    def evaluate(self, xi1, xi2) -> np.ndarray:
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        real = self.offset.real + self.slope1.real * xi1 + self.slope2.real * xi2
        imag = self.offset.imag + self.slope1.imag * xi1 + self.slope2.imag * xi2
        return real + 1j * imag

    def conjugate(self) -> "AffineForm":
        return AffineForm(self.offset.conjugate(), self.slope1.conjugate(), self.slope2.conjugate())

    def scaled(self, k: complex) -> "AffineForm":
        return AffineForm(k * self.offset, k * self.slope1, k * self.slope2)


@dataclass(frozen=True)
class ZeroSetCache:
    """Exact zero set of a symbol within |ξ_j| ≤ radius at tolerance tol."""
    radius: int
    tol: float
    points: Tuple[FreqIndex, ...]


@dataclass(frozen=True)
class Symbol:
    """Evaluator ξ ↦ σ(ξ) with optional closed-form metadata."""
    evaluator: Evaluator
    label: str = "user"
    basis: Basis = Basis.L
    affine: Optional[AffineForm] = None
    operator: Optional[OperatorSpec] = None
    boundary: Optional[BoundaryParams] = None
    zero_cache: Optional[ZeroSetCache] = field(default=None, compare=False)

    def __call__(self, xi1, xi2):
        values = self.evaluator(np.asarray(xi1), np.asarray(xi2))
        return complex(values) if np.ndim(values) == 0 else np.asarray(values, dtype=complex)

    def at(self, xi: Tuple[int, int]) -> complex:
        return complex(self(xi[0], xi[1]))

    def on_lattice(self, K: int) -> np.ndarray:
        """σ on the SpectralField lattice |ξ_j| ≤ K."""
        r = np.arange(-K, K + 1)
        xi1, xi2 = np.meshgrid(r, r, indexing="ij")
        return np.broadcast_to(self(xi1, xi2), xi1.shape).astype(complex)

    @property
    def is_affine(self) -> bool:
        return self.affine is not None

    @classmethod
    def user(cls, fn: Evaluator, label: str = "user", basis: Basis = Basis.L) -> "Symbol":
        """Wrap an arbitrary vectorised evaluator."""
        return cls(evaluator=fn, label=label, basis=Basis(basis))

    @classmethod
    def from_affine(cls, form: AffineForm, label: str, basis: Basis = Basis.L, **meta) -> "Symbol":
        return cls(evaluator=form.evaluate, label=label, basis=basis, affine=form, **meta)

    def scaled(self, k: complex) -> "Symbol":
        """k·σ; the zero set is unchanged."""
        k = complex(k)
        if k == 0:
            raise ValueError("scale factor must be nonzero")
        if self.affine is not None:
            form = self.affine.scaled(k)
            return replace(self, evaluator=form.evaluate, affine=form, label=f"{k}*{self.label}")
        base = self.evaluator
        return replace(self, evaluator=lambda xi1, xi2: k * base(xi1, xi2), label=f"{k}*{self.label}")

    def with_zero_cache(self, radius: int, tol: float = 0.0) -> "Symbol":
        """Eagerly compute and attach the zero set within |ξ_j| ≤ radius."""
        values = np.abs(self.on_lattice(radius))
        idx = np.argwhere(values <= tol)
        points = tuple(FreqIndex(int(i) - radius, int(j) - radius) for i, j in idx)
        return replace(self, zero_cache=ZeroSetCache(radius, tol, points))


def _ipow(z: np.ndarray, k: int) -> np.ndarray:
    out = np.ones_like(z)
    for _ in range(k):
        out = out * z
    return out


def _polynomial_evaluator(terms: List[Term], l1: float, l2: float) -> Evaluator:
    coeffs = [(t.coefficient, t.alpha1, t.alpha2) for t in terms if t.coefficient != 0]

    def evaluate(xi1, xi2):
        z1 = l1 + 1j * TWO_PI * np.asarray(xi1, dtype=float)
        z2 = l2 + 1j * TWO_PI * np.asarray(xi2, dtype=float)
        total = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for coeff, a1, a2 in coeffs:
            total = total + coeff * (_ipow(z1, a1) * _ipow(z2, a2))
        return total

    return evaluate


def _first_order_parts(op: OperatorSpec) -> Optional[Tuple[complex, complex, complex]]:
    """(c00, c10, c01) when op has order ≤ 1."""
    if op.order > 1:
        return None
    c00 = c10 = c01 = 0j
    for term in op.terms:
        if term.order == 0:
            c00 += term.coefficient
        elif term.alpha1 == 1:
            c10 += term.coefficient
        else:
            c01 += term.coefficient
    return c00, c10, c01


def _affine_from_parts(c00: complex, c10: complex, c01: complex, l1: float, l2: float) -> AffineForm:
    offset = complex(c00.real + c10.real * l1 + c01.real * l2, c00.imag + c10.imag * l1 + c01.imag * l2)
    # 2πi·c = −2π Im c + i 2π Re c
    slope1 = complex(-TWO_PI * c10.imag, TWO_PI * c10.real)
    slope2 = complex(-TWO_PI * c01.imag, TWO_PI * c01.real)
    return AffineForm(offset, slope1, slope2)


def _symbol_for(op: OperatorSpec, h: BoundaryParams, sign: float, basis: Basis, label: str) -> Symbol:
    l1, l2 = sign * h.log_h1, sign * h.log_h2
    parts = _first_order_parts(op)
    if parts is not None:
        form = _affine_from_parts(*parts, l1, l2)
        return Symbol.from_affine(form, label, basis, operator=op, boundary=h)
    return Symbol(evaluator=_polynomial_evaluator(op.terms, l1, l2), label=label, basis=basis,
                  operator=op, boundary=h)


def diff_symbol(op: OperatorSpec, h: BoundaryLike) -> Symbol:
    """σ(ξ) = Σ coeff·Π_j (log h_j + 2πiξ_j)^{α_j}."""
    return _symbol_for(op, as_boundary(h), 1.0, Basis.L, "diff")


def lstar_symbol(op: OperatorSpec, h: BoundaryLike) -> Symbol:
    """τ(ξ) = Σ coeff·Π_j (−log h_j + 2πiξ_j)^{α_j}: op acting on the v_ξ system."""
    return _symbol_for(op, as_boundary(h), -1.0, Basis.LSTAR, "lstar")


def formal_adjoint(op: OperatorSpec) -> OperatorSpec:
    """P* = Σ conj(coeff)(−1)^{|α|} ∂^α."""
    terms = []
    for t in op.terms:
        c = t.coefficient.conjugate() * (-1) ** t.order
        terms.append(Term(alpha1=t.alpha1, alpha2=t.alpha2, re=c.real, im=c.imag))
    return OperatorSpec(terms=terms)


def symbol_constant_P(c: complex, h: BoundaryLike) -> Symbol:
    """σ_P(ξ) = (log(h₁h₂^a) − 2πbξ₂) + i(b log h₂ + 2π(ξ₁ + aξ₂)) for P = ∂₁ + c∂₂."""
    c = complex(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    h = as_boundary(h)
    form = _affine_from_parts(0j, 1 + 0j, c, h.log_h1, h.log_h2)
    return Symbol.from_affine(form, f"P(c={c})", Basis.L, operator=OperatorSpec.first_order(c), boundary=h)


def first_order_coefficient(op: OperatorSpec) -> Optional[complex]:
    """c when op is exactly ∂₁ + c∂₂ (c ≠ 0), else None."""
    parts = _first_order_parts(op)
    if parts is None:
        return None
    c00, c10, c01 = parts
    if c00 != 0 or c10 != 1 or c01 == 0:
        return None
    return c01


def apply_multiplier(s: Symbol, c: SpectralField) -> SpectralField:
    """Âf(ξ) = σ(ξ) f̂(ξ)."""
    if Basis(s.basis) != c.basis:
        raise ValueError(f"symbol acts on the {s.basis.value} system, coefficients are tagged {c.basis.value}")
    return c.with_coeffs(s.on_lattice(c.trunc) * c.coeffs)


def adjoint_symbol(s: Symbol) -> Symbol:
    """conj(σ), acting on the opposite system."""
    base = s.evaluator
    other = Basis.LSTAR if Basis(s.basis) == Basis.L else Basis.L
    if s.affine is not None:
        form = s.affine.conjugate()
        evaluator = form.evaluate
    else:
        form = None
        evaluator = lambda xi1, xi2: np.conj(base(xi1, xi2))  # noqa: E731
    cache = s.zero_cache
    return Symbol(evaluator=evaluator, label=f"adj({s.label})", basis=other, affine=form,
                  operator=formal_adjoint(s.operator) if s.operator is not None else None,
                  boundary=s.boundary, zero_cache=cache)


def apply_operator(op: OperatorSpec, h: BoundaryLike, f: GridField, basis: Basis = Basis.L) -> GridField:
    """op·f on the grid by weighted spectral differentiation in the chosen system."""
    h = as_boundary(h)
    basis = Basis(basis)
    K = f.spec.max_trunc()
    coeffs = analyze_basis(f, h, K, basis)
    symbol = diff_symbol(op, h) if basis == Basis.L else lstar_symbol(op, h)
    return synthesize(apply_multiplier(symbol, coeffs), h, f.spec)


# Shorthand operator strings: "d1 + (a+bi) d2", "L", "d11 - 2 d12 + 0.5i d22"

_DERIV = re.compile(r"(?:\*\s*)?(d[12]+|L)$")


def _split_terms(text: str) -> List[str]:
    terms, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced ')' at column {pos + 1} in {text!r}")
        elif ch in "+-" and depth == 0 and pos > start:
            prev = text[pos - 1]
            if prev in "eE" and pos >= 2 and (text[pos - 2].isdigit() or text[pos - 2] == "."):
                continue
            terms.append(text[start:pos])
            start = pos
    if depth != 0:
        raise ParseError(f"unbalanced '(' in {text!r}")
    terms.append(text[start:])
    return [t.strip() for t in terms if t.strip()]


def _parse_coefficient(raw: str, source: str) -> complex:
    raw = raw.strip().rstrip("*").strip()
    sign = 1.0
    while raw[:1] in ("+", "-"):
        if raw[0] == "-":
            sign = -sign
        raw = raw[1:].strip()
    if raw.startswith("(") and raw.endswith(")"):
        raw = raw[1:-1]
    raw = raw.replace(" ", "").replace("i", "j")
    if raw == "":
        return complex(sign)
    if raw.endswith("j") and raw[:-1] in ("", "+", "-"):
        raw = raw[:-1] + "1j"
    elif raw.endswith("j") and raw[-2] in "+-":
        raw = raw[:-1] + "1j"  # "a+i" → "a+1j"
    try:
        return sign * complex(raw)
    except ValueError:
        raise ParseError(f"cannot read coefficient {raw!r} in {source!r}")


def parse_shorthand(text: str) -> OperatorSpec:
    """Parse "d1 + (a+bi) d2"-style strings; dXY.. lists the differentiated variables."""
    if not text or not text.strip():
        raise ParseError("empty operator string")
    acc: Dict[Tuple[int, int], complex] = {}
    for term in _split_terms(text.strip()):
        match = _DERIV.search(term)
        if match:
            deriv = match.group(1)
            coeff = _parse_coefficient(term[:match.start()], text)
        else:
            deriv = ""
            coeff = _parse_coefficient(term, text)
        if deriv == "L":
            indices = [(2, 0), (0, 2)]
        elif deriv:
            digits = deriv[1:]
            indices = [(digits.count("1"), digits.count("2"))]
        else:
            indices = [(0, 0)]
        for idx in indices:
            acc[idx] = acc.get(idx, 0j) + coeff
    terms = [Term(alpha1=a1, alpha2=a2, re=c.real, im=c.imag) for (a1, a2), c in sorted(acc.items())]
    return OperatorSpec(terms=terms)


def parse_operator(source: Union[str, Dict[str, Any], List[Dict[str, Any]]]) -> OperatorSpec:
    """OperatorSpec from a JSON term list, a JSON string, or shorthand."""
    if isinstance(source, str):
        stripped = source.strip()
        if stripped[:1] in ("{", "["):
            try:
                source = json.loads(stripped)
            except json.JSONDecodeError as e:
                raise ParseError(f"operator JSON line {e.lineno}: {e.msg}")
        else:
            return parse_shorthand(stripped)
    if isinstance(source, list):
        source = {"terms": source}
    try:
        return OperatorSpec.model_validate(source)
    except ValueError as e:
        raise ParseError(f"invalid operator terms: {e}")


def operator_label(op: OperatorSpec) -> str:
    """Inverse of parse_shorthand for display."""
    parts = []
    for t in op.terms:
        deriv = "d" + "1" * t.alpha1 + "2" * t.alpha2 if t.order else ""
        c = t.coefficient
        coeff = f"({c.real:g}{c.imag:+g}i)" if c.imag else f"{c.real:g}"
        parts.append(f"{coeff} {deriv}".strip())
    return " + ".join(parts) if parts else "0"
