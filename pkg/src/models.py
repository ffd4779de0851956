"""Data models for the nonharmonic spectral toolkit."""
import math
import operator
from enum import Enum
from typing import Annotated, Any, Dict, List, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Basis(str, Enum):
    """Which biorthogonal system a coefficient array refers to."""
    L = "L"
    LSTAR = "Lstar"


class Axis(str, Enum):
    """Variable transformed by a partial transform."""
    X1 = "x1"
    X2 = "x2"


class Direction(str, Enum):
    """Direction of the normal-form conjugation."""
    FORWARD = "forward"
    INVERSE = "inverse"


class Verdict(str, Enum):
    """Outcome of a global hypoellipticity / solvability decision."""
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class DecayClass(str, Enum):
    """Growth class of a coefficient sequence."""
    RAPID = "rapid"
    MODERATE = "moderate"
    INDETERMINATE = "indeterminate"
    UNBOUNDED = "unbounded"


class CheckerType(str, Enum):
    """Nodes of the validation workflow."""
    EIGENBASIS = "eigenbasis"
    TRANSFORMS = "transforms"
    MULTIPLIERS = "multipliers"
    DIAGNOSTICS = "diagnostics"
    SOLVER = "solver"
    NORMAL_FORM = "normal_form"


class FreqIndex(NamedTuple):
    """Lattice frequency ξ = (ξ₁, ξ₂) ∈ ℤ²."""
    xi1: int
    xi2: int


class BoundaryParams(BaseModel):
    """Boundary weights h = (h₁, h₂); h = (1, 1) is the torus."""
    model_config = ConfigDict(frozen=True)

    h1: float = Field(gt=0)
    h2: float = Field(gt=0)

    @field_validator("h1", "h2")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("boundary weight must be finite")
        return value

    @property
    def log_h1(self) -> float:
        return math.log(self.h1)

    @property
    def log_h2(self) -> float:
        return math.log(self.h2)

    @property
    def is_torus(self) -> bool:
        return self.h1 == 1.0 and self.h2 == 1.0

    def as_tuple(self) -> tuple:
        return (self.h1, self.h2)


class Term(BaseModel):
    """One term coeff·∂₁^alpha1 ∂₂^alpha2 of a constant-coefficient operator."""
    model_config = ConfigDict(frozen=True)

    alpha1: int = Field(ge=0)
    alpha2: int = Field(ge=0)
    re: float = 0.0
    im: float = 0.0

    @property
    def coefficient(self) -> complex:
        return complex(self.re, self.im)

    @property
    def order(self) -> int:
        return self.alpha1 + self.alpha2


class OperatorSpec(BaseModel):
    """Finite sum of constant-coefficient derivative terms."""
    model_config = ConfigDict(frozen=True)

    terms: List[Term]

    @property
    def order(self) -> int:
        return max((t.order for t in self.terms if t.coefficient != 0), default=0)

    @classmethod
    def first_order(cls, c: complex) -> "OperatorSpec":
        """P = ∂₁ + c ∂₂."""
        c = complex(c)
        if c == 0:
            raise ValueError("c must be nonzero for the first-order family")
        return cls(terms=[
            Term(alpha1=1, alpha2=0, re=1.0),
            Term(alpha1=0, alpha2=1, re=c.real, im=c.imag),
        ])

    @classmethod
    def laplacian(cls) -> "OperatorSpec":
        """L_h = ∂₁² + ∂₂²."""
        return cls(terms=[Term(alpha1=2, alpha2=0, re=1.0), Term(alpha1=0, alpha2=2, re=1.0)])


class FrameBounds(BaseModel):
    """Empirical frame constants with their analytic envelopes."""
    lower: float
    upper: float
    lower_star: float
    upper_star: float
    envelope: List[float]
    envelope_star: List[float]
    trials: int


class DecayReport(BaseModel):
    """Growth classification of a coefficient sequence."""
    decay_class: DecayClass
    fitted_exponent: float
    residual: float
    shell_radii: List[float] = []
    shell_exponents: List[float] = []
    drift: float = 0.0


class ExponentShell(BaseModel):
    """Minimum of |σ| over one shell and the exponent it implies."""
    radius: float
    min_abs_sigma: float
    min_weight: float
    implied_exponent: float
    argmin: FreqIndex


class ExponentCurve(BaseModel):
    """Per-shell exponent record."""
    shells: List[ExponentShell] = []

    @property
    def exponents(self) -> List[float]:
        return [s.implied_exponent for s in self.shells]

    @property
    def bounded_by(self) -> float:
        return max(self.exponents, default=-math.inf)


class IrrationalityReport(BaseModel):
    """Finite-depth irrationality-measure evidence for a real number."""
    value: str
    rational: bool
    denominators: List[int] = []
    exponents: List[float] = []
    running_max: List[float] = []
    max_exponent: float = 0.0
    tail_start: int = 2
    tail_max_exponent: float = 0.0
    threshold: float
    liouville_evidence: bool
    depth: int
    precision_exhausted: bool = False


class DiagnosisReport(BaseModel):
    """Global hypoellipticity / solvability classification."""
    c_re: Optional[float] = None
    c_im: Optional[float] = None
    h1: float
    h2: float
    gh_verdict: Verdict
    gs_verdict: Verdict
    adjoint_gh_verdict: Verdict
    adjoint_gs_verdict: Verdict
    deciding_branch: str
    evidence_based: bool = False
    relation_residual: Optional[float] = None
    zero_set_radius: int = 0
    zero_set_sample: List[FreqIndex] = []
    exponent_curve: Optional[ExponentCurve] = None
    diophantine: Optional[IrrationalityReport] = None
    notes: List[str] = []


class AdmissibilityViolation(BaseModel):
    """Mode where the symbol vanishes but the datum does not."""
    xi: FreqIndex
    abs_sigma: float
    abs_f: float


class AdmissibilityReport(BaseModel):
    """Membership test of a datum in the admissible space."""
    admissible: bool
    violations: List[AdmissibilityViolation] = []
    zero_tol: float

    @model_validator(mode="after")
    def _consistent(self) -> "AdmissibilityReport":
        if self.admissible != (not self.violations):
            raise ValueError("admissible must be equivalent to an empty violation list")
        return self


class SolveOptions(BaseModel):
    """Tolerances for Fourier division."""
    zero_tol: Optional[float] = Field(default=None, ge=0)
    data_tol: Optional[float] = Field(default=None, ge=0)
    growth_guard: Optional[float] = None


class SolveReport(BaseModel):
    """Outcome of a division solve."""
    admissibility: AdmissibilityReport
    residual: float
    decay: Optional[DecayReport] = None
    grid_residual: Optional[float] = None


class ResolutionReport(BaseModel):
    """Intertwining residual at two grid resolutions."""
    n_coarse: List[int]
    n_fine: List[int]
    coarse: float
    fine: float
    ratio: float
    floor: float
    converged: bool


class NormalFormReport(BaseModel):
    """Reduction of ∂₁ + a(x₁)∂₂ to ∂₁ + a₀∂₂."""
    a0: float
    band: int
    h1: float
    h2: float
    reduced_operator: str
    resolution: ResolutionReport
    diagnosis: DiagnosisReport


class ASeries(BaseModel):
    """Fourier series of a real coefficient a(x₁): mean plus modes."""
    mean: float = 0.0
    modes: List[Dict[str, float]] = []


class ExperimentConfig(BaseModel):
    """Inputs of one CLI run; JSON files mirror these fields."""
    model_config = ConfigDict(extra="forbid")

    h1: float = Field(default=1.0, gt=0)
    h2: float = Field(default=1.0, gt=0)
    c_re: Optional[float] = None
    c_im: float = 0.0
    exact_c: Optional[str] = None
    operator: Optional[str] = None
    a_series: Optional[ASeries] = None
    K: int = Field(default=8, ge=1)
    n: Optional[int] = Field(default=None, ge=4)
    radii: List[int] = [10, 100, 1000, 10000]
    qmax: int = Field(default=10000, ge=2)
    tol: float = Field(default=1e-12, gt=0)
    liouville_threshold: float = Field(default=3.5, gt=1)
    seed: int = 0
    trials: int = Field(default=20, ge=1)
    basis: Basis = Basis.L
    input: Optional[str] = None
    out: Optional[str] = None

    @field_validator("radii")
    @classmethod
    def _increasing(cls, radii: List[int]) -> List[int]:
        if not radii or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] < 1:
            raise ValueError("radii must be positive and strictly increasing")
        return radii

    @model_validator(mode="after")
    def _alias_free(self) -> "ExperimentConfig":
        if self.n is not None and self.n <= 2 * self.K:
            raise ValueError(f"grid n={self.n} aliases truncation K={self.K}; need n > 2K")
        return self

    @property
    def grid_n(self) -> int:
        return self.n if self.n is not None else 4 * self.K + 4

    @property
    def boundary(self) -> BoundaryParams:
        return BoundaryParams(h1=self.h1, h2=self.h2)

    @property
    def c(self) -> Optional[complex]:
        if self.c_re is None:
            return None
        return complex(self.c_re, self.c_im)


class ValidationCheck(BaseModel):
    """One measured invariant of the validation suite."""
    name: str
    checker: CheckerType
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool
    detail: Optional[str] = None


class ValidationState(BaseModel):
    """State shared between validation checkers."""
    config: ExperimentConfig = ExperimentConfig()
    checks: Annotated[List[ValidationCheck], operator.add] = []
    current_step: str = "initialization"
    current_checker: Optional[CheckerType] = None
    completed_checkers: Annotated[List[CheckerType], operator.add] = []
    messages: Annotated[List[Dict[str, Any]], operator.add] = []

    @property
    def failed(self) -> List[ValidationCheck]:
        return [c for c in self.checks if not c.passed]


class ValidationReport(BaseModel):
    """Output of the validate command."""
    config: ExperimentConfig
    passed: bool
    total: int
    failed: List[str] = []
    checks: List[ValidationCheck] = []
