import json
import math

import numpy as np

from src.models import (
    CheckerType,
    DecayClass,
    DecayReport,
    ExponentCurve,
    ExponentShell,
    FreqIndex,
    ValidationCheck,
)
from src.reporting import curve_rows, format_float, summarize_checks, to_json, write_curve_csv, write_json


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(1e300) == "1.0000000000000001e+300"
    assert format_float(math.inf) == "Infinity"
    assert format_float(-math.inf) == "-Infinity"
    assert format_float(math.nan) == "NaN"


def test_json_follows_model_field_order():
    report = DecayReport(decay_class=DecayClass.MODERATE, fitted_exponent=2.0, residual=0.0,
                         shell_radii=[2.0, 4.0], shell_exponents=[2.0, 2.0], drift=0.0)
    text = to_json(report)
    keys = list(json.loads(text).keys())
    assert keys == list(DecayReport.model_fields)
    assert '"decay_class": "moderate"' in text
    assert text.endswith("}\n")


def test_json_is_byte_stable():
    data = {"b": [1, 2.5, None, True], "a": complex(1, -2), "arr": np.arange(3)}
    assert to_json(data) == to_json(data)
    parsed = json.loads(to_json(data))
    assert parsed["a"] == {"re": 1.0, "im": -2.0}
    assert parsed["arr"] == [0, 1, 2]
    assert list(parsed) == ["b", "a", "arr"]


def test_non_finite_values_round_trip_through_json():
    parsed = json.loads(to_json({"x": math.inf, "y": math.nan}))
    assert math.isinf(parsed["x"])
    assert math.isnan(parsed["y"])


def test_strings_are_escaped():
    assert json.loads(to_json({"s": 'a"b\\c\nd'})) == {"s": 'a"b\\c\nd'}


def test_strings_keep_unicode_and_escape_controls():
    text = to_json({"op": "∂₁ + φ∂₂\t"})
    assert "∂₁ + φ∂₂\\t" in text
    assert json.loads(text) == {"op": "∂₁ + φ∂₂\t"}


def test_curve_csv(tmp_path):
    curve = ExponentCurve(shells=[
        ExponentShell(radius=10, min_abs_sigma=0.5, min_weight=6.0, implied_exponent=0.25, argmin=FreqIndex(1, -2)),
    ])
    assert curve_rows(curve) == ["R,min_abs_sigma,implied_M", "10.0,0.5,0.25"]
    path = write_curve_csv(curve, str(tmp_path / "sub" / "curve.csv"))
    with open(path) as handle:
        assert handle.read() == "R,min_abs_sigma,implied_M\n10.0,0.5,0.25\n"


def test_write_json_creates_directories(tmp_path):
    path = write_json({"ok": True}, str(tmp_path / "a" / "b.json"))
    with open(path) as handle:
        assert json.load(handle) == {"ok": True}


def test_summarize_checks():
    checks = [
        ValidationCheck(name="one", checker=CheckerType.SOLVER, passed=True),
        ValidationCheck(name="two", checker=CheckerType.SOLVER, passed=False),
    ]
    assert summarize_checks(checks) == {"total": 2, "passed": 1, "failed": ["two"]}
