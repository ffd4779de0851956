import json

import numpy as np
import pytest

from src.errors import ParseError
from src.models import ASeries, Basis
from src.tools.field_io import (
    read_grid,
    read_samples_csv,
    read_series_json,
    read_spectral_json,
    spectral_from_dict,
    spectral_to_dict,
    write_grid,
)
from src.tools.spectral_transforms import GridField, GridSpec, SpectralField


@pytest.fixture
def field(rng):
    spec = GridSpec(6, 5)
    return GridField(spec, rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape))


@pytest.mark.parametrize("name", ["grid.csv", "grid.bin"])
def test_grid_files_are_exact(tmp_path, field, name):
    path = write_grid(field, str(tmp_path / name))
    back = read_grid(path)
    assert back.spec == field.spec
    assert np.array_equal(back.values, field.values)


def test_csv_reports_offending_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,0,2,0\n1,0,oops,0\n")
    with pytest.raises(ParseError, match=":2:"):
        read_grid(str(path))


def test_csv_rejects_ragged_rows(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("1,0,2,0,3,0,4,0\n1,0\n1,0,2,0,3,0,4,0\n1,0,2,0,3,0,4,0\n")
    with pytest.raises(ParseError, match="ragged"):
        read_grid(str(path))


def test_binary_rejects_truncated_payload(tmp_path, field):
    path = write_grid(field, str(tmp_path / "grid.bin"))
    with open(path, "rb") as handle:
        payload = handle.read()
    with open(path, "wb") as handle:
        handle.write(payload[:-8])
    with pytest.raises(ParseError):
        read_grid(path)


def test_missing_file():
    with pytest.raises(ParseError, match="not found"):
        read_grid("/nonexistent/grid.csv")


def test_spectral_json_defaults_and_bounds(tmp_path):
    data = {"K": 2, "basis": "Lstar", "coeffs": [{"xi1": 1, "xi2": -2, "re": 0.5, "im": -1.0}]}
    field = spectral_from_dict(data)
    assert field.basis == Basis.LSTAR
    assert field.at((1, -2)) == 0.5 - 1j
    assert np.count_nonzero(field.coeffs) == 1

    with pytest.raises(ParseError, match="outside truncation"):
        spectral_from_dict({"K": 1, "coeffs": [{"xi1": 2, "xi2": 0, "re": 1.0}]})
    with pytest.raises(ParseError):
        spectral_from_dict({"coeffs": []})

    path = tmp_path / "field.json"
    path.write_text(json.dumps(spectral_to_dict(field)))
    assert np.array_equal(read_spectral_json(str(path)).coeffs, field.coeffs)


def test_spectral_json_syntax_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"K": 2,\n "coeffs": [\n')
    with pytest.raises(ParseError):
        read_spectral_json(str(path))


def test_series_json(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"mean": 1.0, "modes": [{"k": 1, "re": 0.5, "im": 0.0}]}))
    series = read_series_json(str(path))
    assert isinstance(series, ASeries)
    assert series.mean == 1.0


def test_samples_csv_with_header_and_pairs(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("x,a\n0.0,2.0\n0.5,0.0\n")
    x, values = read_samples_csv(str(path))
    np.testing.assert_array_equal(x, [0.0, 0.5])
    np.testing.assert_array_equal(values, [2.0, 0.0])

    single = tmp_path / "b.csv"
    single.write_text("1.0\n2.0\n3.0\n4.0\n")
    x, values = read_samples_csv(str(single))
    np.testing.assert_allclose(x, [0.0, 0.25, 0.5, 0.75])

    bad = tmp_path / "c.csv"
    bad.write_text("1.0\nnope\n")
    with pytest.raises(ParseError, match=":2:"):
        read_samples_csv(str(bad))


def test_spectral_dict_lists_full_lattice():
    data = spectral_to_dict(SpectralField.zeros(1))
    assert data["K"] == 1
    assert len(data["coeffs"]) == 9
    assert data["coeffs"][0] == {"xi1": -1, "xi2": -1, "re": 0.0, "im": 0.0}
