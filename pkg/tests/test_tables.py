"""
CSV and JSON serialization of result tables.
"""
import json
import math

import numpy as np
import pandas as pd
import pytest

from optocool.moments import MomentVector, build_system
from optocool.solve import evolve
from optocool.tables import (SCHEMA_VERSION, SweepTable, frame_from_text, read_csv, to_csv,
                             to_json, trajectory_table, write_table)


def sample_table():
    frame = pd.DataFrame({
        "delta": [-1.0, -0.5, 0.1],
        "n_b": [0.1, 1 / 3, math.nan],
        "stable": [True, True, False],
        "error": ["", "", "UnstableSystem"],
    })
    return SweepTable(frame, {"figure": "demo"})


class TestCsv:
    """Comma separated, LF, 17 significant digits."""

    def test_header_and_line_endings(self):
        text = to_csv(sample_table())
        assert text.splitlines()[0] == "delta,n_b,stable,error"
        assert "\r" not in text
        assert text.endswith("\n")
        assert len(text.splitlines()) == 4

    def test_seventeen_significant_digits(self):
        text = to_csv(sample_table())
        assert "0.10000000000000001" in text
        assert "0.33333333333333331" in text

    def test_round_trip(self, rng):
        values = rng.normal(size=50) * 10.0 ** rng.integers(-8, 8, size=50)
        table = SweepTable(pd.DataFrame({"x": values, "flag": values > 0}))
        back = frame_from_text(to_csv(table))
        assert np.allclose(back.column("x"), values, rtol=1e-15, atol=0)
        assert back.column("flag").tolist() == (values > 0).tolist()

    def test_round_trip_is_bit_exact(self, rng):
        values = rng.normal(size=5000) * 10.0 ** rng.integers(-12, 12, size=5000)
        back = frame_from_text(to_csv(SweepTable(pd.DataFrame({"x": values}))))
        assert np.array_equal(back.column("x"), values)

    def test_missing_values_and_errors(self):
        back = frame_from_text(to_csv(sample_table()))
        assert math.isnan(back.column("n_b")[2])
        assert back.column("error").tolist() == ["", "", "UnstableSystem"]

    def test_complex_columns_are_split(self):
        table = SweepTable(pd.DataFrame({"t": [0.0, 1.0], "a2": [1 + 2j, -0.5j]}))
        text = to_csv(table)
        assert text.splitlines()[0] == "t,a2_re,a2_im"
        back = frame_from_text(text)
        assert back.columns == ["t", "a2"]
        assert back.column("a2").tolist() == [1 + 2j, -0.5j]

    def test_read_from_path(self, tmp_path):
        path = tmp_path / "table.csv"
        write_table(sample_table(), str(path), "csv")
        assert read_csv(str(path)).columns == ["delta", "n_b", "stable", "error"]


class TestJson:
    """Rows plus provenance metadata."""

    def test_document_layout(self):
        doc = json.loads(to_json(sample_table(), {"mode": "effective"}))
        assert doc["meta"]["schema_version"] == SCHEMA_VERSION
        assert doc["meta"]["config"] == {"mode": "effective"}
        assert doc["meta"]["figure"] == "demo"
        assert isinstance(doc["meta"]["build"], str) and doc["meta"]["build"]
        assert doc["columns"] == ["delta", "n_b", "stable", "error"]
        assert len(doc["rows"]) == 3

    def test_non_finite_is_null(self):
        doc = json.loads(to_json(sample_table()))
        assert doc["rows"][2][1] is None
        assert doc["rows"][2][2] is False
        assert doc["rows"][1][1] == 1 / 3


class TestWriteTable:
    """Files and standard output."""

    def test_idempotent_files(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_table(sample_table(), str(first))
        write_table(sample_table(), str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_creates_parent_directories(self, tmp_path):
        target = tmp_path / "nested" / "out.json"
        write_table(sample_table(), str(target), "json")
        assert json.loads(target.read_text())["columns"][0] == "delta"

    def test_stdout(self, capsys):
        write_table(sample_table())
        assert capsys.readouterr().out.startswith("delta,n_b,stable,error\n")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            write_table(sample_table(), None, "xml")


class TestTrajectoryTable:
    """Time series of the ten moments."""

    def test_columns(self, fig3_params):
        system = build_system(fig3_params, rwa=False)
        trajectory = evolve(system, MomentVector.thermal(10.0), np.linspace(0, 1, 5))
        table = trajectory_table(trajectory)
        assert len(table) == 5
        assert table.columns[:3] == ["t", "n_a", "n_b"]
        header = to_csv(table).splitlines()[0].split(",")
        assert header[:5] == ["t", "n_a_re", "n_a_im", "n_b_re", "n_b_im"]
        assert len(header) == 21
        assert table.meta["params"] == system.identifier
