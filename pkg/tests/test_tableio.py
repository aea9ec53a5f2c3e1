"""Delimited-table round trips and canonical cell formatting."""

from __future__ import annotations

import numpy as np
import pytest

from airytrain import column, fmt_cell, meta_line, read_table, write_table


class TestFmtCell:
    def test_none_is_the_empty_cell(self):
        assert fmt_cell(None) == ""

    def test_bools_become_bits(self):
        assert fmt_cell(True) == "1"
        assert fmt_cell(False) == "0"
        assert fmt_cell(np.bool_(True)) == "1"

    def test_ints_are_plain(self):
        assert fmt_cell(7) == "7"
        assert fmt_cell(np.int64(-3)) == "-3"

    def test_floats_round_trip_exactly(self):
        for value in (0.1, -1.5e-9, 2551698464.7873425, float(np.float64(1 / 3))):
            assert float(fmt_cell(value)) == value

    def test_strings_pass_through(self):
        assert fmt_cell("nupc") == "nupc"


class TestMetaLine:
    def test_renders_key_value_pairs(self):
        assert meta_line({"seed": 7, "rho": 2.5}) == "# seed=7 rho=2.5"

    def test_rejects_values_with_separators(self):
        with pytest.raises(ValueError):
            meta_line({"note": "two words"})
        with pytest.raises(ValueError):
            meta_line({"items": "a,b"})


class TestRoundTrip:
    def test_write_then_read(self, tmp_path):
        path = tmp_path / "table.csv"
        write_table(
            path,
            ["name", "value", "flag"],
            [["a", 0.1, True], ["b", None, False]],
            meta={"seed": 7},
        )
        meta, cols, rows = read_table(path)
        assert meta == {"seed": "7"}
        assert cols == ["name", "value", "flag"]
        assert rows == [["a", "0.1", "1"], ["b", "", "0"]]

    def test_written_files_are_byte_stable(self, tmp_path):
        rows = [[i, i * 0.1] for i in range(5)]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_table(a, ["i", "v"], rows, meta={"seed": 0})
        write_table(b, ["i", "v"], rows, meta={"seed": 0})
        assert a.read_bytes() == b.read_bytes()

    def test_row_width_mismatch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_table(tmp_path / "bad.csv", ["a", "b"], [[1]])

    def test_column_extraction_with_gaps(self, tmp_path):
        path = tmp_path / "gaps.csv"
        write_table(path, ["x", "y"], [[1.0, 2.0], [3.0, None]])
        _, cols, rows = read_table(path)
        y = column(cols, rows, "y")
        assert y[0] == 2.0
        assert np.isnan(y[1])
        with pytest.raises(KeyError):
            column(cols, rows, "missing")

    def test_creates_parent_directories(self, tmp_path):
        path = tmp_path / "deep" / "nest" / "t.csv"
        write_table(path, ["a"], [[1]])
        assert path.is_file()
