"""Tests for CSV export of witnesses and survivors."""

import io

import numpy as np
import pyarrow.csv as csv

from tusv.export.table_export import (
    SURVIVOR_SCHEMA,
    WITNESS_SCHEMA,
    stream_witness_csv,
    survivors_table,
    table_to_csv,
    witnesses_table,
)


def read_back(text: str):
    return csv.read_csv(io.BytesIO(text.encode("utf-8")))


class TestWitnessExport:
    """Tests for witness tables."""

    def test_table(self):
        table = witnesses_table("1*sq+1*sq+1*sq", 30, np.array([7, 15, 23, 28]))
        assert table.schema == WITNESS_SCHEMA
        assert table.column("n").to_pylist() == [7, 15, 23, 28]
        assert set(table.column("bound").to_pylist()) == {30}

    def test_csv_round_trip(self):
        text = table_to_csv(witnesses_table("1*sq+1*sq+1*sq", 30, np.array([7, 15])))
        back = read_back(text)
        assert back.column_names == ["form", "bound", "n"]
        assert back.column("n").to_pylist() == [7, 15]
        assert back.column("form").to_pylist() == ["1*sq+1*sq+1*sq"] * 2

    def test_streamed_header_once(self):
        """Chunks concatenate into one CSV with a single header."""
        chunks = [np.array([1, 2]), np.array([5]), np.array([9, 10])]
        text = "".join(stream_witness_csv("f", 10, iter(chunks)))
        assert text.count('"form"') == 1
        assert read_back(text).column("n").to_pylist() == [1, 2, 5, 9, 10]

    def test_streamed_empty(self):
        text = "".join(stream_witness_csv("f", 10, iter([])))
        assert text.strip() == '"form","bound","n"'


class TestSurvivorExport:
    """Tests for survivor tables."""

    def test_gp_family(self):
        rows = [((1, 1, 1, 2), "x^2+y^2+z(z+3)/2"), ((1, 2, 2, 4), "x^2+2y^2+z(z+3)")]
        table = survivors_table("I", rows, expected={(1, 1, 1, 2)})
        assert table.schema == SURVIVOR_SCHEMA
        assert table.column("expected").to_pylist() == [True, False]
        assert table.column("d").to_pylist() == [2, 4]

    def test_triangular_family_has_null_d(self):
        table = survivors_table("tri", [((1, 1, 1), "T_x+T_y+T_z")])
        assert table.column("d").to_pylist() == [None]
        assert table.column("expected").to_pylist() == [None]

    def test_csv(self):
        table = survivors_table("I", [((1, 1, 1, 2), "x^2+y^2+z(z+3)/2")])
        back = read_back(table_to_csv(table))
        assert back.column("display").to_pylist() == ["x^2+y^2+z(z+3)/2"]
