"""Export witness lists and survey survivors to CSV via pyarrow."""

import io
import logging
from typing import Iterable, Iterator, Optional

import numpy as np
import pyarrow as pa
import pyarrow.csv as csv

logger = logging.getLogger(__name__)

WITNESS_SCHEMA = pa.schema([
    ("form", pa.string()),
    ("bound", pa.int64()),
    ("n", pa.int64()),
])

SURVIVOR_SCHEMA = pa.schema([
    ("family", pa.string()),
    ("a", pa.int64()),
    ("b", pa.int64()),
    ("c", pa.int64()),
    ("d", pa.int64()),  # null for the triangular-triple family
    ("display", pa.string()),
    ("expected", pa.bool_()),
])


def witnesses_table(form: str, bound: int, witnesses: np.ndarray) -> pa.Table:
    count = len(witnesses)
    return pa.table(
        {
            "form": pa.array([form] * count, pa.string()),
            "bound": pa.array(np.full(count, bound, dtype=np.int64)),
            "n": pa.array(np.asarray(witnesses, dtype=np.int64)),
        },
        schema=WITNESS_SCHEMA,
    )


def survivors_table(
    family: str,
    rows: Iterable[tuple[tuple[int, ...], str]],
    expected: Optional[set[tuple[int, ...]]] = None,
) -> pa.Table:
    """
    One row per survivor.

    Args:
        family: Family key
        rows: (params, display) pairs
        expected: Published tuples; the expected column is null without one
    """
    columns = {name: [] for name in SURVIVOR_SCHEMA.names}
    for params, display in rows:
        columns["family"].append(family)
        for name, value in zip(("a", "b", "c", "d"), (*params, None, None)):
            columns[name].append(value)
        columns["display"].append(display)
        columns["expected"].append(None if expected is None else tuple(params) in expected)
    return pa.table(columns, schema=SURVIVOR_SCHEMA)


def table_to_csv(table: pa.Table) -> str:
    buffer = io.BytesIO()
    csv.write_csv(table, buffer)
    return buffer.getvalue().decode("utf-8")


def stream_witness_csv(form: str, bound: int, chunks: Iterable[np.ndarray]) -> Iterator[str]:
    """CSV text chunk by chunk, header first; nothing is accumulated."""
    rows = 0
    header = True
    for chunk in chunks:
        buffer = io.BytesIO()
        options = csv.WriteOptions(include_header=header)
        csv.write_csv(witnesses_table(form, bound, chunk), buffer, write_options=options)
        header = False
        rows += len(chunk)
        yield buffer.getvalue().decode("utf-8")
    if header:
        yield table_to_csv(witnesses_table(form, bound, np.zeros(0, dtype=np.int64)))
    logger.info(f"Streamed {rows} witnesses of {form} up to {bound}")
