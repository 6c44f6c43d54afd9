"""Deterministic CSV and JSON result tables.

Numbers are written with 12 significant digits. CSV files start with
``# key: value`` metadata lines followed by a header row; JSON files hold a
single object with ``meta``, ``columns`` and ``rows``.
"""

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Final, Literal

from arnold_gap_modes.errors import ContractViolationError

Cell = float | int | str
OutputFormat = Literal["csv", "json"]

SIGNIFICANT_DIGITS: Final = 12
META_PREFIX: Final = "# "


def format_number(value: Cell) -> str:
    """Text form of a cell: 12 significant digits for floats."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _parse_cell(text: str) -> Cell:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _json_cell(value: Cell) -> Cell | None:
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(format_number(value))
    return value


@dataclass
class ResultTable:
    """Named columns of rows plus free-form metadata."""

    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for row in self.rows:
            self._check(row)

    def _check(self, row: Sequence[Cell]) -> None:
        if len(row) != len(self.columns):
            raise ContractViolationError(
                f"row has {len(row)} cells, table has {len(self.columns)} columns"
            )

    def append(self, row: Sequence[Cell]) -> None:
        self._check(row)
        self.rows.append(tuple(row))

    def extend(self, rows: Iterable[Sequence[Cell]]) -> None:
        for row in rows:
            self.append(row)

    def column(self, name: str) -> list[Cell]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv_string(self) -> str:
        buffer = io.StringIO()
        for key, value in self.meta.items():
            buffer.write(f"{META_PREFIX}{key}: {value}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(cell) for cell in row])
        return buffer.getvalue()

    def to_json_string(self) -> str:
        payload = {
            "meta": self.meta,
            "columns": list(self.columns),
            "rows": [
                {name: _json_cell(cell) for name, cell in zip(self.columns, row)}
                for row in self.rows
            ],
        }
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"

    def render(self, fmt: OutputFormat) -> str:
        match fmt:
            case "csv":
                return self.to_csv_string()
            case "json":
                return self.to_json_string()

    def write(self, path: str | Path, fmt: OutputFormat = "csv") -> Path:
        """Write the table, creating parent directories."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(fmt), encoding="utf-8")
        return path


def parse_csv(text: str) -> ResultTable:
    """Inverse of :meth:`ResultTable.to_csv_string`."""
    meta: dict[str, str] = {}
    lines = text.splitlines()
    body_start = 0
    for body_start, line in enumerate(lines):
        if not line.startswith(META_PREFIX.rstrip()):
            break
        key, _, value = line[len(META_PREFIX) :].partition(": ")
        meta[key] = value
    reader = csv.reader(lines[body_start:])
    header = next(reader)
    rows = [tuple(_parse_cell(cell) for cell in row) for row in reader if row]
    return ResultTable(columns=tuple(header), rows=rows, meta=meta)


def parse_json(text: str) -> ResultTable:
    """Inverse of :meth:`ResultTable.to_json_string`; nulls read back as nan."""
    payload = json.loads(text)
    columns = tuple(str(name) for name in payload["columns"])
    rows = [
        tuple(math.nan if row[name] is None else row[name] for name in columns)
        for row in payload["rows"]
    ]
    return ResultTable(columns=columns, rows=rows, meta=dict(payload["meta"]))


def read_table(path: str | Path) -> ResultTable:
    """Load a table written by :meth:`ResultTable.write`, format from the suffix."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        return parse_json(text)
    return parse_csv(text)
