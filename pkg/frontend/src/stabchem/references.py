"""Reference-energy tables: one row per scan point, CSV on disk.

Each row carries the scan parameter and whichever of HF, CCSD, and FCI were
actually computed.  Missing entries stay missing (empty CSV cells), never
zero-filled; a per-row note records why something is absent.  Where several
methods are present they must respect the variational ordering
FCI <= CCSD <= HF.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import ParseError

# Correlated methods sit below HF; CCSD may dip slightly below FCI only
# through numerics, so the ordering check carries a small slack.
ORDER_SLACK = 1e-6


@dataclass(frozen=True)
class ReferenceRow:
    parameter: float
    hf: float | None = None
    ccsd: float | None = None
    fci: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.fci is not None and self.hf is not None:
            if self.fci > self.hf + ORDER_SLACK:
                raise ValueError(
                    f"FCI {self.fci} above HF {self.hf} at parameter {self.parameter}"
                )
        if self.ccsd is not None and self.hf is not None:
            if self.ccsd > self.hf + ORDER_SLACK:
                raise ValueError(
                    f"CCSD {self.ccsd} above HF {self.hf} at parameter {self.parameter}"
                )
        if self.fci is not None and self.ccsd is not None:
            if self.fci > self.ccsd + ORDER_SLACK:
                raise ValueError(
                    f"FCI {self.fci} above CCSD {self.ccsd} at parameter {self.parameter}"
                )


@dataclass(frozen=True)
class ReferenceTable:
    rows: tuple[ReferenceRow, ...]

    def __post_init__(self):
        params = [row.parameter for row in self.rows]
        if len(set(params)) != len(params):
            raise ValueError("duplicate scan parameter in reference table")

    def row_at(self, parameter: float, tolerance: float = 1e-9) -> ReferenceRow:
        for row in self.rows:
            if abs(row.parameter - parameter) <= tolerance:
                return row
        raise KeyError(f"no reference row at parameter {parameter}")

    def column(self, method: str) -> list[float | None]:
        # accept either the attribute name or the CSV header spelling
        return [getattr(row, method.lower()) for row in self.rows]


_COLUMNS = ("parameter", "HF", "CCSD", "FCI", "note")


def serialize_references(table: ReferenceTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for row in table.rows:
        writer.writerow(
            [
                repr(row.parameter),
                "" if row.hf is None else repr(row.hf),
                "" if row.ccsd is None else repr(row.ccsd),
                "" if row.fci is None else repr(row.fci),
                row.note,
            ]
        )
    return buf.getvalue()


def write_references(path, table: ReferenceTable) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_references(table))


def parse_references(text: str, source: str = "<string>") -> ReferenceTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{source}: empty reference table") from None
    if tuple(h.strip() for h in header) != _COLUMNS:
        raise ParseError(f"{source}: expected header {','.join(_COLUMNS)!r}")

    def maybe(cell: str) -> float | None:
        cell = cell.strip()
        return None if cell == "" else float(cell)

    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(_COLUMNS):
            raise ParseError(f"{source}:{lineno}: expected {len(_COLUMNS)} cells")
        try:
            rows.append(
                ReferenceRow(
                    parameter=float(cells[0]),
                    hf=maybe(cells[1]),
                    ccsd=maybe(cells[2]),
                    fci=maybe(cells[3]),
                    note=cells[4].strip(),
                )
            )
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: {exc}") from exc
    return ReferenceTable(tuple(rows))


def load_references(path) -> ReferenceTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_references(text, source=str(path))
