"""Dissociation-curve sweeps: manifest ingestion, per-entry search, CSV I/O.

A manifest is a small JSON document committed next to its Hamiltonian
fixtures:

    {"version": 1,
     "output_path": "h2_curve.csv",
     "entries": [{"label": "d=0.74", "parameter": 0.74,
                  "hamiltonian_path": "h2_d0.74.ham",
                  "reference_energies": {"exact": -1.8512}}]}

Relative paths resolve against the manifest's own directory, so a manifest
and its fixtures move together.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, StabgsError
from .pauli import load_hamiltonian
from .search import SearchConfig, branch_search

__all__ = [
    "MANIFEST_VERSION",
    "CurveEntry",
    "CurveError",
    "CurveManifest",
    "CurvePoint",
    "curve_columns",
    "load_manifest",
    "parse_manifest",
    "read_curve_csv",
    "run_curve",
    "write_curve_csv",
]

MANIFEST_VERSION = 1

_FIXED_COLUMNS = ("label", "parameter", "stabilizer_energy", "degeneracy")
_TAIL_COLUMN = "wall_time_s"


class CurveError(StabgsError):
    """A curve entry failed; carries the entry label for diagnostics."""

    def __init__(self, label: str, message: str):
        super().__init__(f"curve entry {label!r}: {message}")
        self.label = label


@dataclass(frozen=True)
class CurveEntry:
    label: str
    parameter: float
    hamiltonian_path: Path
    reference_energies: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CurveManifest:
    version: int
    output_path: Path
    entries: tuple[CurveEntry, ...]

    def method_names(self) -> list[str]:
        """Reference-method column names, merged across entries and sorted."""
        return sorted({m for e in self.entries for m in e.reference_energies})


@dataclass(frozen=True)
class CurvePoint:
    label: str
    parameter: float
    stabilizer_energy: float
    n_candidates: int
    degeneracy: int
    references: dict[str, float]
    wall_time: float

    def __post_init__(self):
        if not math.isfinite(self.stabilizer_energy):
            raise ValueError("stabilizer_energy must be finite")
        if self.degeneracy < 1:
            raise ValueError("degeneracy must be >= 1")


# -- manifest parsing ----------------------------------------------------------


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{where} must be finite")
    return value


def _parse_entry(raw, index: int, base_dir: Path) -> CurveEntry:
    where = f"entries[{index}]"
    if not isinstance(raw, dict):
        raise ParseError(f"{where} must be an object")
    unknown = set(raw) - {"label", "parameter", "hamiltonian_path", "reference_energies"}
    if unknown:
        raise ParseError(f"{where} has unknown keys: {sorted(unknown)}")
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        raise ParseError(f"{where} needs a non-empty label string")
    parameter = _number(raw.get("parameter"), f"{where}.parameter")
    ham = raw.get("hamiltonian_path")
    if not isinstance(ham, str) or not ham:
        raise ParseError(f"{where} needs a non-empty hamiltonian_path string")
    refs_raw = raw.get("reference_energies", {})
    if not isinstance(refs_raw, dict):
        raise ParseError(f"{where}.reference_energies must be an object")
    refs = {}
    for method, energy in refs_raw.items():
        if not isinstance(method, str) or not method:
            raise ParseError(f"{where} has an empty reference method name")
        refs[method] = _number(energy, f"{where}.reference_energies[{method!r}]")
    return CurveEntry(label, parameter, base_dir / ham, refs)


def parse_manifest(text: str, base_dir) -> CurveManifest:
    """Parse manifest JSON; relative paths resolve against base_dir."""
    base_dir = Path(base_dir)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("manifest root must be a JSON object")
    if doc.get("version") != MANIFEST_VERSION:
        raise ParseError(
            f"unsupported manifest version {doc.get('version')!r},"
            f" expected {MANIFEST_VERSION}"
        )
    unknown = set(doc) - {"version", "output_path", "entries"}
    if unknown:
        raise ParseError(f"manifest has unknown keys: {sorted(unknown)}")
    out = doc.get("output_path")
    if not isinstance(out, str) or not out:
        raise ParseError("manifest needs a non-empty output_path string")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list) or not raw_entries:
        raise ParseError("manifest needs a non-empty entries list")
    entries = tuple(
        _parse_entry(raw, i, base_dir) for i, raw in enumerate(raw_entries)
    )
    params = [e.parameter for e in entries]
    steps = [b - a for a, b in zip(params, params[1:])]
    if steps and not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
        raise ParseError("entry parameters must be strictly monotone")
    return CurveManifest(MANIFEST_VERSION, base_dir / out, entries)


def load_manifest(path) -> CurveManifest:
    """Load and validate a manifest; every referenced path must resolve now."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        manifest = parse_manifest(fh.read(), path.parent)
    for entry in manifest.entries:
        if not entry.hamiltonian_path.is_file():
            raise ParseError(
                f"entry {entry.label!r}: hamiltonian file not found:"
                f" {entry.hamiltonian_path}"
            )
    out_dir = manifest.output_path.parent
    if not out_dir.is_dir():
        raise ParseError(f"output directory does not exist: {out_dir}")
    return manifest


# -- running -------------------------------------------------------------------


def _entry_payload(ham_path: str, config: SearchConfig):
    """Load + search one Hamiltonian; plain tuple so it crosses processes."""
    t0 = time.perf_counter()
    h = load_hamiltonian(ham_path)
    result = branch_search(h, config)
    wall = time.perf_counter() - t0
    best = result.candidates[0]
    return (
        result.best_energy,
        len(result.candidates),
        1 + len(best.degenerate_with),
        wall,
    )


def _point(entry: CurveEntry, payload) -> CurvePoint:
    energy, n_candidates, degeneracy, wall = payload
    return CurvePoint(
        entry.label,
        entry.parameter,
        energy,
        n_candidates,
        degeneracy,
        dict(entry.reference_energies),
        wall,
    )


def run_curve(
    manifest: CurveManifest,
    config: SearchConfig = SearchConfig(),
    jobs: int = 1,
) -> list[CurvePoint]:
    """Search every entry; points come back in manifest order.

    jobs > 1 fans entries out over worker processes; outputs are still
    collected in manifest order.  The first failing entry aborts the whole
    run with its label attached.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    payloads = []
    if jobs == 1 or len(manifest.entries) == 1:
        for entry in manifest.entries:
            try:
                payloads.append(_entry_payload(str(entry.hamiltonian_path), config))
            except Exception as exc:
                raise CurveError(entry.label, str(exc)) from exc
    else:
        workers = min(jobs, len(manifest.entries))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_entry_payload, str(entry.hamiltonian_path), config)
                for entry in manifest.entries
            ]
            try:
                for entry, fut in zip(manifest.entries, futures):
                    payloads.append(fut.result())
            except Exception as exc:
                pool.shutdown(wait=False, cancel_futures=True)
                raise CurveError(entry.label, str(exc)) from exc
    return [_point(e, p) for e, p in zip(manifest.entries, payloads)]


# -- CSV -----------------------------------------------------------------------


def curve_columns(points) -> list[str]:
    methods = sorted({m for p in points for m in p.references})
    return [*_FIXED_COLUMNS, *methods, _TAIL_COLUMN]


def write_curve_csv(points, path) -> None:
    """Write points as CSV, atomically: no partial file survives a failure.

    Floats use shortest-round-trip formatting so a re-parse is exact.
    """
    path = Path(path)
    columns = curve_columns(points)
    methods = columns[len(_FIXED_COLUMNS) : -1]
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for p in points:
                row = [
                    p.label,
                    repr(float(p.parameter)),
                    repr(float(p.stabilizer_energy)),
                    str(p.degeneracy),
                ]
                row += [
                    repr(float(p.references[m])) if m in p.references else ""
                    for m in methods
                ]
                row.append(repr(float(p.wall_time)))
                writer.writerow(row)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def read_curve_csv(path) -> list[CurvePoint]:
    """Re-parse a curve CSV into CurvePoints.

    The pinned column set does not persist the candidate count, so
    n_candidates comes back as the degeneracy (exact for curves run under
    the enumerate-degenerate policy, where candidates are the tie family).
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("curve CSV is empty")
    header = rows[0]
    if (
        len(header) < len(_FIXED_COLUMNS) + 1
        or tuple(header[: len(_FIXED_COLUMNS)]) != _FIXED_COLUMNS
        or header[-1] != _TAIL_COLUMN
    ):
        raise ParseError(f"curve CSV header does not match the schema: {header}")
    methods = header[len(_FIXED_COLUMNS) : -1]
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError("wrong number of columns", lineno)
        try:
            refs = {m: float(v) for m, v in zip(methods, row[4:-1]) if v != ""}
            degeneracy = int(row[3])
            points.append(
                CurvePoint(
                    row[0],
                    float(row[1]),
                    float(row[2]),
                    degeneracy,
                    degeneracy,
                    refs,
                    float(row[-1]),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return points
