"""Shared plumbing for the figure scripts.

Each script emits Hamiltonian files plus a curve manifest through stabchem,
then drives the stabilizer search strictly through the `stabgs` command
line, and finally prints the merged table.  Nothing here imports the search
package.
"""

from __future__ import annotations

import csv
import shutil
import subprocess
import sys
from pathlib import Path

from stabchem import MoleculeSpec, ReferenceRow, ReferenceTable, write_references
from stabchem.pipeline import (
    compute_point,
    generate_hamiltonian,
    solve_point,
    write_generated,
)


def require_stabgs() -> str:
    exe = shutil.which("stabgs")
    if exe is None:
        sys.exit("stabgs not found on PATH; install the search package first")
    return exe


def emit_scan(
    spec: MoleculeSpec,
    out_dir: Path,
    values,
    threshold: float,
    with_references: bool = True,
    with_ccsd: bool = True,
    fci_limit: int | None = None,
) -> Path:
    """Write per-point .ham files, references CSV, and the manifest."""
    import json

    out_dir.mkdir(parents=True, exist_ok=True)
    param = spec.scan.name
    entries = []
    rows = []
    for value in values:
        point = solve_point(spec, value)
        generated = generate_hamiltonian(spec, value, threshold=threshold, point=point)
        ham_name = f"{spec.name}_{value:g}.ham"
        write_generated(out_dir / ham_name, generated)
        refs = {}
        if with_references:
            hf, ccsd_e, fci_e, note = compute_point(
                spec, value, fci_limit=fci_limit, with_ccsd=with_ccsd, point=point
            )
            rows.append(ReferenceRow(float(value), hf, ccsd_e, fci_e, note))
            refs = {
                m: e
                for m, e in (("HF", hf), ("CCSD", ccsd_e), ("FCI", fci_e))
                if e is not None
            }
        entries.append(
            {
                "label": f"{param}={value:g}",
                "parameter": float(value),
                "hamiltonian_path": ham_name,
                "reference_energies": refs,
            }
        )
        print(f"  {param}={value:g}: {ham_name}", file=sys.stderr)
    manifest_path = out_dir / f"{spec.name}_manifest.json"
    manifest_path.write_text(
        json.dumps(
            {
                "version": 1,
                "output_path": f"{spec.name}_curve.csv",
                "entries": entries,
            },
            indent=1,
        )
        + "\n"
    )
    if rows:
        write_references(out_dir / f"{spec.name}_references.csv", ReferenceTable(tuple(rows)))
    return manifest_path


def run_search(manifest_path: Path, flags: list[str], jobs: int = 1) -> Path:
    """Invoke `stabgs curve` on a manifest; returns the output CSV path."""
    cmd = [require_stabgs(), "curve", str(manifest_path), "--jobs", str(jobs), *flags]
    print("+ " + " ".join(cmd), file=sys.stderr)
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"stabgs failed ({proc.returncode}):\n{proc.stderr}")
    import json

    doc = json.loads(manifest_path.read_text())
    return manifest_path.parent / doc["output_path"]


def read_curve(csv_path: Path) -> tuple[list[str], list[dict]]:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)


def print_table(csv_path: Path, asymptote: float | None = None, label: str = "") -> None:
    columns, rows = read_curve(csv_path)
    methods = [c for c in columns if c in ("HF", "CCSD", "FCI")]
    header = ["parameter", "stabilizer", "deg"] + methods
    if asymptote is not None:
        header.append("stab-asym")
    print("  ".join(f"{h:>12}" for h in header))
    for row in rows:
        cells = [
            f"{float(row['parameter']):>12.4f}",
            f"{float(row['stabilizer_energy']):>12.6f}",
            f"{int(row['degeneracy']):>12d}",
        ]
        for m in methods:
            cells.append(f"{float(row[m]):>12.6f}" if row[m] else " " * 12)
        if asymptote is not None:
            cells.append(f"{float(row['stabilizer_energy']) - asymptote:>12.6f}")
        print("  ".join(cells))
    if asymptote is not None:
        print(f"{label or 'asymptote'}: {asymptote:.6f}")
