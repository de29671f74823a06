#!/usr/bin/env python3
"""Water symmetric O-H stretch: stabilizer curve with its dissociation limit.

Both O-H bonds stretch together at a fixed angle.  The dissociation limit is
O + 2H computed per atom with FCI; the stabilizer curve should flatten onto
it within a few hundredths of a hartree by 4 A.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from _curves import emit_scan, print_table, run_search

from stabchem import atom_spec, water_spec
from stabchem.pipeline import fci_total, solve_point


def dissociation_limit() -> float:
    total = 0.0
    for element, count in (("O", 1), ("H", 2)):
        spec = atom_spec(element)
        point = solve_point(spec)
        total += count * fci_total(point, spec.multiplicity).energy
    return total


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("out/fig2_h2o"))
    parser.add_argument(
        "--values", type=float, nargs="+", help="O-H lengths (angstrom)"
    )
    parser.add_argument("--jobs", type=int, default=2)
    parser.add_argument("--tie-tol", type=float, default=0.05)
    parser.add_argument("--threshold", type=float, default=1e-12)
    args = parser.parse_args()

    spec = water_spec()
    values = tuple(args.values) if args.values else spec.scan.values
    manifest = emit_scan(spec, args.out_dir, values, args.threshold)
    csv_path = run_search(
        manifest,
        ["--tie-tol", str(args.tie_tol), "--enumerate-degenerate", "--hillclimb"],
        jobs=args.jobs,
    )
    print_table(csv_path, asymptote=dissociation_limit(), label="O + 2H (FCI)")


if __name__ == "__main__":
    main()
