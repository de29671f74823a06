#!/usr/bin/env python3
"""Benzene ring opening into six CH radicals: C-C stretched, C-H fixed.

Only the C-C hexagon is stretched; each C keeps its hydrogen at the
equilibrium bond length, so the fragments are CH radicals.  The asymptote is
six times the CH-radical FCI total.  References are skipped: FCI is far out
of reach at this size and restricted HF is not meaningful mid-dissociation.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from _curves import emit_scan, print_table, run_search

from stabchem import MoleculeSpec, benzene_spec
from stabchem.molecules import BENZENE_CH_EQUILIBRIUM
from stabchem.pipeline import fci_total, solve_point


def ch_radical_limit() -> float:
    spec = MoleculeSpec(
        name="ch",
        geometry=(("C", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, BENZENE_CH_EQUILIBRIUM))),
        multiplicity=2,
    )
    point = solve_point(spec)
    return 6.0 * fci_total(point, spec.multiplicity).energy


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("out/fig3_huckel"))
    parser.add_argument(
        "--values", type=float, nargs="+", help="C-C lengths (angstrom)"
    )
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--threshold", type=float, default=1e-8)
    parser.add_argument("--prune", type=float, default=1e-6)
    args = parser.parse_args()

    spec = benzene_spec(uniform=False)
    values = tuple(args.values) if args.values else spec.scan.values
    manifest = emit_scan(spec, args.out_dir, values, args.threshold, with_references=False)
    csv_path = run_search(
        manifest, ["--prune", str(args.prune), "--hillclimb"], jobs=args.jobs
    )
    print_table(csv_path, asymptote=ch_radical_limit(), label="6 x CH (FCI)")


if __name__ == "__main__":
    main()
