#!/usr/bin/env python3
"""H2 dissociation: stabilizer curve against HF/CCSD/FCI references.

Emits one Hamiltonian per bond length, runs the stabilizer search over the
whole set, and prints the merged table.  Near equilibrium the stabilizer
point sits exactly on HF; past ~2 A it tracks FCI closely while HF drifts.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from _curves import emit_scan, print_table, run_search

from stabchem import h2_spec


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("out/fig1_h2"))
    parser.add_argument(
        "--values", type=float, nargs="+", help="bond lengths (angstrom)"
    )
    parser.add_argument("--jobs", type=int, default=2)
    parser.add_argument("--tie-tol", type=float, default=0.05)
    parser.add_argument("--threshold", type=float, default=1e-12)
    args = parser.parse_args()

    spec = h2_spec()
    values = tuple(args.values) if args.values else spec.scan.values
    manifest = emit_scan(spec, args.out_dir, values, args.threshold)
    csv_path = run_search(
        manifest,
        ["--tie-tol", str(args.tie_tol), "--enumerate-degenerate", "--hillclimb"],
        jobs=args.jobs,
    )
    print_table(csv_path)


if __name__ == "__main__":
    main()
