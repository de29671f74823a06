"""Command-line surface: point, generate, references, scan.

Deterministic output on stdout, progress on stderr.  Exit codes match the
downstream search tool: 0 success, 1 usage, 2 parse or unreadable input,
3 capacity overrun, 4 internal failure (including non-convergence).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, pipeline
from .errors import CapacityError, ConvergenceError, ParseError, ScfError
from .jw import EMISSION_THRESHOLD
from .molecules import BUILTIN_SPECS, MoleculeSpec, Scan, load_molecule
from .references import ReferenceRow, ReferenceTable, write_references

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INTERNAL = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; 2 is reserved for input-file parse
    # failures here, so usage problems are re-raised instead
    def error(self, message):
        raise _UsageError(message)


def _load_spec(args) -> MoleculeSpec:
    name = args.molecule
    if name in BUILTIN_SPECS:
        spec = BUILTIN_SPECS[name]()
    else:
        spec = load_molecule(name)
    if getattr(args, "values", None):
        if spec.scan is None:
            raise _UsageError(
                f"--values given but {name!r} has no scan parametrization"
            )
        spec = MoleculeSpec(
            name=spec.name,
            geometry=spec.geometry,
            basis=spec.basis,
            charge=spec.charge,
            multiplicity=spec.multiplicity,
            scan=Scan(spec.scan.name, tuple(args.values)),
            metadata=spec.metadata,
        )
    return spec


def _fci_limit(args) -> int | None:
    return args.fci_limit if args.fci_limit > 0 else None


def _fmt(energy: float | None) -> str:
    return "-" if energy is None else f"{energy:.9f}"


# -- commands ------------------------------------------------------------------


def cmd_point(args) -> int:
    spec = _load_spec(args)
    hf, ccsd_e, fci_e, note = pipeline.compute_point(
        spec, args.value, fci_limit=_fci_limit(args), with_ccsd=not args.no_ccsd
    )
    where = f" at {args.value:g}" if args.value is not None else ""
    print(f"{spec.name}{where}  HF {_fmt(hf)}  CCSD {_fmt(ccsd_e)}  FCI {_fmt(fci_e)}")
    if note:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = _load_spec(args)
    generated = pipeline.generate_hamiltonian(spec, args.value, threshold=args.threshold)
    pipeline.write_generated(args.out, generated)
    if args.hf_state:
        pipeline.write_hf_state(args.hf_state, generated)
    ham = generated.hamiltonian
    print(
        f"wrote {args.out}: {len(ham.terms)} terms on {ham.n_qubits} qubits,"
        f" mean field {generated.scf_result.energy_total:.9f}"
    )
    return EXIT_OK


def cmd_references(args) -> int:
    spec = _load_spec(args)
    table = pipeline.generate_references(
        spec, fci_limit=_fci_limit(args), with_ccsd=not args.no_ccsd
    )
    write_references(args.out, table)
    print(f"wrote {args.out}: {len(table.rows)} rows")
    return EXIT_OK


def cmd_scan(args) -> int:
    spec = _load_spec(args)
    if spec.scan is None:
        raise _UsageError(f"{args.molecule!r} has no scan values; use --values")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or spec.name
    param = spec.scan.name

    entries = []
    rows = []
    for value in spec.scan.values:
        point = pipeline.solve_point(spec, value)
        generated = pipeline.generate_hamiltonian(
            spec, value, threshold=args.threshold, point=point
        )
        ham_name = f"{prefix}_{value:g}.ham"
        pipeline.write_generated(out_dir / ham_name, generated)
        refs: dict[str, float] = {}
        if not args.no_references:
            hf, ccsd_e, fci_e, note = pipeline.compute_point(
                spec,
                value,
                fci_limit=_fci_limit(args),
                with_ccsd=not args.no_ccsd,
                point=point,
            )
            rows.append(
                ReferenceRow(
                    parameter=float(value), hf=hf, ccsd=ccsd_e, fci=fci_e, note=note
                )
            )
            for method, energy in (("HF", hf), ("CCSD", ccsd_e), ("FCI", fci_e)):
                if energy is not None:
                    refs[method] = energy
        entries.append(
            {
                "label": f"{param}={value:g}",
                "parameter": float(value),
                "hamiltonian_path": ham_name,
                "reference_energies": refs,
            }
        )
        print(f"{param}={value:g}: wrote {ham_name}", file=sys.stderr)

    manifest = {
        "version": 1,
        "output_path": f"{prefix}_curve.csv",
        "entries": entries,
    }
    manifest_path = out_dir / f"{prefix}_manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    if not args.no_references:
        write_references(out_dir / f"{prefix}_references.csv", ReferenceTable(tuple(rows)))
    print(f"wrote {manifest_path} with {len(entries)} entries")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, scan_values: bool = False) -> None:
    sp.add_argument(
        "molecule",
        help=f"molecule file, or one of: {', '.join(sorted(BUILTIN_SPECS))}",
    )
    if scan_values:
        sp.add_argument(
            "--values",
            type=float,
            nargs="+",
            metavar="V",
            help="override the scan grid (same parametrization)",
        )


def _add_reference_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--fci-limit",
        type=int,
        default=0,
        metavar="N",
        help="determinant-space cap (0 = built-in default)",
    )
    sp.add_argument(
        "--no-ccsd", action="store_true", help="skip the coupled-cluster column"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="stabchem",
        description="Minimal-basis molecular Hamiltonians and reference curves.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser, metavar="command"
    )

    sp = sub.add_parser("point", help="print HF/CCSD/FCI totals for one geometry")
    _add_common(sp)
    sp.add_argument("--value", type=float, help="scan parameter value (angstrom)")
    _add_reference_flags(sp)
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("generate", help="emit one qubit Hamiltonian file")
    _add_common(sp)
    sp.add_argument("--value", type=float, help="scan parameter value (angstrom)")
    sp.add_argument("--out", required=True, metavar="FILE", help="Hamiltonian path")
    sp.add_argument(
        "--hf-state",
        metavar="FILE",
        help="also write the mean-field determinant as a stabilizer file",
    )
    sp.add_argument(
        "--threshold",
        type=float,
        default=EMISSION_THRESHOLD,
        metavar="EPS",
        help="drop emitted terms with |coefficient| below EPS",
    )
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("references", help="write the HF/CCSD/FCI table for a scan")
    _add_common(sp, scan_values=True)
    sp.add_argument("--out", required=True, metavar="FILE", help="CSV path")
    _add_reference_flags(sp)
    sp.set_defaults(func=cmd_references)

    sp = sub.add_parser(
        "scan", help="emit Hamiltonians, references, and a curve manifest"
    )
    _add_common(sp, scan_values=True)
    sp.add_argument("--out-dir", required=True, metavar="DIR")
    sp.add_argument("--prefix", metavar="NAME", help="file-name prefix (molecule name)")
    sp.add_argument(
        "--threshold",
        type=float,
        default=EMISSION_THRESHOLD,
        metavar="EPS",
        help="drop emitted terms with |coefficient| below EPS",
    )
    sp.add_argument(
        "--no-references", action="store_true", help="emit Hamiltonians only"
    )
    _add_reference_flags(sp)
    sp.set_defaults(func=cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ScfError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - exit-code fence
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
