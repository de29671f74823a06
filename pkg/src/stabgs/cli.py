"""Command-line surface: energy, search, decode, curve, oracle, prune.

Results go to stdout and are deterministic for fixed inputs and flags;
timing and progress chatter goes to stderr.  Exit codes: 0 success, 1 usage,
2 parse or unreadable input, 3 capacity overrun, 4 internal failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .curves import CurveError, load_manifest, run_curve, write_curve_csv
from .errors import CapacityError, ConvergenceError, ParseError, TableauError
from .oracle import (
    enumerate_stabilizer_energies,
    ground_state_detail,
    stabilizer_state_count,
)
from .pauli import load_hamiltonian, serialize_hamiltonian
from .search import CompletionPolicy, SearchConfig, branch_search
from .tableau import StabilizerTableau, load_stabilizers, serialize_stabilizers

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INTERNAL = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit-code contract reserves 2 for
    # parse failures in input files, so usage problems are re-raised instead
    def error(self, message):
        raise _UsageError(message)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _UsageError(message)


# -- parser ------------------------------------------------------------------


def _add_search_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--tie-tol",
        type=float,
        default=0.0,
        metavar="REL",
        help="relative |coefficient| band treated as tied during the scan",
    )
    sp.add_argument(
        "--beam", type=int, default=8, metavar="K", help="beam width over branches"
    )
    sp.add_argument(
        "--max-results", type=int, default=16, metavar="K", help="candidates to keep"
    )
    sp.add_argument(
        "--enumerate-degenerate",
        action="store_true",
        help="enumerate every sign completion of the final group and keep ties",
    )
    sp.add_argument(
        "--hillclimb",
        action="store_true",
        help="single-generator sign flips after completion",
    )
    sp.add_argument(
        "--prune",
        type=float,
        default=0.0,
        metavar="EPS",
        help="drop terms with |coefficient| < EPS before searching",
    )
    sp.add_argument("--seed", type=int, default=0, help="search RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="stabgs",
        description="Stabilizer-state approximation of Pauli-sum ground states.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser, metavar="command"
    )

    sp = sub.add_parser("energy", help="evaluate one stabilizer state on a Hamiltonian")
    sp.add_argument("hamiltonian", help="Hamiltonian file")
    sp.add_argument("stabilizers", help="stabilizer generator file")
    sp.add_argument(
        "--verbose", action="store_true", help="print each term's expectation"
    )
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("search", help="search for low-energy stabilizer states")
    sp.add_argument("hamiltonian", help="Hamiltonian file")
    _add_search_flags(sp)
    sp.add_argument(
        "--out", metavar="DIR", help="write candidate_NN.stab files into DIR"
    )
    sp.add_argument(
        "--verbose", action="store_true", help="print generators and timing"
    )
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("decode", help="print the ket expansion of a stabilizer state")
    sp.add_argument("stabilizers", help="stabilizer generator file (must have g = n)")
    sp.add_argument(
        "--split",
        type=int,
        metavar="POS",
        help="print a ';' after this many qubits from the right",
    )
    sp.add_argument(
        "--limit",
        type=int,
        default=1024,
        metavar="N",
        help="largest ket support to expand",
    )
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("curve", help="run a manifest of Hamiltonians into a CSV")
    sp.add_argument("manifest", help="curve manifest (JSON)")
    _add_search_flags(sp)
    sp.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel entries")
    sp.add_argument("--out", metavar="PATH", help="override the manifest output_path")
    sp.add_argument(
        "--verbose", action="store_true", help="per-entry progress on stderr"
    )
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("oracle", help="exact diagonalization or brute enumeration")
    sp.add_argument("mode", choices=("exact", "enumerate"))
    sp.add_argument("hamiltonian", help="Hamiltonian file")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("prune", help="drop small terms from a Hamiltonian file")
    sp.add_argument("hamiltonian", help="Hamiltonian file")
    sp.add_argument(
        "--prune",
        type=float,
        required=True,
        metavar="EPS",
        help="drop terms with |coefficient| < EPS",
    )
    sp.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    sp.set_defaults(func=cmd_prune)

    return parser


def _search_config(args) -> SearchConfig:
    _require(0.0 <= args.tie_tol < 1.0, "--tie-tol must be in [0, 1)")
    _require(args.beam >= 1, "--beam must be >= 1")
    _require(args.max_results >= 1, "--max-results must be >= 1")
    _require(args.prune >= 0.0, "--prune must be >= 0")
    policy = (
        CompletionPolicy.ENUMERATE_DEGENERATE
        if args.enumerate_degenerate
        else CompletionPolicy.DIAGONAL_GREEDY
    )
    return SearchConfig(
        tie_tolerance=args.tie_tol,
        beam_width=args.beam,
        max_results=args.max_results,
        completion_policy=policy,
        prune_threshold=args.prune,
        hillclimb=args.hillclimb,
        rng_seed=args.seed,
    )


# -- subcommands ---------------------------------------------------------------


def cmd_energy(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    n, gens = load_stabilizers(args.stabilizers)
    if n != h.n_qubits:
        raise ParseError(
            f"qubit count mismatch: Hamiltonian has {h.n_qubits},"
            f" stabilizer file has {n}"
        )
    t = StabilizerTableau.from_generators(n, gens)
    if args.verbose and len(h):
        vals = t.expectations(h)
        for i in range(len(h)):
            coeff = repr(float(h.coefficients[i]))
            val = f"{int(vals[i]):+d}" if vals[i] else "0"
            print(f"{coeff} {h.string_at(i).label} -> {val}")
    print(f"stabilizer energy: {t.energy(h):.9f}")
    return EXIT_OK


def cmd_search(args) -> int:
    config = _search_config(args)
    h = load_hamiltonian(args.hamiltonian)
    result = branch_search(h, config)
    print(f"candidates: {len(result.candidates)}")
    for i, cand in enumerate(result.candidates, start=1):
        degeneracy = 1 + len(cand.degenerate_with)
        print(f"candidate {i}: energy {cand.energy:.9f} degeneracy {degeneracy}")
        if args.verbose:
            for gen in cand.tableau.generators:
                print(f"  {gen.label}")
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, cand in enumerate(result.candidates, start=1):
            path = out_dir / f"candidate_{i:02d}.stab"
            path.write_text(serialize_stabilizers(cand.tableau), encoding="utf-8")
        print(f"wrote {len(result.candidates)} files to {out_dir}", file=sys.stderr)
    if args.verbose:
        stats = result.stats
        print(
            f"scanned {stats.terms_scanned} positions,"
            f" {stats.branches_explored} branches,"
            f" {stats.wall_time_s:.3f}s",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_decode(args) -> int:
    _require(args.limit >= 1, "--limit must be >= 1")
    n, gens = load_stabilizers(args.stabilizers)
    if args.split is not None:
        _require(0 <= args.split <= n, f"--split must be between 0 and {n}")
    t = StabilizerTableau.from_generators(n, gens)
    decoded = t.decode_state(support_limit=args.limit)
    for line in decoded.ket_strings(split=args.split):
        print(line)
    return EXIT_OK


def cmd_curve(args) -> int:
    config = _search_config(args)
    _require(args.jobs >= 1, "--jobs must be >= 1")
    manifest = load_manifest(args.manifest)
    if args.out is not None:
        manifest = replace(manifest, output_path=Path(args.out))
    points = run_curve(manifest, config, jobs=args.jobs)
    if args.verbose:
        for p in points:
            print(
                f"{p.label}: energy {p.stabilizer_energy:.9f}"
                f" degeneracy {p.degeneracy} ({p.wall_time:.3f}s)",
                file=sys.stderr,
            )
    write_curve_csv(points, manifest.output_path)
    print(f"wrote {manifest.output_path} ({len(points)} points)")
    return EXIT_OK


def cmd_oracle(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    if args.mode == "exact":
        detail = ground_state_detail(h)
        print(f"exact ground energy: {detail.energy:.9f}")
        print(f"residual: {detail.residual:.3e}")
        print(f"iterations: {detail.iterations}")
        print(f"method: {detail.method}")
    else:
        best, argmin = enumerate_stabilizer_energies(h)
        print(f"minimum stabilizer energy: {best:.9f}")
        print(f"degenerate minima: {len(argmin)}")
        print(f"states scanned: {stabilizer_state_count(h.n_qubits)}")
    return EXIT_OK


def cmd_prune(args) -> int:
    _require(args.prune >= 0.0, "--prune must be >= 0")
    h = load_hamiltonian(args.hamiltonian)
    kept = h.prune(args.prune)
    text = serialize_hamiltonian(kept)
    if args.out is not None:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"kept {len(kept)} of {len(h)} terms -> {args.out}")
    else:
        sys.stdout.write(text)
        print(f"kept {len(kept)} of {len(h)} terms", file=sys.stderr)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


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
    except CurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        cause = exc.__cause__
        if isinstance(cause, (ParseError, TableauError, OSError)):
            return EXIT_PARSE
        if isinstance(cause, CapacityError):
            return EXIT_CAPACITY
        return EXIT_INTERNAL
    except (ParseError, TableauError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConvergenceError as exc:
        print(
            f"error: {exc} (best estimate {exc.best_estimate:.9f},"
            f" residual {exc.residual:.3e})",
            file=sys.stderr,
        )
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - exit-code fence
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
