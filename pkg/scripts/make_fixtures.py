#!/usr/bin/env python3
"""Regenerate the bundled degenerate-chain fixtures.

The H2 fixture files are transcriptions and stay hand-written; this script
rebuilds the synthetic 8-qubit chain (Hamiltonian plus the four stabilizer
sets that tie on it) so the bundled files never drift from synth.chain8_*.
"""

from __future__ import annotations

import argparse
import json
import pathlib

from stabgs import (
    StabilizerTableau,
    exact_ground_energy,
    load_hamiltonian,
    parse_signed_pauli,
    serialize_hamiltonian,
)
from stabgs.synth import chain8_stabilizers, chain8_sum

H2_EQ_GENERATORS = ["+ZIII", "-IZII", "+IIZI", "-IIIZ"]
H2_RESONATING_GENERATORS = ["-ZIZI", "-IZIZ", "-XXYY", "-IIZZ"]

HEADER = {
    "resonating_odd": (
        "Spin-resonating completion with odd down-spin parity: seven shared\n"
        "generators plus -IIIIZZZZ."
    ),
    "resonating_even": (
        "Spin-resonating completion with even down-spin parity: seven shared\n"
        "generators plus +IIIIZZZZ."
    ),
    "polarized_up": "Product state with the four up-spin sites occupied.",
    "polarized_down": "Product state with the four down-spin sites occupied.",
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        type=pathlib.Path,
        default=pathlib.Path(__file__).resolve().parent.parent / "fixtures",
        help="fixture directory (default: repository fixtures/)",
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    h = chain8_sum()
    ham_path = args.out / "chain8.ham"
    ham_path.write_text(
        "# Synthetic 8-site chain, first four characters = up-spin sites.\n"
        "# Balanced so the polarized product states and both spin-resonating\n"
        "# completions share one exact energy; see stabgs.synth.chain8_sum.\n"
        + serialize_hamiltonian(h),
        encoding="utf-8",
    )
    print(f"wrote {ham_path} ({len(h)} terms)")

    for name, gens in chain8_stabilizers().items():
        # sanity: each set must form a full valid tableau
        StabilizerTableau.from_generators(8, [parse_signed_pauli(g) for g in gens])
        path = args.out / f"chain8_{name}.stab"
        comment = "".join(f"# {line}\n" for line in HEADER[name].splitlines())
        body = "\n".join(gens)
        path.write_text(f"{comment}%n_qubits 8\n{body}\n", encoding="utf-8")
        print(f"wrote {path}")

    write_h2_files(args.out)


def write_h2_files(out: pathlib.Path) -> None:
    """Stabilizer files and a two-point curve manifest for the H2 fixtures."""
    stabs = {
        "h2_eq.stab": (
            "# Hartree-Fock configuration |01;01> of the 4-qubit H2 Hamiltonian.",
            H2_EQ_GENERATORS,
        ),
        "h2_resonating.stab": (
            "# Spin-resonating state (|10;01> - |01;10>)/sqrt(2), degenerate with\n"
            "# the polarized products on the stretched (2.80 A) H2 Hamiltonian.",
            H2_RESONATING_GENERATORS,
        ),
    }
    for name, (comment, gens) in stabs.items():
        StabilizerTableau.from_generators(4, [parse_signed_pauli(g) for g in gens])
        path = out / name
        path.write_text(
            f"{comment}\n%n_qubits 4\n" + "\n".join(gens) + "\n", encoding="utf-8"
        )
        print(f"wrote {path}")

    hf = StabilizerTableau.from_generators(4, H2_EQ_GENERATORS)
    entries = []
    for label, parameter, ham in (
        ("d=0.74", 0.74, "h2_d0.74.ham"),
        ("d=2.80", 2.80, "h2_d2.80.ham"),
    ):
        h = load_hamiltonian(out / ham)
        entries.append(
            {
                "label": label,
                "parameter": parameter,
                "hamiltonian_path": ham,
                "reference_energies": {
                    # the bonding orbital is symmetry-pinned in this basis, so
                    # the HF energy is the |01;01> expectation at any distance
                    "HF": round(hf.energy(h), 9),
                    "exact": round(exact_ground_energy(h), 9),
                },
            }
        )
    manifest = {"version": 1, "output_path": "h2_curve.csv", "entries": entries}
    path = out / "h2_curve.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
