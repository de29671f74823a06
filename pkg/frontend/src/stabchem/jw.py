"""Jordan-Wigner mapping from molecular integrals to Pauli-sum files.

Qubit layout: one qubit per spin orbital, spin-down orbitals on the low
indices 0..n-1 and spin-up on n..2n-1, so the high (left) half of a
label is the spin-up block.  Ladder operators expand into monomials of
the form X^x Z^z tracked as integer bitmasks; products only ever need
the (-1) swap count from moving Z past X, and the standard Y letters are
recovered at the end through XZ = -iY.

The emitted identity coefficient is the electronic constant plus the
nuclear repulsion, so an exact diagonalization of the file reproduces
the total molecular energy directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EMISSION_THRESHOLD = 1e-12

_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _ladder(index: int, create: bool):
    """(x_mask, z_mask, coeff) monomials of one ladder operator.

    With occupation encoded as |1>, the creator is Z-string (X + XZ)/2
    and the annihilator flips the sign of the XZ part.
    """
    string = (1 << index) - 1
    x = 1 << index
    sign = 0.5 if create else -0.5
    return ((x, string, 0.5), (x, string | x, sign))


def _occupation_label(n_qubits: int, occupied_mask: int) -> list[str]:
    """.stab generator labels pinning one computational basis state."""
    out = []
    for q in range(n_qubits - 1, -1, -1):
        sign = "-" if (occupied_mask >> q) & 1 else "+"
        out.append(sign + "I" * (n_qubits - 1 - q) + "Z" + "I" * q)
    return out


@dataclass(frozen=True)
class QubitHamiltonian:
    n_qubits: int
    terms: dict  # (x_mask, z_mask) -> real coefficient, standard letters

    def label(self, key: tuple[int, int]) -> str:
        x, z = key
        return "".join(
            _LETTER[((x >> q) & 1, (z >> q) & 1)]
            for q in range(self.n_qubits - 1, -1, -1)
        )

    def sorted_items(self):
        items = [(self.label(k), c) for k, c in self.terms.items()]
        items.sort(key=lambda lc: (-abs(lc[1]), lc[0]))
        return items


def jordan_wigner(
    h_mo: np.ndarray,
    eri_mo: np.ndarray,
    constant: float,
    threshold: float = EMISSION_THRESHOLD,
) -> QubitHamiltonian:
    """Map h, (pq|rs), and a scalar onto qubit operators.

    Spin-orbital index of spatial p: p for spin-down, p + n for spin-up.
    """
    n = h_mo.shape[0]
    n_qubits = 2 * n
    acc: dict[tuple[int, int], float] = {}
    if constant:
        acc[(0, 0)] = constant

    creators = [_ladder(i, True) for i in range(n_qubits)]
    annihilators = [_ladder(i, False) for i in range(n_qubits)]

    def add_product(ops, scale):
        # expand a product of ladder operators into XZ monomials
        partial = [(0, 0, scale)]
        for op in ops:
            nxt = []
            for x1, z1, c1 in partial:
                for x2, z2, c2 in op:
                    c = c1 * c2
                    if (z1 & x2).bit_count() & 1:
                        c = -c
                    nxt.append((x1 ^ x2, z1 ^ z2, c))
            partial = nxt
        for x, z, c in partial:
            key = (x, z)
            acc[key] = acc.get(key, 0.0) + c

    tiny = threshold * 1e-3
    for p in range(n):
        for q in range(n):
            value = h_mo[p, q]
            if abs(value) < tiny:
                continue
            for spin in (0, n):
                add_product((creators[p + spin], annihilators[q + spin]), value)

    for p, r, q, s in np.argwhere(np.abs(eri_mo) > tiny):
        value = 0.5 * eri_mo[p, r, q, s]
        for spin1 in (0, n):
            for spin2 in (0, n):
                big_p, big_r = p + spin1, r + spin1
                big_q, big_s = q + spin2, s + spin2
                if big_p == big_q or big_r == big_s:
                    continue  # a+ a+ or a a on one mode vanishes
                add_product(
                    (
                        creators[big_p],
                        creators[big_q],
                        annihilators[big_s],
                        annihilators[big_r],
                    ),
                    value,
                )

    terms: dict[tuple[int, int], float] = {}
    for (x, z), c in acc.items():
        overlap = (x & z).bit_count()
        # XZ = -iY per overlapping bit; Hermiticity forces the result real
        phased = c * (-1j) ** overlap
        if abs(phased.imag) > 1e-8 * max(1.0, abs(phased.real)):
            raise AssertionError(
                f"non-Hermitian accumulation at mask pair ({x:#x}, {z:#x})"
            )
        real = float(phased.real)
        if abs(real) >= threshold:
            terms[(x, z)] = real
    return QubitHamiltonian(n_qubits=n_qubits, terms=terms)


def hartree_fock_mask(n_orbitals: int, n_occupied: int) -> int:
    """Occupation bitmask of the closed-shell determinant."""
    low = (1 << n_occupied) - 1
    return low | (low << n_orbitals)


def write_hamiltonian(path, ham: QubitHamiltonian, meta: dict | None = None) -> None:
    lines = [f"%n_qubits {ham.n_qubits}"]
    for key, value in (meta or {}).items():
        lines.append(f"%meta {key} {value}")
    for label, coeff in ham.sorted_items():
        lines.append(f"{coeff!r} {label}")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")


def write_determinant_stabilizers(path, n_qubits: int, occupied_mask: int, comment: str = "") -> None:
    lines = [f"%n_qubits {n_qubits}"]
    if comment:
        lines.insert(0, f"# {comment}")
    lines.extend(_occupation_label(n_qubits, occupied_mask))
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")
