"""Synthetic fixtures: a benzene-scale benchmark and a degenerate 8-qubit chain.

benchmark_sum builds the large performance Hamiltonian directly in packed
form, so generation stays in the seconds range even at 2.5M terms.  chain8
is a small hand-balanced Hamiltonian whose ground family contains both
fully spin-polarized product states and a doubly degenerate spin-resonating
pair, all at exactly the same energy; it exercises the same degeneracy
bookkeeping as stretched-molecule chemistry without needing any integrals.
"""

from __future__ import annotations

import math

import numpy as np

from .pauli import PauliSum, _n_words

__all__ = [
    "benchmark_sum",
    "chain8_sum",
    "chain8_stabilizers",
]

_WORD_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


def benchmark_sum(
    n_qubits: int = 72, n_terms: int = 2_500_000, seed: int = 7
) -> PauliSum:
    """Seeded molecular-shaped Hamiltonian at benchmark scale.

    Mimics the term-weight profile of a Jordan-Wigner molecular operator on
    a closed-shell system: one constant, spin-degenerate one-body diagonal
    (Z), two-body diagonal on every qubit pair (ZZ), same-spin hopping
    strings (XZ..ZX / YZ..ZY), and a heavy-tailed bulk of 4-local
    two-electron strings with parity chains whose magnitudes are log-normal
    (median 1e-5, most of the sum far below the diagonal scale).  The
    layout puts one spin block in the high qubits, its partner in the low
    qubits.  Fully deterministic for a given seed; terms are unique by
    construction so no merge pass is needed.
    """
    if n_qubits < 4 or n_qubits % 2:
        raise ValueError("need an even qubit count >= 4 for the spin-paired layout")
    half = n_qubits // 2
    rng = np.random.default_rng(seed)
    structured = _structured_terms(n_qubits, half, rng)
    if n_terms < len(structured):
        raise ValueError(
            f"n_terms >= {len(structured)} needed for the structured families"
        )
    core = PauliSum(n_qubits, structured)
    need = n_terms - len(core)
    # 16 letter choices per 4-position support; cap at half the space so
    # rejection sampling of unique strings stays fast
    capacity = math.comb(n_qubits, 4) * 16
    if need > capacity // 2:
        raise ValueError(
            f"n_terms too large for {n_qubits} qubits: needs {need} unique "
            f"4-local strings, half-capacity is {capacity // 2}"
        )
    xw, zw, coeffs = _bulk_terms(n_qubits, need, rng)
    return PauliSum.from_packed(
        n_qubits,
        np.concatenate([core.x_words, xw]),
        np.concatenate([core.z_words, zw]),
        np.concatenate([core.coefficients, coeffs]),
        metadata={"kind": "synthetic-benchmark", "seed": str(seed)},
        merge=False,
    )


def _structured_terms(n_qubits: int, half: int, rng) -> list[tuple[float, str]]:
    terms: list[tuple[float, str]] = []
    # constant stands in for nuclear repulsion plus frozen-core energy
    terms.append((float(rng.normal(120.0, 10.0)), "I" * n_qubits))

    # one-body diagonal, exact alpha/beta degeneracy
    orbital = rng.normal(-0.6, 1.1, size=half)
    for a in range(half):
        for q in (a, a + half):
            terms.append((float(orbital[a]), _letters(n_qubits, {q: "Z"})))

    # two-body diagonal: Coulomb minus exchange within a spin block,
    # bare Coulomb across blocks
    coul = np.abs(rng.normal(0.10, 0.05, size=(half, half)))
    coul = (coul + coul.T) / 2.0
    exch = np.abs(rng.normal(0.04, 0.02, size=(half, half)))
    exch = (exch + exch.T) / 2.0
    for a in range(half):
        for b in range(a + 1, half):
            c = float(coul[a, b] - exch[a, b])
            terms.append((c, _letters(n_qubits, {a: "Z", b: "Z"})))
            terms.append((c, _letters(n_qubits, {a + half: "Z", b + half: "Z"})))
    for a in range(half):
        for b in range(half):
            terms.append(
                (float(coul[a, b]), _letters(n_qubits, {a: "Z", b + half: "Z"}))
            )

    # same-spin hops with parity chains, one amplitude per orbital pair
    for a in range(half):
        for b in range(a + 1, half):
            t = float(rng.normal(0.0, 0.03))
            chain = {q: "Z" for q in range(a + 1, b)}
            for off in (0, half):
                for letter in ("X", "Y"):
                    assign = dict(
                        [(a + off, letter), (b + off, letter)]
                        + [(q + off, "Z") for q in chain]
                    )
                    terms.append((t, _letters(n_qubits, assign)))
    return terms


def _letters(n_qubits: int, assign: dict[int, str]) -> str:
    chars = ["I"] * n_qubits
    for qubit, letter in assign.items():
        chars[n_qubits - 1 - qubit] = letter
    return "".join(chars)


def _bulk_terms(n_qubits: int, need: int, rng):
    """Unique 4-local strings with parity chains and log-normal weights."""
    W = _n_words(n_qubits)
    xw = np.zeros((0, W), dtype=np.uint64)
    zw = np.zeros((0, W), dtype=np.uint64)
    coeffs = np.zeros(0)
    seen = np.zeros((0, 2 * W), dtype=np.uint64)
    while len(coeffs) < need:
        batch = max(1024, int((need - len(coeffs)) * 1.15))
        bx, bz, bc = _bulk_batch(n_qubits, batch, rng)
        rows = np.concatenate([seen, np.concatenate([bx, bz], axis=1)])
        _, first = np.unique(rows, axis=0, return_index=True)
        keep = np.sort(first[first >= len(seen)]) - len(seen)
        xw = np.concatenate([xw, bx[keep]])
        zw = np.concatenate([zw, bz[keep]])
        coeffs = np.concatenate([coeffs, bc[keep]])
        seen = np.concatenate([seen, np.concatenate([bx[keep], bz[keep]], axis=1)])
    return xw[:need], zw[:need], coeffs[:need]


def _bulk_batch(n_qubits: int, batch: int, rng):
    W = _n_words(n_qubits)
    cols = rng.integers(0, n_qubits, size=(batch, 4), dtype=np.int64)
    while True:
        cols.sort(axis=1)
        bad = (cols[:, :-1] == cols[:, 1:]).any(axis=1)
        if not bad.any():
            break
        cols[bad] = rng.integers(0, n_qubits, size=(int(bad.sum()), 4), dtype=np.int64)
    ybit = rng.integers(0, 2, size=(batch, 4), dtype=np.uint64)

    xw = np.zeros((batch, W), dtype=np.uint64)
    zw = np.zeros((batch, W), dtype=np.uint64)
    rows = np.arange(batch)
    for j in range(4):
        word = cols[:, j] >> 6
        bit = np.uint64(1) << (cols[:, j] & 63).astype(np.uint64)
        xw[rows, word] |= bit
        zw[rows, word] |= bit * ybit[:, j]
    zw |= _range_words(cols[:, 0] + 1, cols[:, 1], W)
    zw |= _range_words(cols[:, 2] + 1, cols[:, 3], W)

    mag = rng.lognormal(mean=np.log(1e-5), sigma=2.8, size=batch)
    sign = rng.integers(0, 2, size=batch) * 2.0 - 1.0
    return xw, zw, sign * mag


def _range_words(lo: np.ndarray, hi: np.ndarray, n_words: int) -> np.ndarray:
    """Per-row bit masks with bits [lo, hi) set, little-endian words."""
    out = np.zeros((len(lo), n_words), dtype=np.uint64)
    one = np.uint64(1)
    for w in range(n_words):
        lo_c = np.clip(lo - 64 * w, 0, 64).astype(np.uint64)
        hi_c = np.clip(hi - 64 * w, 0, 64).astype(np.uint64)
        # shift counts clamped to 63 to stay defined; ==64 handled by where
        hi_mask = np.where(
            hi_c >= 64, _WORD_FULL, (one << np.minimum(hi_c, np.uint64(63))) - one
        )
        lo_mask = np.where(
            lo_c >= 64, _WORD_FULL, (one << np.minimum(lo_c, np.uint64(63))) - one
        )
        out[:, w] = hi_mask & ~lo_mask
    return out


# -- degenerate 8-qubit chain -------------------------------------------------

_CHAIN8_SHARED = [
    "-ZIIIZIII",
    "-IZIIIZII",
    "-IIZIIIZI",
    "-IIIZIIIZ",
    "-XXIIYYII",
    "-IXXIIYYI",
    "-IIXXIIYY",
]


def chain8_sum() -> PauliSum:
    """8-qubit fixture with an exactly degenerate ground family.

    Label layout: first four characters are the up-spin sites, last four
    their down-spin partners.  Families: aligned cross-spin couplings J on
    the four (up_k, down_k) ZZ pairs, exchange K on the three bond strings
    XX..YY matching the resonating generators, same-spin repulsion V on all
    six ZZ pairs per block, cross-spin repulsion J' on the twelve
    non-aligned ZZ pairs, plus spin-mirrored singles and XX hops that have
    zero expectation in every target state.

    Balance: the polarized product states see +12V - 12J' where the
    resonating pair sees -3K instead, and both see -sum(J); with
    J' = V + K/4 all four energies coincide exactly, and the +-ZZZZ
    completion sign never matters because no term touches the coset it
    selects.
    """
    j_aligned = [0.1220, 0.1215, 0.1210, 0.1205]
    k_exchange = 0.0730
    v_same = 0.0470
    j_cross = v_same + k_exchange / 4.0
    singles = [0.0480, 0.0465, 0.0450, 0.0435]
    hops = [0.0310, 0.0305, 0.0300]

    terms: list[tuple[float, str]] = [(-73.643, "IIIIIIII")]
    for k in range(4):
        terms.append((j_aligned[k], _pos_label({k: "Z", k + 4: "Z"})))
        terms.append((singles[k], _pos_label({k: "Z"})))
        terms.append((singles[k], _pos_label({k + 4: "Z"})))
    for k in range(3):
        terms.append(
            (k_exchange, _pos_label({k: "X", k + 1: "X", k + 4: "Y", k + 5: "Y"}))
        )
        terms.append((hops[k], _pos_label({k: "X", k + 1: "X"})))
        terms.append((hops[k], _pos_label({k + 4: "X", k + 5: "X"})))
    for a in range(4):
        for b in range(a + 1, 4):
            terms.append((v_same, _pos_label({a: "Z", b: "Z"})))
            terms.append((v_same, _pos_label({a + 4: "Z", b + 4: "Z"})))
    for a in range(4):
        for b in range(4):
            if a != b:
                terms.append((j_cross, _pos_label({a: "Z", b + 4: "Z"})))
    return PauliSum(8, terms, metadata={"kind": "degenerate-chain"})


def chain8_stabilizers() -> dict[str, list[str]]:
    """Four signed generator sets that tie exactly on chain8_sum().

    The two resonating sets share seven generators and differ only in the
    sign of the diagonal ZZZZ completion that lifts their double
    degeneracy; the two polarized sets are the product states with all
    four electrons in one spin block.
    """
    up = []
    down = []
    for k in range(4):
        up.append("-" + _pos_label({k: "Z"}))
        up.append("+" + _pos_label({k + 4: "Z"}))
        down.append("+" + _pos_label({k: "Z"}))
        down.append("-" + _pos_label({k + 4: "Z"}))
    return {
        "resonating_odd": _CHAIN8_SHARED + ["-IIIIZZZZ"],
        "resonating_even": _CHAIN8_SHARED + ["+IIIIZZZZ"],
        "polarized_up": up,
        "polarized_down": down,
    }


def _pos_label(assign: dict[int, str], n: int = 8) -> str:
    """Label from leftmost-position assignments (position 0 = first char)."""
    chars = ["I"] * n
    for pos, letter in assign.items():
        chars[pos] = letter
    return "".join(chars)
