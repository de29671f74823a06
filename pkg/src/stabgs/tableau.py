"""Stabilizer tableaux: signed commuting generator sets with exact phases.

Internally every generator is a row (x, z, ph) in X/Z-factored form,

    operator = i**ph * (tensor_q X^x_q) * (tensor_q Z^z_q),

so the row product needs only XORs plus one popcount for the phase:
(r*s).ph = r.ph + s.ph + 2*popcount(r.z & s.x).  A row is a valid signed
Hermitian Pauli iff ph and popcount(x & z) have equal parity.

The row list is kept in reduced row-echelon form over the symplectic GF(2)
matrix at all times (columns ordered X-block then Z-block, qubit n-1 first
within each block), which makes the generator set canonical: two tableaux
describe the same signed group iff their row lists are identical.  X-pivot
rows sort before pure-Z rows, which is what state decoding needs.

Scalar queries run on Python ints; Hamiltonian-sized evaluation uses the
word-packed numpy kernels at the bottom (one pass per row over the packed
term arrays).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import CapacityError, DefectError, ParseError, TableauError
from .pauli import (
    PauliString,
    PauliSum,
    _int_to_words,
    _n_words,
    _words_to_int,
    parse_pauli,
)

__all__ = [
    "AddOutcome",
    "SignedPauli",
    "StabilizerTableau",
    "DecodedState",
    "parse_signed_pauli",
    "parse_stabilizers",
    "load_stabilizers",
    "serialize_stabilizers",
]


class AddOutcome(Enum):
    ADDED = "added"
    DEPENDENT_CONSISTENT = "dependent-consistent"
    DEPENDENT_CONFLICT = "dependent-conflict"
    ANTICOMMUTES = "anticommutes"


@dataclass(frozen=True)
class SignedPauli:
    """A +-1 sign attached to a bare Hermitian Pauli string."""

    sign: int
    string: PauliString

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.string.phase_exp != 0:
            raise ValueError("string must be phase-normalized (phase_exp 0)")

    @property
    def n_qubits(self) -> int:
        return self.string.n_qubits

    @property
    def label(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.string.label

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SignedPauli({self.label})"


def parse_signed_pauli(text: str, n_qubits: int | None = None) -> SignedPauli:
    """Parse `<+|-><pauli-string>`; a missing sign reads as +."""
    text = text.strip()
    if not text:
        raise ParseError("empty stabilizer")
    sign = 1
    if text[0] in "+-":
        sign = 1 if text[0] == "+" else -1
        text = text[1:]
    return SignedPauli(sign, parse_pauli(text, n_qubits))


class _Row(NamedTuple):
    x: int
    z: int
    ph: int  # mod 4; operator = i**ph X^x Z^z
    pivot: int  # column index, X block [0, n) then Z block [n, 2n)


def _row_mul(a: _Row | tuple, bx: int, bz: int, bph: int) -> tuple[int, int, int]:
    """(a * b) as (x, z, ph); a acts on the left."""
    return a[0] ^ bx, a[1] ^ bz, (a[2] + bph + 2 * (a[1] & bx).bit_count()) & 3


def _pivot_of(n: int, x: int, z: int) -> int:
    """First nonzero column: X block scanned qubit n-1 down, then Z block."""
    for q in range(n - 1, -1, -1):
        if (x >> q) & 1:
            return n - 1 - q
    for q in range(n - 1, -1, -1):
        if (z >> q) & 1:
            return 2 * n - 1 - q
    raise ValueError("identity row has no pivot")


def _col_bit(n: int, x: int, z: int, col: int) -> int:
    if col < n:
        return (x >> (n - 1 - col)) & 1
    return (z >> (2 * n - 1 - col)) & 1


GeneratorLike = Union[SignedPauli, PauliString, str]


class StabilizerTableau:
    """Mutable set of signed commuting independent Pauli generators.

    The stored generator list is always the canonical reduced row-echelon
    form of the group, so `generators` after equivalent insertion sequences
    compare equal.  Copy before branching; try_add mutates in place.
    """

    __slots__ = ("n_qubits", "rows", "_packed_cache")

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
        self.n_qubits = n_qubits
        self.rows: list[_Row] = []
        self._packed_cache = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_generators(
        cls, n_qubits: int, generators: Iterable[GeneratorLike]
    ) -> "StabilizerTableau":
        """Build from generators, failing loudly on invalid input.

        Raises:
            TableauError: naming the offending pair on anticommutation, or
                the dependent entry (with consistency) otherwise.
        """
        t = cls(n_qubits)
        accepted: list[SignedPauli] = []
        for idx, item in enumerate(generators, start=1):
            sp = _as_signed(item, n_qubits)
            if sp.string.is_identity:
                raise TableauError(f"generator {idx} is the identity")
            outcome = t.try_add(sp)
            if outcome is AddOutcome.ANTICOMMUTES:
                other = next(
                    i
                    for i, prev in enumerate(accepted, start=1)
                    if not prev.string.commutes_with(sp.string)
                )
                raise TableauError(
                    f"generators {other} and {idx} anticommute "
                    f"({accepted[other - 1].label} vs {sp.label})"
                )
            if outcome is AddOutcome.DEPENDENT_CONFLICT:
                raise TableauError(
                    f"generator {idx} ({sp.label}) contradicts the sign implied "
                    f"by the earlier generators"
                )
            if outcome is AddOutcome.DEPENDENT_CONSISTENT:
                raise TableauError(
                    f"generator {idx} ({sp.label}) is a product of earlier "
                    f"generators"
                )
            accepted.append(sp)
        return t

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n_qubits = self.n_qubits
        t.rows = list(self.rows)
        t._packed_cache = self._packed_cache
        return t

    # -- basic views ---------------------------------------------------------

    @property
    def g(self) -> int:
        return len(self.rows)

    @property
    def is_complete(self) -> bool:
        return len(self.rows) == self.n_qubits

    @property
    def generators(self) -> list[SignedPauli]:
        """Canonical generator set (reduced row-echelon, signs propagated)."""
        return [self._row_to_signed(r) for r in self.rows]

    def _row_to_signed(self, r: _Row) -> SignedPauli:
        y = (r.x & r.z).bit_count()
        rel = (r.ph - y) & 3
        if rel & 1:
            raise DefectError(f"non-Hermitian row phase i**{r.ph}")
        return SignedPauli(1 if rel == 0 else -1, PauliString(self.n_qubits, r.x, r.z, 0))

    def key(self) -> tuple:
        """Hashable canonical identity of the signed group."""
        return (self.n_qubits, tuple((r.x, r.z, r.ph) for r in self.rows))

    def canonicalize(self) -> "StabilizerTableau":
        """The canonical form (maintained incrementally, so: a copy)."""
        return self.copy()

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerTableau):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = ", ".join(sp.label for sp in self.generators)
        return f"StabilizerTableau(n={self.n_qubits}, [{body}])"

    # -- mutation ------------------------------------------------------------

    def try_add(self, candidate: GeneratorLike) -> AddOutcome:
        """Attempt to extend the group by a signed Pauli.

        Anticommuting or dependent candidates leave the tableau unchanged;
        an independent commuting candidate is folded into the reduced
        row-echelon rows.
        """
        sp = _as_signed(candidate, self.n_qubits)
        if sp.string.is_identity:
            raise ValueError("the identity cannot be a generator")
        cx, cz = sp.string.x_bits, sp.string.z_bits
        for r in self.rows:
            if ((r.x & cz).bit_count() + (r.z & cx).bit_count()) & 1:
                return AddOutcome.ANTICOMMUTES
        y = (cx & cz).bit_count()
        ph = (y + (0 if sp.sign > 0 else 2)) & 3
        cx, cz, ph = self._reduce(cx, cz, ph)
        if cx == 0 and cz == 0:
            if ph == 0:
                return AddOutcome.DEPENDENT_CONSISTENT
            if ph == 2:
                return AddOutcome.DEPENDENT_CONFLICT
            raise DefectError(f"reduction of {sp.label} left phase i**{ph}")
        self._insert_row(cx, cz, ph)
        return AddOutcome.ADDED

    def _reduce(self, x: int, z: int, ph: int) -> tuple[int, int, int]:
        """Left-multiply pivot rows onto (x, z, ph) until no pivot bit is set."""
        for r in self.rows:
            if _col_bit(self.n_qubits, x, z, r.pivot):
                x, z, ph = _row_mul(r, x, z, ph)
        return x, z, ph

    def _insert_row(self, x: int, z: int, ph: int) -> None:
        pivot = _pivot_of(self.n_qubits, x, z)
        new = _Row(x, z, ph, pivot)
        # clear the new pivot column from every existing row
        updated = []
        for r in self.rows:
            if _col_bit(self.n_qubits, r.x, r.z, pivot):
                nx, nz, nph = _row_mul(new, r.x, r.z, r.ph)
                updated.append(_Row(nx, nz, nph, r.pivot))
            else:
                updated.append(r)
        updated.append(new)
        updated.sort(key=lambda r: r.pivot)
        self.rows = updated
        self._packed_cache = None

    # -- queries -------------------------------------------------------------

    def membership_sign(self, p: PauliString) -> int | None:
        """+1/-1 if p is (minus) a group element, None if not in the group."""
        if p.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        if p.phase_exp not in (0, 2):
            raise ValueError("membership is defined for Hermitian +-1 strings")
        y = p.y_count
        x, z, ph = self._reduce(p.x_bits, p.z_bits, (y + p.phase_exp) & 3)
        if x or z:
            return None
        if ph & 1:
            raise DefectError(f"membership reduction left phase i**{ph}")
        return 1 if ph == 0 else -1

    def expectation(self, p: PauliString) -> int:
        """Eigenvalue substitution: +-1 for group members, else 0.

        0 covers both anticommuting strings and centralizer elements
        outside the group (uniform-mixture semantics for partial tableaux).
        """
        if p.is_identity:
            return 1 if p.phase_exp == 0 else -1
        for r in self.rows:
            if ((r.x & p.z_bits).bit_count() + (r.z & p.x_bits).bit_count()) & 1:
                return 0
        s = self.membership_sign(p)
        return 0 if s is None else s

    def energy(self, h: PauliSum) -> float:
        """Sum of coefficient * expectation over all terms."""
        if h.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        if len(h) == 0:
            return 0.0
        vals = self.expectations(h)
        return float(np.dot(h.coefficients, vals))

    def expectations(self, h: PauliSum) -> np.ndarray:
        """Per-term expectation values (int8 array of -1/0/+1)."""
        if h.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        if len(h) == 0:
            return np.zeros(0, dtype=np.int8)
        anti, in_group, ph = self._reduce_packed(h.x_words, h.z_words)
        vals = np.zeros(len(h), dtype=np.int8)
        member = in_group & ~anti
        if (ph[member] & 1).any():
            raise DefectError("packed reduction left an imaginary phase")
        vals[member] = 1 - (ph[member] & 2)
        return vals

    # -- packed kernels ------------------------------------------------------

    def _packed_rows(self):
        """Rows as uint64 word arrays plus pivot word/bit indices."""
        if self._packed_cache is None:
            n = self.n_qubits
            W = _n_words(n)
            g = len(self.rows)
            rx = np.zeros((g, W), dtype=np.uint64)
            rz = np.zeros((g, W), dtype=np.uint64)
            rph = np.zeros(g, dtype=np.int64)
            piv = []
            for i, r in enumerate(self.rows):
                rx[i] = _int_to_words(r.x, W)
                rz[i] = _int_to_words(r.z, W)
                rph[i] = r.ph
                q = (n - 1 - r.pivot) if r.pivot < n else (2 * n - 1 - r.pivot)
                piv.append((r.pivot < n, q // 64, np.uint64(q % 64)))
            self._packed_cache = (rx, rz, rph, piv)
        return self._packed_cache

    def anticommutation_mask(self, xw: np.ndarray, zw: np.ndarray) -> np.ndarray:
        """Boolean (m,) mask: term anticommutes with >= 1 generator."""
        m = len(xw)
        anti = np.zeros(m, dtype=bool)
        rx, rz, _, _ = self._packed_rows()
        for i in range(len(rx)):
            par = _parity_words(xw & rz[i]) ^ _parity_words(zw & rx[i])
            anti |= par
        return anti

    def _reduce_packed(self, xw: np.ndarray, zw: np.ndarray):
        """Reduce every term by the pivot rows (word-parallel).

        Returns (anticommutes mask, reduced-to-identity mask, phase mod 4).
        Phases of anticommuting terms are not meaningful.
        """
        anti, in_group, ph, _, _ = self._reduce_packed_full(xw.copy(), zw.copy())
        return anti, in_group, ph

    def residuals(self, h: PauliSum):
        """Full reduction detail for the completion machinery.

        Returns (anti, in_group, ph, res_x, res_z): masks/phases as in
        _reduce_packed plus the packed residual words of every term.
        """
        return self._reduce_packed_full(h.x_words.copy(), h.z_words.copy())

    def _reduce_packed_full(self, cur_x, cur_z):
        """In-place packed reduction; cur_x/cur_z become the residuals."""
        rx, rz, rph, piv = self._packed_rows()
        anti = self.anticommutation_mask(cur_x, cur_z)
        # Hermitian letters enter X/Z-factored form with one i per Y factor
        ph = np.bitwise_count(cur_x & cur_z).sum(axis=1, dtype=np.int64)
        one = np.uint64(1)
        for i in range(len(rx)):
            is_x_block, wi, bi = piv[i]
            src = cur_x if is_x_block else cur_z
            sel = ((src[:, wi] >> bi) & one).astype(bool)
            sel &= ~anti
            if not sel.any():
                continue
            par = _parity_words(cur_x[sel] & rz[i])
            ph[sel] += rph[i] + 2 * par
            cur_x[sel] ^= rx[i]
            cur_z[sel] ^= rz[i]
        in_group = ~(cur_x.any(axis=1) | cur_z.any(axis=1))
        return anti, in_group, (ph & 3), cur_x, cur_z

    # -- decoding ------------------------------------------------------------

    def decode_state(self, support_limit: int = 1024) -> "DecodedState":
        """Explicit ket expansion of the unique stabilized state.

        Requires g = n.  The support is the affine space b0 + span of the
        X-row flip patterns; amplitudes are exact powers of i times
        2**(-k/2), with the lexicographically smallest bitstring made real
        positive.
        """
        n = self.n_qubits
        if len(self.rows) != n:
            raise TableauError(
                f"decode needs a complete tableau (g = n), have g = {len(self.rows)}"
            )
        x_rows = [r for r in self.rows if r.pivot < n]
        z_rows = [r for r in self.rows if r.pivot >= n]
        k = len(x_rows)
        if 1 << k > support_limit:
            raise CapacityError(
                f"support 2**{k} exceeds the limit of {support_limit} kets"
            )
        # base ket: free bits 0, Z-pivot bits forced by the row signs
        b0 = 0
        for r in z_rows:
            q = 2 * n - 1 - r.pivot
            if r.ph & 1:
                raise DefectError("non-Hermitian Z row")
            if r.ph == 2:  # sign -1 forces an occupied pivot bit
                b0 |= 1 << q
        amps: dict[int, complex] = {}
        for mask in range(1 << k):
            x, z, ph = 0, 0, 0
            for j in range(k):
                if (mask >> j) & 1:
                    x, z, ph = _row_mul(x_rows[j], x, z, ph)
            # i**ph * X^x Z^z |b0> = i**ph (-1)^(z.b0) |b0 ^ x>
            phase = (ph + 2 * (z & b0).bit_count()) & 3
            amps[b0 ^ x] = 1j**phase
        kets = sorted(amps)
        anchor = amps[kets[0]]
        norm = 2.0 ** (-k / 2)
        support = [format(b, f"0{n}b") for b in kets]
        amplitudes = [amps[b] / anchor * norm for b in kets]
        return DecodedState(n, support, amplitudes)


def _as_signed(item: GeneratorLike, n_qubits: int) -> SignedPauli:
    if isinstance(item, SignedPauli):
        sp = item
    elif isinstance(item, PauliString):
        if item.phase_exp not in (0, 2):
            raise ValueError("generator must be a Hermitian +-1 Pauli")
        sp = SignedPauli(1 if item.phase_exp == 0 else -1, item.hermitian_part())
    elif isinstance(item, str):
        sp = parse_signed_pauli(item)
    else:
        raise TypeError(f"cannot interpret {item!r} as a signed Pauli")
    if sp.n_qubits != n_qubits:
        raise ValueError(
            f"generator {sp.label} acts on {sp.n_qubits} qubits, expected {n_qubits}"
        )
    return sp


def _parity_words(masked: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each row of a (m, W) uint64 array."""
    counts = np.bitwise_count(masked)
    if counts.ndim == 1:
        return (counts.astype(np.int64) & 1).astype(bool)
    return (counts.sum(axis=1, dtype=np.int64) & 1).astype(bool)


@dataclass(frozen=True)
class DecodedState:
    """Explicit stabilizer-state expansion over computational basis kets."""

    n_qubits: int
    support: list[str]  # bitstrings, qubit n-1 leftmost, ascending
    amplitudes: list[complex]

    @property
    def support_indices(self) -> list[int]:
        return [int(s, 2) for s in self.support]

    def ket_strings(self, split: int | None = None) -> list[str]:
        """Rendered `amp |bits>` lines, optionally with a `;` separator.

        split counts qubits from the right (e.g. split=2 on 4 qubits prints
        |q3 q2 ; q1 q0>).
        """
        out = []
        for bits, amp in zip(self.support, self.amplitudes):
            if split is not None and 0 < split < self.n_qubits:
                bits = bits[: self.n_qubits - split] + ";" + bits[self.n_qubits - split :]
            out.append(f"{_format_amp(amp)} |{bits}>")
        return out

    def statevector(self) -> np.ndarray:
        """Dense 2**n amplitude vector (small n only)."""
        if self.n_qubits > 24:
            raise CapacityError("statevector too large to materialize")
        v = np.zeros(1 << self.n_qubits, dtype=complex)
        for bits, amp in zip(self.support, self.amplitudes):
            v[int(bits, 2)] = amp
        return v


def _format_amp(amp: complex) -> str:
    re, im = amp.real, amp.imag
    if abs(im) < 1e-12:
        return f"{re:+.9f}"
    if abs(re) < 1e-12:
        return f"{im:+.9f}i"
    return f"({re:+.9f}{im:+.9f}i)"


# -- stabilizer file format --------------------------------------------------
#
# One generator per line, `<+|-><pauli-string>`; `#` comments and the
# %n_qubits header follow the Hamiltonian format.


def parse_stabilizers(text: str) -> tuple[int, list[SignedPauli]]:
    """Parse a stabilizer file into (n_qubits, ordered signed generators)."""
    declared_n = None
    gens: list[SignedPauli] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("%"):
            if body.startswith("%n_qubits"):
                parts = body.split()
                try:
                    value = int(parts[1]) if len(parts) == 2 else None
                except ValueError:
                    value = None
                if value is None or value < 1:
                    raise ParseError(f"malformed directive {body!r}", lineno)
                if declared_n is not None and declared_n != value:
                    raise ParseError("conflicting %n_qubits", lineno)
                declared_n = value
            elif body.startswith("%meta"):
                pass  # tolerated, not stored
            else:
                raise ParseError(f"unknown directive {body.split()[0]!r}", lineno)
            continue
        try:
            sp = parse_signed_pauli(body, declared_n)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        if declared_n is None:
            declared_n = sp.n_qubits
        gens.append(sp)
    if declared_n is None:
        raise ParseError("no generators and no %n_qubits header")
    return declared_n, gens


def load_stabilizers(path) -> tuple[int, list[SignedPauli]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_stabilizers(fh.read())


def serialize_stabilizers(t: StabilizerTableau) -> str:
    """Canonical generators in the stabilizer file format."""
    lines = [f"%n_qubits {t.n_qubits}"]
    lines.extend(sp.label for sp in t.generators)
    return "\n".join(lines) + "\n"
