"""Signed Pauli strings and weighted Pauli sums with bit-packed storage.

A Pauli string on n qubits is stored as two GF(2) bit vectors held in Python
integers (bit q = qubit q) plus an integer phase exponent:

    operator = i**phase_exp * (Hermitian Pauli named by the letters of x/z)

where the letter on qubit q is I, X, Y, Z for (x, z) = (0,0), (1,0), (1,1),
(0,1).  phase_exp is tracked exactly as an integer mod 4, never as a float,
so products of thousands of strings stay exact.  In text form the leftmost
character is qubit n-1.

Weighted sums (Hamiltonians) keep their terms bit-packed into numpy uint64
word arrays so that 72-qubit sums with millions of terms support
word-parallel XOR/AND/popcount kernels.  All stored terms are Hermitian with
a +1 prefactor; real signs are folded into the coefficients on ingestion and
duplicate strings are merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import ParseError

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "parse_pauli",
    "format_pauli",
    "multiply",
    "commutes",
    "parse_hamiltonian",
    "serialize_hamiltonian",
    "load_hamiltonian",
    "prune",
]

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}

_WORD_BITS = 64
_WORD_MASK = (1 << _WORD_BITS) - 1


def _n_words(n_qubits: int) -> int:
    return max(1, (n_qubits + _WORD_BITS - 1) // _WORD_BITS)


def _int_to_words(value: int, n_words: int) -> np.ndarray:
    out = np.empty(n_words, dtype=np.uint64)
    for w in range(n_words):
        out[w] = (value >> (_WORD_BITS * w)) & _WORD_MASK
    return out


def _words_to_int(words: np.ndarray) -> int:
    value = 0
    for w in range(len(words) - 1, -1, -1):
        value = (value << _WORD_BITS) | int(words[w])
    return value


@dataclass(frozen=True)
class PauliString:
    """A Pauli operator i**phase_exp times a bare I/X/Y/Z string.

    Attributes:
        n_qubits: number of qubits the string acts on.
        x_bits: GF(2) bit vector of X components (bit q = qubit q).
        z_bits: GF(2) bit vector of Z components.
        phase_exp: integer power of i (mod 4) multiplying the Hermitian
            string named by the letters.  0 for a plain +1 string, 2 for a
            -1 prefactor, 1/3 for the non-Hermitian +-i cases that arise
            transiently from products.
    """

    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        mask = (1 << self.n_qubits) - 1
        if not 0 <= self.x_bits <= mask or not 0 <= self.z_bits <= mask:
            raise ValueError("x_bits/z_bits out of range for n_qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp & 3)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @property
    def label(self) -> str:
        """Bare letter form, qubit n-1 leftmost (ignores phase_exp)."""
        out = []
        for q in range(self.n_qubits - 1, -1, -1):
            out.append(_BITS_TO_LETTER[(self.x_bits >> q) & 1, (self.z_bits >> q) & 1])
        return "".join(out)

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def weight(self) -> int:
        """Number of non-identity positions."""
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian strings.

        Raises:
            ValueError: if the string carries an +-i prefactor.
        """
        if not self.is_hermitian:
            raise ValueError(f"string {self.label!r} has phase i**{self.phase_exp}")
        return 1 if self.phase_exp == 0 else -1

    def hermitian_part(self) -> "PauliString":
        """The same letters with the prefactor stripped (phase_exp = 0)."""
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, 0)

    def commutes_with(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        prefix = {0: "", 1: "i*", 2: "-", 3: "-i*"}[self.phase_exp]
        return f"PauliString({prefix}{self.label})"


def parse_pauli(text: str, n_qubits: int | None = None) -> PauliString:
    """Parse a bare I/X/Y/Z string (leftmost character = qubit n-1).

    Args:
        text: the letter string, e.g. "XXYY".
        n_qubits: optional expected width; mismatch raises ParseError.

    Returns:
        The Hermitian +1 PauliString (phase_exp = 0).

    Raises:
        ParseError: on empty input, unknown characters, or width mismatch.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty Pauli string")
    if n_qubits is not None and len(text) != n_qubits:
        raise ParseError(f"expected {n_qubits} characters, got {len(text)} in {text!r}")
    n = len(text)
    x = z = 0
    for pos, ch in enumerate(text):
        try:
            xb, zb = _LETTER_TO_BITS[ch]
        except KeyError:
            raise ParseError(f"invalid Pauli character {ch!r} in {text!r}") from None
        q = n - 1 - pos
        x |= xb << q
        z |= zb << q
    return PauliString(n, x, z, 0)


def format_pauli(p: PauliString) -> str:
    """Inverse of parse_pauli.

    Raises:
        ValueError: if p is not a bare +1 string (fold the prefactor with
            hermitian_part()/sign first).
    """
    if p.phase_exp != 0:
        raise ValueError(
            f"cannot format {p!r} as bare text; it carries an i**{p.phase_exp} prefactor"
        )
    return p.label


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact operator product p * q with integer phase tracking.

    Example: multiply(X, Z) on one qubit is -iY, returned as letters "Y"
    with phase_exp = 3.
    """
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    x = p.x_bits ^ q.x_bits
    z = p.z_bits ^ q.z_bits
    # Work in X-before-Z factored form: commuting Z_p past X_q costs
    # (-1)^(p.z & q.x); converting letters to/from that form costs one i
    # per Y on each side.
    y3 = (x & z).bit_count()
    phase = (
        p.phase_exp
        + q.phase_exp
        + p.y_count
        + q.y_count
        - y3
        + 2 * (p.z_bits & q.x_bits).bit_count()
    )
    return PauliString(p.n_qubits, x, z, phase & 3)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff p and q commute (symplectic GF(2) inner product is 0)."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    parity = (p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()
    return parity % 2 == 0


@dataclass(frozen=True)
class PauliTerm:
    """A real coefficient (Hartree) paired with a Hermitian +1 string.

    A -1 string prefactor is folded into the coefficient on construction;
    +-i prefactors are rejected because the sum must stay Hermitian.
    """

    coefficient: float
    string: PauliString

    def __post_init__(self) -> None:
        if not math.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")
        if self.string.phase_exp != 0:
            sign = self.string.sign  # raises for +-i
            object.__setattr__(self, "coefficient", sign * self.coefficient)
            object.__setattr__(self, "string", self.string.hermitian_part())


TermLike = Union[PauliTerm, "tuple[float, PauliString]", "tuple[float, str]"]


class _TermView(Sequence[PauliTerm]):
    """Lazy sequence of PauliTerm views over a PauliSum's packed arrays."""

    __slots__ = ("_sum",)

    def __init__(self, owner: "PauliSum"):
        self._sum = owner

    def __len__(self) -> int:
        return len(self._sum)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self._sum.term(i) for i in range(*index.indices(len(self)))]
        return self._sum.term(index)


class PauliSum:
    """An ordered, duplicate-free weighted sum of Hermitian Pauli strings.

    Terms are stored bit-packed: x and z words in (n_terms, n_words) uint64
    arrays plus a float64 coefficient vector.  The arrays are exposed
    read-only for the vectorized tableau/search kernels; term objects are
    materialized on demand.
    """

    __slots__ = ("n_qubits", "metadata", "_xw", "_zw", "_coeffs", "_lex_cache")

    def __init__(
        self,
        n_qubits: int,
        terms: Iterable[TermLike] = (),
        metadata: dict | None = None,
    ):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
        xs: list[int] = []
        zs: list[int] = []
        cs: list[float] = []
        for item in terms:
            if not isinstance(item, PauliTerm):
                coeff, string = item
                if isinstance(string, str):
                    string = parse_pauli(string, n_qubits)
                item = PauliTerm(float(coeff), string)
            if item.string.n_qubits != n_qubits:
                raise ValueError(
                    f"term {item.string.label!r} acts on {item.string.n_qubits} "
                    f"qubits, sum is on {n_qubits}"
                )
            xs.append(item.string.x_bits)
            zs.append(item.string.z_bits)
            cs.append(item.coefficient)
        W = _n_words(n_qubits)
        xw = np.zeros((len(cs), W), dtype=np.uint64)
        zw = np.zeros((len(cs), W), dtype=np.uint64)
        for i, (x, z) in enumerate(zip(xs, zs)):
            xw[i] = _int_to_words(x, W)
            zw[i] = _int_to_words(z, W)
        self._init_packed(n_qubits, xw, zw, np.asarray(cs, dtype=np.float64), metadata, merge=True)

    def _init_packed(self, n_qubits, xw, zw, coeffs, metadata, merge):
        if merge and len(coeffs) > 1:
            xw, zw, coeffs = _merge_packed(xw, zw, coeffs)
        for arr in (xw, zw, coeffs):
            arr.setflags(write=False)
        self.n_qubits = n_qubits
        self.metadata = dict(metadata or {})
        self._xw = xw
        self._zw = zw
        self._coeffs = coeffs
        self._lex_cache = None

    @classmethod
    def from_packed(
        cls,
        n_qubits: int,
        x_words: np.ndarray,
        z_words: np.ndarray,
        coefficients: np.ndarray,
        metadata: dict | None = None,
        merge: bool = True,
    ) -> "PauliSum":
        """Build directly from packed word arrays (no per-term objects).

        x_words/z_words must be (n_terms, n_words) uint64 with n_words
        matching ceil(n_qubits/64); coefficients float64.
        """
        W = _n_words(n_qubits)
        xw = np.ascontiguousarray(x_words, dtype=np.uint64)
        zw = np.ascontiguousarray(z_words, dtype=np.uint64)
        coeffs = np.ascontiguousarray(coefficients, dtype=np.float64)
        if xw.shape != zw.shape or xw.ndim != 2 or xw.shape[1] != W:
            raise ValueError("packed arrays must be (n_terms, n_words)")
        if len(coeffs) != len(xw):
            raise ValueError("coefficient count does not match term count")
        if n_qubits % _WORD_BITS:
            top = np.uint64(((1 << (n_qubits % _WORD_BITS)) - 1))
            if ((xw[:, -1] & ~top) != 0).any() or ((zw[:, -1] & ~top) != 0).any():
                raise ValueError("packed bits set beyond n_qubits")
        if not np.isfinite(coeffs).all():
            raise ValueError("non-finite coefficient in packed input")
        obj = cls.__new__(cls)
        obj._init_packed(n_qubits, xw.copy(), zw.copy(), coeffs.copy(), metadata, merge)
        return obj

    # -- accessors ---------------------------------------------------------

    @property
    def x_words(self) -> np.ndarray:
        return self._xw

    @property
    def z_words(self) -> np.ndarray:
        return self._zw

    @property
    def coefficients(self) -> np.ndarray:
        return self._coeffs

    @property
    def terms(self) -> Sequence[PauliTerm]:
        return _TermView(self)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[PauliTerm]:
        for i in range(len(self)):
            yield self.term(i)

    def string_at(self, i: int) -> PauliString:
        return PauliString(
            self.n_qubits, _words_to_int(self._xw[i]), _words_to_int(self._zw[i]), 0
        )

    def term(self, i: int) -> PauliTerm:
        return PauliTerm(float(self._coeffs[i]), self.string_at(i))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self._xw.shape == other._xw.shape
            and bool(np.array_equal(self._xw, other._xw))
            and bool(np.array_equal(self._zw, other._zw))
            and bool(np.array_equal(self._coeffs, other._coeffs))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self)})"

    # -- operations --------------------------------------------------------

    def prune(self, epsilon: float) -> "PauliSum":
        """Drop terms with |coefficient| < epsilon, preserving order."""
        if epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        keep = np.abs(self._coeffs) >= epsilon
        return PauliSum.from_packed(
            self.n_qubits,
            self._xw[keep],
            self._zw[keep],
            self._coeffs[keep],
            self.metadata,
            merge=False,
        )

    def sort_order(self) -> np.ndarray:
        """Deterministic scan order: descending |coefficient|, then label.

        Ties in |coefficient| fall back to lexicographic label order
        (I < X < Y < Z, qubit n-1 most significant), realized on packed
        2-bit letter codes so no label strings are materialized.
        """
        if self._lex_cache is None:
            keys = _lex_key_words(self._xw, self._zw, self.n_qubits)
            self._lex_cache = keys
        keys = self._lex_cache
        cols = [keys[:, k] for k in range(keys.shape[1] - 1, -1, -1)]
        cols.append(-np.abs(self._coeffs))
        return np.lexsort(tuple(cols))


def _merge_packed(xw, zw, coeffs):
    """Merge duplicate strings, keeping first-occurrence order."""
    m = len(coeffs)
    keys = np.concatenate([xw, zw], axis=1)
    order = np.lexsort(tuple(keys[:, k] for k in range(keys.shape[1] - 1, -1, -1)))
    sk = keys[order]
    new_group = np.empty(m, dtype=bool)
    new_group[0] = True
    new_group[1:] = (sk[1:] != sk[:-1]).any(axis=1)
    starts = np.flatnonzero(new_group)
    sums = np.add.reduceat(coeffs[order], starts)
    firsts = np.minimum.reduceat(order, starts)
    reps = order[starts]
    out = np.argsort(firsts, kind="stable")
    rows = reps[out]
    return (
        np.ascontiguousarray(xw[rows]),
        np.ascontiguousarray(zw[rows]),
        np.ascontiguousarray(sums[out]),
    )


def _lex_key_words(xw: np.ndarray, zw: np.ndarray, n_qubits: int) -> np.ndarray:
    """Big-endian packed 2-bit letter codes (I=0 < X=1 < Y=2 < Z=3).

    Comparing the returned rows word-by-word (word 0 first) orders terms
    exactly like comparing their text labels.
    """
    m = len(xw)
    hi = zw
    lo = xw ^ zw
    nk = (2 * n_qubits + _WORD_BITS - 1) // _WORD_BITS
    keys = np.zeros((m, nk), dtype=np.uint64)
    one = np.uint64(1)
    for q in range(n_qubits):
        w, b = divmod(q, _WORD_BITS)
        hib = (hi[:, w] >> np.uint64(b)) & one
        lob = (lo[:, w] >> np.uint64(b)) & one
        pos = 2 * (n_qubits - 1 - q)
        kw, kb = divmod(pos, _WORD_BITS)
        shift = np.uint64(_WORD_BITS - 2 - kb)
        keys[:, kw] |= ((hib << one) | lob) << shift
    return keys


def prune(h: PauliSum, epsilon: float) -> PauliSum:
    """Module-level alias for PauliSum.prune."""
    return h.prune(epsilon)


# -- file format -----------------------------------------------------------
#
# One term per line: "<coefficient> <pauli-string>".  Blank lines and text
# after '#' are ignored.  Optional directives: "%n_qubits N" declares the
# width, "%meta key value" adds a metadata entry.  Leftmost string character
# is qubit n-1.

_VECTOR_PARSE_MIN_LINES = 20000


def parse_hamiltonian(text: str) -> PauliSum:
    """Parse the term-per-line Hamiltonian format into a PauliSum.

    Duplicate strings are merged (coefficients added) keeping the first
    occurrence's position.  Raises ParseError with a 1-based line number on
    malformed input.
    """
    lines = text.splitlines()
    if len(lines) >= _VECTOR_PARSE_MIN_LINES:
        try:
            return _parse_hamiltonian_vector(lines)
        except ParseError:
            raise
        except Exception:
            pass  # fall through for a line-accurate diagnostic
    return _parse_hamiltonian_lines(lines)


def _split_directives(lines):
    """Yield (line_number, payload) for non-empty non-comment lines."""
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body


def _parse_header(lineno: int, body: str, declared_n, metadata):
    if body.startswith("%n_qubits"):
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"malformed directive {body!r}", lineno)
        try:
            value = int(parts[1])
        except ValueError:
            raise ParseError(f"bad qubit count {parts[1]!r}", lineno) from None
        if value < 1:
            raise ParseError(f"bad qubit count {value}", lineno)
        if declared_n is not None and declared_n != value:
            raise ParseError(f"conflicting %n_qubits ({declared_n} then {value})", lineno)
        return value
    if body.startswith("%meta"):
        parts = body.split(None, 2)
        if len(parts) < 3:
            raise ParseError(f"malformed directive {body!r}", lineno)
        metadata[parts[1]] = parts[2]
        return declared_n
    raise ParseError(f"unknown directive {body.split()[0]!r}", lineno)


def _parse_hamiltonian_lines(lines) -> PauliSum:
    declared_n = None
    metadata: dict[str, str] = {}
    entries: list[tuple[float, PauliString]] = []
    for lineno, body in _split_directives(lines):
        if body.startswith("%"):
            declared_n = _parse_header(lineno, body, declared_n, metadata)
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<coefficient> <pauli>', got {body!r}", lineno)
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ParseError(f"bad coefficient {parts[0]!r}", lineno) from None
        if not math.isfinite(coeff):
            raise ParseError(f"non-finite coefficient {parts[0]!r}", lineno)
        width = declared_n if declared_n is not None else None
        try:
            string = parse_pauli(parts[1], width)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        if declared_n is None:
            declared_n = string.n_qubits
        entries.append((coeff, string))
    if declared_n is None:
        raise ParseError("no terms and no %n_qubits header; width unknown")
    return PauliSum(declared_n, entries, metadata)


def _parse_hamiltonian_vector(lines) -> PauliSum:
    """Vectorized bulk path for very large files (same semantics)."""
    declared_n = None
    metadata: dict[str, str] = {}
    coeff_texts: list[str] = []
    labels: list[str] = []
    for lineno, body in _split_directives(lines):
        if body.startswith("%"):
            declared_n = _parse_header(lineno, body, declared_n, metadata)
            continue
        coeff_text, _, label = body.partition(" ")
        label = label.strip()
        coeff_texts.append(coeff_text)
        labels.append(label)
    if not labels:
        if declared_n is None:
            raise ParseError("no terms and no %n_qubits header; width unknown")
        return PauliSum(declared_n, (), metadata)
    n = declared_n if declared_n is not None else len(labels[0])
    coeffs = np.asarray(coeff_texts, dtype=np.float64)
    if not np.isfinite(coeffs).all():
        raise ValueError("non-finite coefficient")
    lens = np.fromiter((len(s) for s in labels), dtype=np.int64, count=len(labels))
    if not (lens == n).all():
        raise ValueError("label width mismatch")
    blob = "".join(labels)
    chars = np.frombuffer(blob.encode("ascii"), dtype=np.uint8).reshape(len(labels), n)
    chars = chars[:, ::-1]  # column q = qubit q
    is_x = chars == ord("X")
    is_y = chars == ord("Y")
    is_z = chars == ord("Z")
    if not (is_x | is_y | is_z | (chars == ord("I"))).all():
        raise ValueError("invalid Pauli character")
    xbits = is_x | is_y
    zbits = is_z | is_y
    W = _n_words(n)
    xw = _packbits_words(xbits, W)
    zw = _packbits_words(zbits, W)
    out = PauliSum.from_packed(n, xw, zw, coeffs, metadata, merge=True)
    return out


def _packbits_words(bits: np.ndarray, n_words: int) -> np.ndarray:
    m, n = bits.shape
    padded = np.zeros((m, n_words * _WORD_BITS), dtype=bool)
    padded[:, :n] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(m, n_words).astype(np.uint64)


def serialize_hamiltonian(h: PauliSum) -> str:
    """Emit the file format (header, sorted %meta lines, one term per line).

    Coefficients use shortest round-trip float formatting.
    """
    out = [f"%n_qubits {h.n_qubits}"]
    for key in sorted(h.metadata):
        out.append(f"%meta {key} {h.metadata[key]}")
    for i in range(len(h)):
        out.append(f"{float(h.coefficients[i])!r} {h.string_at(i).label}")
    return "\n".join(out) + "\n"


def load_hamiltonian(path) -> PauliSum:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read())
