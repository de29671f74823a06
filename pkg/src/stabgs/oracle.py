"""Exact reference engines: statevector algebra, ground energies, enumeration.

These are deliberately independent of the tableau machinery: Pauli action
on kets is implemented index-wise, ground energies come from dense
diagonalization or a Lanczos recurrence on the matrix-free action, and the
n <= 4 enumeration walks every maximal commuting group directly in the
symplectic index space.  The search heuristics are validated against these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConvergenceError
from .pauli import PauliString, PauliSum
from .tableau import SignedPauli, StabilizerTableau

__all__ = [
    "STATEVECTOR_MAX_QUBITS",
    "ENUMERATION_MAX_QUBITS",
    "GroundStateDetail",
    "apply_pauli",
    "apply_sum",
    "exact_ground_energy",
    "ground_state_detail",
    "enumerate_stabilizer_energies",
    "stabilizer_energy_spectrum",
    "stabilizer_state_count",
]

STATEVECTOR_MAX_QUBITS = 20
ENUMERATION_MAX_QUBITS = 4
_DENSE_MAX_QUBITS = 10
_ARGMIN_TOL = 1e-9
_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j])


def _check_width(n: int) -> None:
    if n > STATEVECTOR_MAX_QUBITS:
        raise CapacityError(
            f"statevector work is capped at {STATEVECTOR_MAX_QUBITS} qubits, got {n}"
        )


def _state_arg(n: int, v) -> np.ndarray:
    """Validate a ket: exactly 2^n amplitudes, unit norm within 1e-12."""
    dim = 1 << n
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (dim,):
        raise ValueError(f"state must have shape ({dim},), got {np.shape(v)}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"state is not normalized: norm deviates by {norm - 1.0:.3e}")
    return arr


def apply_pauli(p: PauliString, v) -> np.ndarray:
    """Apply a Pauli string to a normalized ket without forming the matrix.

    In the X/Z-factored form P = i^(phase_exp + y) X^x Z^z, the operator
    permutes basis indices by XOR with x and multiplies by a Z-parity sign
    read at the source index.  The input must have exactly 2^n amplitudes
    and unit norm; the output is again a unit ket since P is unitary.
    """
    _check_width(p.n_qubits)
    return _apply_raw(p, _state_arg(p.n_qubits, v))


def _apply_raw(p: PauliString, psi: np.ndarray) -> np.ndarray:
    src = np.arange(psi.shape[0]) ^ p.x_bits
    out = psi[src].astype(complex)
    if p.z_bits:
        parity = (np.bitwise_count(src & p.z_bits) & 1).astype(bool)
        out[parity] = -out[parity]
    phase = _PHASES[(p.phase_exp + p.y_count) & 3]
    if phase != 1.0:
        out = out * phase
    return out


def apply_sum(h: PauliSum, v) -> np.ndarray:
    """Matrix-free H |v>.  Linear, so the input need not be normalized."""
    _check_width(h.n_qubits)
    dim = 1 << h.n_qubits
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (dim,):
        raise ValueError(f"state must have shape ({dim},), got {np.shape(v)}")
    out = np.zeros(dim, dtype=complex)
    for i in range(len(h)):
        c = float(h.coefficients[i])
        if c == 0.0:
            continue
        out += c * _apply_raw(h.string_at(i), arr)
    return out


@dataclass(frozen=True)
class GroundStateDetail:
    """Ground-energy result with the solver's own accuracy report."""

    energy: float
    residual: float
    iterations: int
    method: str


def exact_ground_energy(
    h: PauliSum,
    tolerance: float = 1e-8,
    max_iter: int = 300,
    method: str = "auto",
) -> float:
    """Lowest eigenvalue of the Hamiltonian, exact up to 20 qubits.

    Small systems are diagonalized densely; larger ones run a Lanczos
    recurrence on the matrix-free action, reorthogonalizing while the basis
    fits in memory.  Raises ConvergenceError (carrying best_estimate and
    residual) if the iteration stalls above `tolerance`.
    """
    return ground_state_detail(h, tolerance, max_iter, method).energy


def ground_state_detail(
    h: PauliSum,
    tolerance: float = 1e-8,
    max_iter: int = 300,
    method: str = "auto",
) -> GroundStateDetail:
    """exact_ground_energy plus the residual / iteration-count report."""
    _check_width(h.n_qubits)
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if len(h) == 0:
        return GroundStateDetail(0.0, 0.0, 0, "dense")
    if method == "dense" or (method == "auto" and h.n_qubits <= _DENSE_MAX_QUBITS):
        return GroundStateDetail(_dense_ground(h), 0.0, 0, "dense")
    energy, residual, iterations = _lanczos_ground(h, tolerance, max_iter)
    return GroundStateDetail(energy, residual, iterations, "lanczos")


def _dense_ground(h: PauliSum) -> float:
    n = h.n_qubits
    if n > 14:
        raise CapacityError(f"dense diagonalization is unreasonable at {n} qubits")
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    j = np.arange(dim)
    for i in range(len(h)):
        c = float(h.coefficients[i])
        if c == 0.0:
            continue
        p = h.string_at(i)
        sign = 1.0 - 2.0 * (np.bitwise_count(j & p.z_bits) & 1)
        phase = _PHASES[(p.phase_exp + p.y_count) & 3]
        mat[j ^ p.x_bits, j] += c * phase * sign
    return float(np.linalg.eigvalsh(mat)[0])


def _start_vector(h: PauliSum) -> np.ndarray:
    """Deterministic start: the trivially completed diagonal basis state,
    perturbed so no symmetry sector is exactly missed."""
    from .search import complete_tableau

    dim = 1 << h.n_qubits
    trivial = complete_tableau(StabilizerTableau(h.n_qubits), h)[0]
    b0 = trivial.decode_state(support_limit=2).support_indices[0]
    rng = np.random.default_rng(0xC0FFEE)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v *= 1e-3 / np.linalg.norm(v)
    v[b0] += 1.0
    return v / np.linalg.norm(v)


def _lanczos_ground(
    h: PauliSum, tolerance: float, max_iter: int
) -> tuple[float, float, int]:
    dim = 1 << h.n_qubits
    max_iter = min(max_iter, dim)
    keep_basis = dim * max_iter * 16 <= 512 * 1024 * 1024
    v = _start_vector(h)
    basis = [v.copy()] if keep_basis else None
    alphas: list[float] = []
    betas: list[float] = []
    v_prev = np.zeros(dim, dtype=complex)
    beta = 0.0
    best = np.inf
    scale = max(1.0, float(np.abs(h.coefficients).sum()))
    residual = np.inf
    for k in range(max_iter):
        w = apply_sum(h, v)
        alpha = float(np.real(np.vdot(v, w)))
        alphas.append(alpha)
        w -= alpha * v + beta * v_prev
        if basis is not None:
            for b in basis:  # full reorthogonalization
                w -= np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        exhausted = beta <= 1e-14 * scale
        if (k + 1) % 5 == 0 or k == max_iter - 1 or exhausted:
            t_mat = np.diag(alphas)
            if betas:
                off = np.array(betas)
                t_mat += np.diag(off, 1) + np.diag(off, -1)
            vals, vecs = np.linalg.eigh(t_mat)
            best = float(vals[0])
            residual = float(abs(beta * vecs[-1, 0]))
            if residual <= tolerance * scale:
                return best, residual, k + 1
            if exhausted:
                # Krylov space exhausted; the subspace minimum is exact
                return best, 0.0, k + 1
        betas.append(beta)
        v_prev = v
        v = w / beta
        if basis is not None:
            basis.append(v.copy())
    raise ConvergenceError(
        f"Lanczos did not reach tolerance={tolerance} in {max_iter} iterations",
        best_estimate=best,
        residual=residual,
    )


# -- exhaustive stabilizer enumeration ---------------------------------------


def stabilizer_state_count(n: int) -> int:
    """Number of pure stabilizer states: 2^n * prod_k (2^k + 1)."""
    count = 1 << n
    for k in range(1, n + 1):
        count *= (1 << k) + 1
    return count


def _check_enum(h: PauliSum) -> None:
    if h.n_qubits > ENUMERATION_MAX_QUBITS:
        raise CapacityError(
            f"exhaustive enumeration is capped at {ENUMERATION_MAX_QUBITS} qubits"
        )
    if h.n_qubits < 1:
        raise ValueError("need at least one qubit")


def enumerate_stabilizer_energies(
    h: PauliSum,
) -> tuple[float, list[StabilizerTableau]]:
    """Exact minimum over every n-qubit stabilizer state, n <= 4.

    Returns the minimum energy together with every attaining state (ties
    within 1e-9), each as a canonical tableau, sorted by canonical
    bit-pattern so the argmin list is reproducible.
    """
    _check_enum(h)
    n = h.n_qubits
    rows = list(_group_energy_rows(h))
    best = min(float(e.min()) for _, e in rows)
    argmin: list[StabilizerTableau] = []
    for gens, e in rows:
        for mask in np.flatnonzero(e <= best + _ARGMIN_TOL):
            argmin.append(_group_tableau(n, gens, int(mask)))
    argmin.sort(key=lambda t: t.key())
    return best, argmin


def stabilizer_energy_spectrum(h: PauliSum) -> np.ndarray:
    """Energies of every n-qubit stabilizer state, n <= 4, sorted ascending.

    The array length is 2^n * prod_k (2^k + 1): 6, 60, 1080, 36720
    for n = 1..4.
    """
    _check_enum(h)
    return np.sort(np.concatenate([e for _, e in _group_energy_rows(h)]))


def _group_tableau(n: int, gens: list[int], mask: int) -> StabilizerTableau:
    z_mask = (1 << n) - 1
    signed = [
        SignedPauli(-1 if (mask >> i) & 1 else 1, PauliString(n, g >> n, g & z_mask, 0))
        for i, g in enumerate(gens)
    ]
    return StabilizerTableau.from_generators(n, signed)


def _group_energy_rows(h: PauliSum):
    """Yield (generators, energies over all 2^n sign masks) per maximal group.

    Walks all maximal commuting independent subgroups of the Pauli group
    (each exactly once, via coset-minimal increasing generating sequences)
    and scores all 2^n sign assignments per subgroup.  Sign-mask bit i set
    means generator i carries a minus sign.
    """
    n = h.n_qubits
    groups = _maximal_isotropic_groups(n)

    # constant shift from identity terms; packed index x * 2^n + z per term
    shift = 0.0
    term_idx: list[int] = []
    term_c: list[float] = []
    term_string: list[PauliString] = []
    for i in range(len(h)):
        c = float(h.coefficients[i])
        p = h.string_at(i)
        if p.is_identity:
            shift += c
            continue
        term_idx.append(p.x_bits << n | p.z_bits)
        term_c.append(c)
        term_string.append(p)

    sign_masks = np.arange(1 << n, dtype=np.uint64)
    for gens in groups:
        e = np.full(1 << n, shift)
        if term_idx:
            usage, factor, member = _decompose_terms(n, gens, term_idx, term_string)
            mm = [t for t in range(len(term_idx)) if member[t]]
            if mm:
                umask = np.array([usage[t] for t in mm], dtype=np.uint64)[:, None]
                parity = np.bitwise_count(umask & sign_masks[None, :]) & np.uint64(1)
                signs = 1.0 - 2.0 * parity.astype(float)
                weights = np.array([term_c[t] * factor[t] for t in mm])
                e = e + weights @ signs
        yield gens, e


def _maximal_isotropic_groups(n: int) -> list[list[int]]:
    """Generating sequences of all maximal commuting subgroups.

    Elements are packed as x * 2^n + z, so the group operation is XOR.
    Each subgroup is produced exactly once: generators are added in
    increasing order and each must be the smallest element of its coset.
    """
    size = 1 << (2 * n)
    xs = np.arange(size) >> n
    zs = np.arange(size) & ((1 << n) - 1)
    # symplectic parity table packed into one Python int per element
    comm = []
    for a in range(size):
        form = (np.bitwise_count(xs[a] & zs) + np.bitwise_count(zs[a] & xs)) & 1
        bits = np.flatnonzero(form == 0)
        mask = 0
        for b in bits:
            mask |= 1 << int(b)
        comm.append(mask)

    full = (1 << size) - 1
    out: list[list[int]] = []

    def extend(gens: list[int], span: list[int], allowed: int, start: int) -> None:
        if len(gens) == n:
            out.append(list(gens))
            return
        cand = allowed
        cand &= ~sum(1 << s for s in span) & full
        e = start
        while True:
            shifted = cand >> e
            if shifted == 0:
                return
            # jump to the next commuting candidate index
            e += (shifted & -shifted).bit_length() - 1
            if all(e < (e ^ a) for a in span if a):
                gens.append(e)
                extend(gens, span + [s ^ e for s in span], allowed & comm[e], e + 1)
                gens.pop()
            e += 1

    extend([], [0], full, 1)
    return out


def _decompose_terms(n, gens, term_idx, term_string):
    """Per term: generator usage, +-1 letter-product factor, membership."""
    # echelon form of the generator index vectors with combination tracking;
    # rows stay sorted by descending pivot so reduction never reintroduces
    # a pivot bit already passed
    ech: list[tuple[int, int]] = []  # (vector, generator mask)
    for i, g in enumerate(gens):
        vec, mask = g, 1 << i
        for pv, pm in ech:
            if vec & (1 << (pv.bit_length() - 1)):
                vec ^= pv
                mask ^= pm
        if vec:
            ech.append((vec, mask))
            ech.sort(key=lambda r: -r[0].bit_length())
    gen_strings = [
        PauliString(n, g >> n, g & ((1 << n) - 1), 0) for g in gens
    ]

    usage: list[int] = []  # generator bitmask per term
    factor: list[float] = []
    member: list[bool] = []
    for idx in term_idx:
        vec = idx
        mask = 0
        for pv, pm in ech:
            if vec & (1 << (pv.bit_length() - 1)):
                vec ^= pv
                mask ^= pm
        if vec:
            usage.append(0)
            factor.append(0.0)
            member.append(False)
            continue
        prod = None
        for i in range(n):
            if (mask >> i) & 1:
                prod = gen_strings[i] if prod is None else prod * gen_strings[i]
        # product of commuting Hermitian strings is +-1 times the letters
        f = 1.0 if prod is None or prod.phase_exp == 0 else -1.0
        if prod is not None and prod.phase_exp & 1:
            raise AssertionError("commuting product left an imaginary phase")
        usage.append(mask)
        factor.append(f)
        member.append(True)
    return usage, factor, member
