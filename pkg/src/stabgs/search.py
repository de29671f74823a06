"""Stabilizer search: build energy-minimizing tableaux from Hamiltonian terms.

The heuristic scans terms in descending |coefficient| and tries to admit
each string P with sign -sign(c), so every stabilized term contributes
-|c| to the energy.  Near-tied coefficient runs ("clusters") are where the
admission order matters physically, so the branching variant explores
admit/skip subsets of each cluster under a beam, ranked by the energy of
the already-scanned prefix.  Partial tableaux are finished by repeatedly
adding the pure-Z centralizer string that buys the largest energy drop
(the residual-bucket step below), which always reaches g = n.

Everything is deterministic for a fixed (Hamiltonian, config) pair: ties in
|c| are ordered by string label, bucket ties by smallest diagonal string,
and beam ranking breaks energy ties on the canonical tableau key.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import DefectError
from .pauli import PauliString, PauliSum, _int_to_words, _words_to_int
from .tableau import AddOutcome, SignedPauli, StabilizerTableau, _parity_words

__all__ = [
    "CompletionPolicy",
    "SearchConfig",
    "Candidate",
    "SearchStats",
    "SearchResult",
    "greedy_search",
    "branch_search",
    "complete_tableau",
    "sign_hillclimb",
]

DEGENERACY_TOL = 1e-9


class CompletionPolicy(Enum):
    DIAGONAL_GREEDY = "diagonal-greedy"
    ENUMERATE_DEGENERATE = "enumerate-degenerate"

    @classmethod
    def parse(cls, text: str) -> "CompletionPolicy":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"unknown completion policy {text!r}")


@dataclass(frozen=True)
class SearchConfig:
    """Heuristic knobs; the defaults reproduce the bundled-fixture results."""

    tie_tolerance: float = 0.0  # relative band for branch-eligible |c| runs
    beam_width: int = 8
    max_results: int = 16
    completion_policy: CompletionPolicy = CompletionPolicy.DIAGONAL_GREEDY
    prune_threshold: float = 0.0
    hillclimb: bool = False
    rng_seed: int = 0  # reserved; label order already breaks every tie
    max_branches: int = 1024  # total admit/skip forks allowed per search

    def __post_init__(self) -> None:
        if self.tie_tolerance < 0:
            raise ValueError("tie_tolerance must be >= 0")
        if self.beam_width < 1 or self.max_results < 1 or self.max_branches < 1:
            raise ValueError("beam_width, max_results, max_branches must be >= 1")
        if self.prune_threshold < 0:
            raise ValueError("prune_threshold must be >= 0")


@dataclass(frozen=True)
class Candidate:
    tableau: StabilizerTableau
    energy: float
    degenerate_with: tuple[int, ...] = ()


@dataclass
class SearchStats:
    terms_scanned: int = 0
    branches_explored: int = 0
    wall_time_s: float = 0.0


@dataclass(frozen=True)
class SearchResult:
    candidates: list[Candidate]
    best_energy: float
    stats: SearchStats


def greedy_search(h: PauliSum, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Single descending-|c| admission pass plus completion."""
    cfg = replace(config, tie_tolerance=0.0, beam_width=1, max_branches=1)
    return _search(h, cfg)


def branch_search(h: PauliSum, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Greedy scan with admit/skip branching over near-tied |c| clusters."""
    return _search(h, config)


# -- scan machinery ----------------------------------------------------------


class _ScanState:
    """One partial tableau walking the sorted term list."""

    __slots__ = ("tableau", "blocked")

    def __init__(self, tableau: StabilizerTableau, blocked: np.ndarray):
        self.tableau = tableau
        self.blocked = blocked  # terms anticommuting with the group so far

    def branch(self) -> "_ScanState":
        return _ScanState(self.tableau.copy(), self.blocked.copy())

    def admit(self, h: PauliSum, idx: int) -> AddOutcome:
        string = h.string_at(idx)
        c = float(h.coefficients[idx])
        outcome = self.tableau.try_add(SignedPauli(-1 if c > 0 else 1, string))
        if outcome is AddOutcome.ADDED:
            # the span grew by exactly this string, so one symplectic pass
            # against it updates the anticommutation mask
            W = h.x_words.shape[1]
            sx = _int_to_words(string.x_bits, W)
            sz = _int_to_words(string.z_bits, W)
            self.blocked |= _parity_words(h.x_words & sz) ^ _parity_words(
                h.z_words & sx
            )
        return outcome


def _admissible(h: PauliSum, order: np.ndarray) -> np.ndarray:
    """Mask over scan positions: non-identity terms with nonzero weight."""
    nz = h.x_words[order].any(axis=1) | h.z_words[order].any(axis=1)
    return nz & (h.coefficients[order] != 0.0)


def _clusters(h: PauliSum, order, admissible, tol: float):
    """Maximal runs of admissible positions chained by |c_next| >= (1-tol)|c|."""
    spans = []
    if tol <= 0:
        return spans
    abs_c = np.abs(h.coefficients[order])
    pos = [p for p in range(len(order)) if admissible[p]]
    i = 0
    while i < len(pos):
        j = i
        while j + 1 < len(pos) and abs_c[pos[j + 1]] >= (1.0 - tol) * abs_c[pos[j]]:
            j += 1
        if j > i:
            spans.append(pos[i : j + 1])
        i = j + 1
    return spans


def _prefix_energy(state: _ScanState, h: PauliSum, upto: int, order) -> float:
    """Energy of the current tableau over terms scanned so far."""
    vals = state.tableau.expectations(h)
    prefix = order[:upto]
    return float(np.dot(h.coefficients[prefix], vals[prefix]))


def _search(h: PauliSum, config: SearchConfig) -> SearchResult:
    t0 = time.perf_counter()
    stats = SearchStats()
    work = h.prune(config.prune_threshold) if config.prune_threshold > 0 else h
    n = work.n_qubits
    beam_width = min(config.beam_width, 8) if n > 32 else config.beam_width
    budget = min(config.max_branches, 64) if n > 32 else config.max_branches

    order = work.sort_order()
    admissible = _admissible(work, order)
    cluster_at = {
        span[0]: span
        for span in _clusters(work, order, admissible, config.tie_tolerance)
    }

    m = len(work)
    states = [_ScanState(StabilizerTableau(n), np.zeros(m, dtype=bool))]

    pos = 0
    while pos < len(order):
        if all(s.tableau.is_complete for s in states):
            break
        span = cluster_at.get(pos)
        if span is not None and budget > 0:
            states, used = _branch_cluster(states, work, order, span, budget)
            budget -= used
            stats.branches_explored += used
            pos = span[-1] + 1
            if len(states) > beam_width:
                states = _prune_beam(states, work, pos, order, beam_width)
        else:
            if admissible[pos]:
                idx = int(order[pos])
                for s in states:
                    if not (s.tableau.is_complete or s.blocked[idx]):
                        s.admit(work, idx)
            pos += 1
    stats.terms_scanned = pos

    # trivial all-Z baseline: the search must never do worse than this
    baseline = StabilizerTableau(n)
    finals: list[StabilizerTableau] = []
    for t in [s.tableau for s in states] + [baseline]:
        if t.is_complete:
            finals.append(t)
        else:
            finals.extend(complete_tableau(t, work, config.completion_policy))
    if config.hillclimb:
        finals = [sign_hillclimb(t, work) for t in finals]

    seen: dict[tuple, StabilizerTableau] = {}
    for t in finals:
        seen.setdefault(t.key(), t)
    scored = sorted(
        ((t.energy(work), key) for key, t in seen.items()),
        key=lambda ek: (ek[0], ek[1]),
    )
    if config.completion_policy is CompletionPolicy.ENUMERATE_DEGENERATE and scored:
        best = scored[0][0]
        scored = [ek for ek in scored if ek[0] <= best + DEGENERACY_TOL]
    scored = scored[: config.max_results]

    energies = [e for e, _ in scored]
    candidates = []
    for i, (e, key) in enumerate(scored):
        mates = tuple(
            j
            for j, ej in enumerate(energies)
            if j != i and abs(ej - e) <= DEGENERACY_TOL
        )
        candidates.append(Candidate(seen[key], e, mates))
    stats.wall_time_s = time.perf_counter() - t0
    if not candidates:
        raise DefectError("search produced no candidates")  # unreachable
    return SearchResult(candidates, candidates[0].energy, stats)


def _branch_cluster(states, h: PauliSum, order, span, budget: int):
    """Fork admit/skip subsets over a near-tied cluster; all-admit first.

    Only the first b cluster terms fork, with 2**b - 1 new branches bounded
    by the remaining fork budget; the rest of the cluster is scanned
    greedily in every child.  Returns (new states, forks consumed).
    """
    b = min(len(span), 16)
    while b > 0 and (1 << b) - 1 > budget:
        b -= 1
    out = []
    used = 0
    exhausted = False
    for s in states:
        if s.tableau.is_complete or exhausted:
            if not s.tableau.is_complete:
                _admit_span(s, h, order, span, skip=0)
            out.append(s)
            continue
        base = s.branch() if b > 0 else None
        for mask in range(1 << b):  # bit j set = skip the j-th cluster term
            child = s if mask == 0 else base.branch()
            _admit_span(child, h, order, span, skip=mask)
            out.append(child)
            if mask:
                used += 1
            if used >= budget:
                exhausted = True
                break
    return out, used


def _admit_span(state: _ScanState, h: PauliSum, order, span, skip: int) -> None:
    for j, p in enumerate(span):
        if (skip >> j) & 1:
            continue
        if state.tableau.is_complete:
            break
        idx = int(order[p])
        if not state.blocked[idx]:
            state.admit(h, idx)


def _prune_beam(states, h: PauliSum, upto: int, order, beam_width: int):
    ranked: dict[tuple, tuple[float, _ScanState]] = {}
    for s in states:
        key = s.tableau.key()
        if key not in ranked:
            ranked[key] = (_prefix_energy(s, h, upto, order), s)
    ordered = sorted(ranked.items(), key=lambda kv: (kv[1][0], kv[0]))
    return [s for _, (_, s) in ordered[:beam_width]]


# -- completion --------------------------------------------------------------


def complete_tableau(
    t: StabilizerTableau,
    h: PauliSum,
    policy: CompletionPolicy = CompletionPolicy.DIAGONAL_GREEDY,
    branch_cap: int = 256,
) -> list[StabilizerTableau]:
    """Extend a partial tableau to g = n with pure-Z centralizer strings.

    Each step buckets the not-yet-determined terms by their pure-Z residual
    (the reduction of the term through the current rows), picks the bucket
    with the largest |sum of signed coefficients|, and adds that string with
    the energy-minimizing sign.  Under enumerate-degenerate, sign choices
    whose energy deltas tie within 1e-9 both branch.  When no term produces
    a pure-Z residual, any independent diagonal string works and changes
    nothing; the smallest one is used.
    """
    if h.n_qubits != t.n_qubits:
        raise ValueError("qubit count mismatch")
    # completion only ever adds diagonal rows, so when the start rows are
    # all diagonal too, only diagonal terms can reduce to pure-Z residuals;
    # restricting to them keeps the per-step rescan off the full term list
    work = h
    if len(h) and all(r.x == 0 for r in t.rows):
        diag = ~h.x_words.any(axis=1)
        work = PauliSum.from_packed(
            h.n_qubits,
            h.x_words[diag],
            h.z_words[diag],
            h.coefficients[diag],
            merge=False,
        )
    done: list[StabilizerTableau] = []
    queue: list[StabilizerTableau] = [t.copy()]
    while queue:
        cur = queue.pop(0)
        if cur.is_complete:
            done.append(cur)
            continue
        z_int, weight = _best_z_bucket(cur, work)
        signs: Iterable[int]
        if abs(weight) <= DEGENERACY_TOL:
            signs = (1, -1) if policy is CompletionPolicy.ENUMERATE_DEGENERATE else (1,)
        else:
            signs = (-1,) if weight > 0 else (1,)
        string = PauliString(cur.n_qubits, 0, z_int, 0)
        for si, sign in enumerate(signs):
            if si > 0 and len(done) + len(queue) >= branch_cap:
                break
            nxt = cur.copy()
            outcome = nxt.try_add(SignedPauli(sign, string))
            if outcome is not AddOutcome.ADDED:
                raise DefectError(
                    f"completion candidate {string.label} was not independent"
                )
            queue.append(nxt)
    return done


def _best_z_bucket(t: StabilizerTableau, h: PauliSum) -> tuple[int, float]:
    """(z bits, signed weight) of the best pure-Z residual bucket.

    The weight is the energy delta per unit sign of the added generator;
    ties in |weight| resolve to the smallest z (lexicographically smallest
    label).  Falls back to a zero-weight independent diagonal string when
    no term reduces to a pure-Z residual.
    """
    if len(h):
        anti, in_group, ph, res_x, res_z = t.residuals(h)
        open_terms = ~anti & ~in_group & ~res_x.any(axis=1)
        open_terms &= h.coefficients != 0.0
        if open_terms.any():
            if (ph[open_terms] & 1).any():
                raise DefectError("pure-Z residual with imaginary phase")
            zsel = res_z[open_terms]
            signed = h.coefficients[open_terms] * (1 - (ph[open_terms] & 2))
            uniq, inverse = np.unique(zsel, axis=0, return_inverse=True)
            inverse = np.asarray(inverse).reshape(-1)
            weights = np.zeros(len(uniq))
            np.add.at(weights, inverse, signed)
            best = np.abs(weights).max()
            tied = np.flatnonzero(np.abs(weights) >= best - DEGENERACY_TOL)
            z_ints = [_words_to_int(uniq[i]) for i in tied]
            pick = int(np.argmin(z_ints))
            return z_ints[pick], float(weights[tied[pick]])
    return _fallback_z(t), 0.0


def _fallback_z(t: StabilizerTableau) -> int:
    """Smallest diagonal string commuting with and independent of the group."""
    n = t.n_qubits
    # RREF over GF(2) of the <z, row.x> parity constraints
    pivots: dict[int, int] = {}
    for r in t.rows:
        v = r.x
        for p, rv in pivots.items():
            if (v >> p) & 1:
                v ^= rv
        if v:
            p = v.bit_length() - 1
            for q in list(pivots):
                if (pivots[q] >> p) & 1:
                    pivots[q] ^= v
            pivots[p] = v
    for f in range(n):
        if f in pivots:
            continue
        vec = 1 << f
        for p, rv in pivots.items():
            if (rv >> f) & 1:
                vec |= 1 << p
        _, z, _ = t._reduce(0, vec, 0)
        if z:
            return z
    raise DefectError("no independent diagonal completion exists")


# -- sign refinement ---------------------------------------------------------


def sign_hillclimb(t: StabilizerTableau, h: PauliSum) -> StabilizerTableau:
    """Local search over generator sign assignments.

    Flipping the sign of canonical row i negates every Hamiltonian term
    whose reduction uses row i, so the landscape is an Ising model over the
    2^n sign vectors; single flips (and pair flips, which cover
    replace-by-product moves) are applied while they strictly lower the
    energy.
    """
    if not t.is_complete:
        raise ValueError("hillclimb needs a complete tableau")
    if len(h) == 0:
        return t.copy()
    g = t.g
    usage, member, ph = _usage_masks(t, h)
    if not member.any():
        return t.copy()
    cur = h.coefficients[member] * (1 - (ph[member] & 2))
    u = usage[member]  # (n_member_terms, g) boolean
    max_pair_rank = 32
    flips = 0
    improved = True
    while improved:
        improved = False
        deltas = -2.0 * (cur @ u)
        i = int(np.argmin(deltas))
        if deltas[i] < -1e-12:
            cur = np.where(u[:, i], -cur, cur)
            flips ^= 1 << i
            improved = True
            continue
        if g <= max_pair_rank:
            for i in range(g):
                for j in range(i + 1, g):
                    odd = u[:, i] ^ u[:, j]
                    delta = -2.0 * cur[odd].sum()
                    if delta < -1e-12:
                        cur = np.where(odd, -cur, cur)
                        flips ^= (1 << i) | (1 << j)
                        improved = True
                        break
                if improved:
                    break
    if not flips:
        return t.copy()
    out = t.copy()
    out.rows = [
        r._replace(ph=(r.ph + 2) & 3) if (flips >> i) & 1 else r
        for i, r in enumerate(out.rows)
    ]
    out._packed_cache = None
    return out


def _usage_masks(t: StabilizerTableau, h: PauliSum):
    """Which canonical rows each term's reduction uses, plus membership."""
    rx, rz, rph, piv = t._packed_rows()
    cur_x = h.x_words.copy()
    cur_z = h.z_words.copy()
    anti = t.anticommutation_mask(cur_x, cur_z)
    ph = np.bitwise_count(cur_x & cur_z).sum(axis=1, dtype=np.int64)
    usage = np.zeros((len(cur_x), len(rx)), dtype=bool)
    one = np.uint64(1)
    for i in range(len(rx)):
        is_x_block, wi, bi = piv[i]
        src = cur_x if is_x_block else cur_z
        sel = ((src[:, wi] >> bi) & one).astype(bool)
        sel &= ~anti
        if not sel.any():
            continue
        usage[sel, i] = True
        ph[sel] += rph[i] + 2 * _parity_words(cur_x[sel] & rz[i])
        cur_x[sel] ^= rx[i]
        cur_z[sel] ^= rz[i]
    in_group = ~(cur_x.any(axis=1) | cur_z.any(axis=1)) & ~anti
    if (ph[in_group] & 1).any():
        raise DefectError("member reduction left an imaginary phase")
    return usage, in_group, (ph & 3)
