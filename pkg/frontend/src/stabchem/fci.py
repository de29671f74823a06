"""Determinant-basis full configuration interaction.

Dense diagonalization over alpha/beta occupation strings, intended for
the small reference systems (H2, H2O, single atoms, the CH fragment).
Anything whose determinant count exceeds the limit raises CapacityError
and is reported as missing in the reference tables.

The solver works in whatever orthonormal orbital basis it is handed; the
energy is invariant under rotations within that space, which the tests
use to run atoms without a converged SCF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError

DEFAULT_DIMENSION_LIMIT = 4000


@dataclass(frozen=True)
class FciResult:
    energy: float
    dimension: int
    n_alpha: int
    n_beta: int


def fci_dimension(n_orbitals: int, n_alpha: int, n_beta: int) -> int:
    return math.comb(n_orbitals, n_alpha) * math.comb(n_orbitals, n_beta)


def ao_to_mo(h_ao: np.ndarray, eri_ao: np.ndarray, coeff: np.ndarray):
    h_mo = coeff.T @ h_ao @ coeff
    tmp = np.einsum("pi,pqrs->iqrs", coeff, eri_ao)
    tmp = np.einsum("qj,iqrs->ijrs", coeff, tmp)
    tmp = np.einsum("rk,ijrs->ijks", coeff, tmp)
    eri_mo = np.einsum("sl,ijks->ijkl", coeff, tmp)
    return h_mo, eri_mo


def _strings(n_orbitals: int, n_occ: int) -> list[int]:
    out = []
    for occ in combinations(range(n_orbitals), n_occ):
        bits = 0
        for orb in occ:
            bits |= 1 << orb
        out.append(bits)
    return out


def _occupied(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _single_sign(bits: int, hole: int, particle: int) -> int:
    lo, hi = (hole, particle) if hole < particle else (particle, hole)
    between = bits & (((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1))
    return -1 if between.bit_count() % 2 else 1


def _single_excitation(src: int, dst: int):
    """(hole, particle, sign) for strings one excitation apart."""
    diff = src ^ dst
    hole = (src & diff).bit_length() - 1
    particle = (dst & diff).bit_length() - 1
    return hole, particle, _single_sign(src, hole, particle)


def _double_excitation(src: int, dst: int):
    diff = src ^ dst
    h1, h2 = _occupied(src & diff)
    p1, p2 = _occupied(dst & diff)
    sign = _single_sign(src, h1, p1)
    mid = (src ^ (1 << h1)) | (1 << p1)
    sign *= _single_sign(mid, h2, p2)
    return h1, h2, p1, p2, sign


def fci_ground_energy(
    h_mo: np.ndarray,
    eri_mo: np.ndarray,
    n_alpha: int,
    n_beta: int,
    offset: float = 0.0,
    dim_limit: int = DEFAULT_DIMENSION_LIMIT,
) -> FciResult:
    n_orb = h_mo.shape[0]
    dim = fci_dimension(n_orb, n_alpha, n_beta)
    if dim > dim_limit:
        raise CapacityError(
            f"determinant space of size {dim} exceeds the limit {dim_limit}"
        )
    alphas = _strings(n_orb, n_alpha)
    betas = _strings(n_orb, n_beta)
    j_mat = np.einsum("iijj->ij", eri_mo)
    k_mat = np.einsum("ijji->ij", eri_mo)

    def one_spin_element(src: int, dst: int, occ_other: list[int]) -> float:
        """Matrix element when only one spin string changes."""
        degree = (src ^ dst).bit_count() // 2
        occ = _occupied(src)
        if degree == 1:
            i, a, sign = _single_excitation(src, dst)
            val = h_mo[i, a]
            for j in occ:
                val += eri_mo[i, a, j, j] - eri_mo[i, j, j, a]
            for j in occ_other:
                val += eri_mo[i, a, j, j]
            return sign * val
        i, j, a, b, sign = _double_excitation(src, dst)
        return sign * (eri_mo[i, a, j, b] - eri_mo[i, b, j, a])

    def diagonal(occ_a: list[int], occ_b: list[int]) -> float:
        val = sum(h_mo[i, i] for i in occ_a) + sum(h_mo[i, i] for i in occ_b)
        for same in (occ_a, occ_b):
            for x, i in enumerate(same):
                for j in same[:x]:
                    val += j_mat[i, j] - k_mat[i, j]
        for i in occ_a:
            for j in occ_b:
                val += j_mat[i, j]
        return val

    occ_a_lists = [_occupied(s) for s in alphas]
    occ_b_lists = [_occupied(s) for s in betas]
    hmat = np.zeros((dim, dim))
    for ia, sa in enumerate(alphas):
        for ib, sb in enumerate(betas):
            row = ia * len(betas) + ib
            hmat[row, row] = diagonal(occ_a_lists[ia], occ_b_lists[ib])
            for ja in range(ia, len(alphas)):
                da = (sa ^ alphas[ja]).bit_count() // 2
                if da > 2:
                    continue
                for jb in range(len(betas)):
                    if ja == ia and jb <= ib:
                        continue
                    db = (sb ^ betas[jb]).bit_count() // 2
                    if da + db > 2 or da + db == 0:
                        continue
                    col = ja * len(betas) + jb
                    if db == 0:
                        val = one_spin_element(sa, alphas[ja], occ_b_lists[ib])
                    elif da == 0:
                        val = one_spin_element(sb, betas[jb], occ_a_lists[ia])
                    else:
                        i, a, sign_a = _single_excitation(sa, alphas[ja])
                        j, b, sign_b = _single_excitation(sb, betas[jb])
                        val = sign_a * sign_b * eri_mo[i, a, j, b]
                    hmat[row, col] = hmat[col, row] = val
    energy = float(np.linalg.eigvalsh(hmat)[0]) + offset
    return FciResult(energy=energy, dimension=dim, n_alpha=n_alpha, n_beta=n_beta)
