"""Molecular integrals over contracted Cartesian Gaussians.

Hermite-expansion (McMurchie-Davidson) evaluation of overlap, kinetic,
nuclear-attraction, and two-electron repulsion integrals.  The basis
construction only emits s and p functions, so every recursion here stays
shallow; the two-electron loop batches all primitive quartets of a
contracted quartet through numpy and screens contracted pairs with the
Schwarz bound.

All distances are in bohr and all results in hartree-compatible atomic
units.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammainc, gammaln

from .basis import BasisFunction

SCHWARZ_CUTOFF = 1e-14


def boys(m_max: int, t: np.ndarray) -> np.ndarray:
    """Boys functions F_0..F_m_max, stacked on the leading axis.

    Uses the regularized lower incomplete gamma; the t -> 0 limit
    1/(2m+1) is substituted below 1e-12 where the ratio form loses
    digits.
    """
    t = np.asarray(t, dtype=np.float64)
    safe = np.maximum(t, 1e-12)
    out = np.empty((m_max + 1,) + t.shape, dtype=np.float64)
    for m in range(m_max + 1):
        a = m + 0.5
        gamma_a = math.exp(gammaln(a))
        full = gammainc(a, safe) * gamma_a / (2.0 * safe**a)
        out[m] = np.where(t < 1e-12, 1.0 / (2 * m + 1), full)
    return out


def _hermite_e(
    i: int, j: int, t: int, dist: float, a: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """Hermite expansion coefficient E_t^{ij} for one Cartesian direction.

    `dist` is the center separation A_d - B_d; `a`, `b` are primitive
    exponent arrays broadcast elementwise.
    """
    p = a + b
    if t < 0 or t > i + j:
        return np.zeros_like(p)
    if i == 0 and j == 0 and t == 0:
        return np.exp(-a * b / p * dist * dist)
    if i > 0:
        return (
            _hermite_e(i - 1, j, t - 1, dist, a, b) / (2.0 * p)
            + (-b / p * dist) * _hermite_e(i - 1, j, t, dist, a, b)
            + (t + 1) * _hermite_e(i - 1, j, t + 1, dist, a, b)
        )
    return (
        _hermite_e(i, j - 1, t - 1, dist, a, b) / (2.0 * p)
        + (a / p * dist) * _hermite_e(i, j - 1, t, dist, a, b)
        + (t + 1) * _hermite_e(i, j - 1, t + 1, dist, a, b)
    )


def _hermite_coulomb(
    t: int,
    u: int,
    v: int,
    order: int,
    pq: np.ndarray,
    f_boys: np.ndarray,
    omega: np.ndarray,
    memo: dict,
) -> np.ndarray:
    key = (order, t, u, v)
    if key in memo:
        return memo[key]
    if t == u == v == 0:
        val = (-2.0 * omega) ** order * f_boys[order]
    elif t > 0:
        val = pq[..., 0] * _hermite_coulomb(
            t - 1, u, v, order + 1, pq, f_boys, omega, memo
        )
        if t > 1:
            val = val + (t - 1) * _hermite_coulomb(
                t - 2, u, v, order + 1, pq, f_boys, omega, memo
            )
    elif u > 0:
        val = pq[..., 1] * _hermite_coulomb(
            t, u - 1, v, order + 1, pq, f_boys, omega, memo
        )
        if u > 1:
            val = val + (u - 1) * _hermite_coulomb(
                t, u - 2, v, order + 1, pq, f_boys, omega, memo
            )
    else:
        val = pq[..., 2] * _hermite_coulomb(
            t, u, v - 1, order + 1, pq, f_boys, omega, memo
        )
        if v > 1:
            val = val + (v - 1) * _hermite_coulomb(
                t, u, v - 2, order + 1, pq, f_boys, omega, memo
            )
    memo[key] = val
    return val


def _pair_arrays(f1: BasisFunction, f2: BasisFunction):
    """Meshed primitive exponents, coefficient products, and composites."""
    a = np.repeat(f1.exponents, len(f2.exponents))
    b = np.tile(f2.exponents, len(f1.exponents))
    c = np.repeat(f1.coefficients, len(f2.coefficients)) * np.tile(
        f2.coefficients, len(f1.coefficients)
    )
    p = a + b
    centers = (a[:, None] * f1.center + b[:, None] * f2.center) / p[:, None]
    return a, b, c, p, centers


def _overlap_1d(
    f1: BasisFunction, f2: BasisFunction, a: np.ndarray, b: np.ndarray, shift=(0, 0, 0)
) -> np.ndarray:
    """Product of E_0 factors, optionally shifting the ket powers."""
    out = np.ones_like(a)
    for d in range(3):
        out = out * _hermite_e(
            f1.powers[d],
            f2.powers[d] + shift[d],
            0,
            f1.center[d] - f2.center[d],
            a,
            b,
        )
    return out


def overlap_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    s = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            a, b, c, p, _ = _pair_arrays(basis[i], basis[j])
            val = np.sum(c * (np.pi / p) ** 1.5 * _overlap_1d(basis[i], basis[j], a, b))
            s[i, j] = s[j, i] = val
    return s


def kinetic_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    t_mat = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            f1, f2 = basis[i], basis[j]
            a, b, c, p, _ = _pair_arrays(f1, f2)
            pref = c * (np.pi / p) ** 1.5
            l2, m2, n2 = f2.powers
            term = b * (2 * (l2 + m2 + n2) + 3) * _overlap_1d(f1, f2, a, b)
            term = term - 2.0 * b**2 * (
                _overlap_1d(f1, f2, a, b, (2, 0, 0))
                + _overlap_1d(f1, f2, a, b, (0, 2, 0))
                + _overlap_1d(f1, f2, a, b, (0, 0, 2))
            )
            # the down-shift terms vanish for s and p kets
            if l2 > 1:
                term = term - 0.5 * l2 * (l2 - 1) * _overlap_1d(f1, f2, a, b, (-2, 0, 0))
            if m2 > 1:
                term = term - 0.5 * m2 * (m2 - 1) * _overlap_1d(f1, f2, a, b, (0, -2, 0))
            if n2 > 1:
                term = term - 0.5 * n2 * (n2 - 1) * _overlap_1d(f1, f2, a, b, (0, 0, -2))
            t_mat[i, j] = np.sum(pref * term)
    return t_mat


def _pair_hermite_table(f1: BasisFunction, f2: BasisFunction, a, b):
    """E coefficients for every (t, u, v) the pair can reach, per dimension."""
    tables = []
    for d in range(3):
        i, j = f1.powers[d], f2.powers[d]
        dist = f1.center[d] - f2.center[d]
        tables.append([_hermite_e(i, j, t, dist, a, b) for t in range(i + j + 1)])
    return tables


def nuclear_matrix(
    basis: list[BasisFunction], charges: np.ndarray, coords: np.ndarray
) -> np.ndarray:
    n = len(basis)
    v_mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            f1, f2 = basis[i], basis[j]
            a, b, c, p, centers = _pair_arrays(f1, f2)
            tables = _pair_hermite_table(f1, f2, a, b)
            m_max = f1.total_angular_momentum + f2.total_angular_momentum
            total = np.zeros_like(p)
            for charge, nucleus in zip(charges, coords):
                pc = centers - nucleus
                f_boys = boys(m_max, p * np.sum(pc * pc, axis=1))
                memo: dict = {}
                acc = np.zeros_like(p)
                for t in range(len(tables[0])):
                    for u in range(len(tables[1])):
                        for v in range(len(tables[2])):
                            acc = acc + (
                                tables[0][t]
                                * tables[1][u]
                                * tables[2][v]
                                * _hermite_coulomb(t, u, v, 0, pc, f_boys, p, memo)
                            )
                total = total - charge * acc
            val = np.sum(c * (2.0 * np.pi / p) * total)
            v_mat[i, j] = v_mat[j, i] = val
    return v_mat


class _ShellPair:
    """Precomputed contracted-pair data reused across the quartet loop."""

    __slots__ = ("i", "j", "p", "centers", "combos", "schwarz")

    def __init__(self, f1: BasisFunction, f2: BasisFunction, i: int, j: int):
        a, b, c, p, centers = _pair_arrays(f1, f2)
        self.i, self.j = i, j
        self.p = p
        self.centers = centers
        tables = _pair_hermite_table(f1, f2, a, b)
        self.combos = []
        for t in range(len(tables[0])):
            for u in range(len(tables[1])):
                for v in range(len(tables[2])):
                    weight = c * tables[0][t] * tables[1][u] * tables[2][v]
                    self.combos.append(((t, u, v), weight))
        self.schwarz = 0.0


def _quartet(p1: _ShellPair, p2: _ShellPair) -> float:
    alpha = p1.p[:, None]
    beta = p2.p[None, :]
    omega = alpha * beta / (alpha + beta)
    pq = p1.centers[:, None, :] - p2.centers[None, :, :]
    m_max = max(sum(c1[0]) for c1 in p1.combos) + max(sum(c2[0]) for c2 in p2.combos)
    f_boys = boys(m_max, omega * np.sum(pq * pq, axis=2))
    pref = (
        2.0 * np.pi**2.5 / (alpha * beta * np.sqrt(alpha + beta))
    )
    memo: dict = {}
    val = 0.0
    for (t, u, v), bra in p1.combos:
        for (tt, uu, vv), ket in p2.combos:
            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
            r_tuv = _hermite_coulomb(
                t + tt, u + uu, v + vv, 0, pq, f_boys, omega, memo
            )
            val += sign * float(np.einsum("i,j,ij->", bra, ket, r_tuv * pref))
    return val


def eri_tensor(
    basis: list[BasisFunction], screen: float = SCHWARZ_CUTOFF
) -> np.ndarray:
    """Full (ij|kl) tensor in chemist notation with 8-fold symmetry filled."""
    n = len(basis)
    pairs = []
    for i in range(n):
        for j in range(i + 1):
            pairs.append(_ShellPair(basis[i], basis[j], i, j))
    for pair in pairs:
        pair.schwarz = math.sqrt(max(_quartet(pair, pair), 0.0))
    eri = np.zeros((n, n, n, n))
    for a_idx in range(len(pairs)):
        pa = pairs[a_idx]
        for b_idx in range(a_idx + 1):
            pb = pairs[b_idx]
            if pa.schwarz * pb.schwarz < screen:
                continue
            val = _quartet(pa, pb)
            i, j, k, l = pa.i, pa.j, pb.i, pb.j
            eri[i, j, k, l] = eri[j, i, k, l] = val
            eri[i, j, l, k] = eri[j, i, l, k] = val
            eri[k, l, i, j] = eri[l, k, i, j] = val
            eri[k, l, j, i] = eri[l, k, j, i] = val
    return eri


def nuclear_repulsion(charges: np.ndarray, coords: np.ndarray) -> float:
    e = 0.0
    for i in range(len(charges)):
        for j in range(i):
            e += charges[i] * charges[j] / np.linalg.norm(coords[i] - coords[j])
    return float(e)
