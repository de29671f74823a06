"""Spin-orbital coupled cluster with singles and doubles.

Canonical-orbital formulation: the Fock matrix is assumed diagonal, so
every f_ov contraction drops out and orbital energies live only in the
denominators.  Amplitudes converge with DIIS; non-convergence raises
ConvergenceError so scan drivers can record the point as missing, which
is the expected outcome at strongly stretched geometries.

Two-electron systems are exact here (CCSD contains their FCI), which the
tests exploit as an end-to-end oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConvergenceError

MAX_SPIN_ORBITALS = 80


@dataclass(frozen=True)
class CcsdResult:
    energy_correlation: float
    energy_mp2: float
    iterations: int


def spin_orbital_blocks(eri_mo: np.ndarray, mo_energy: np.ndarray, n_occ: int):
    """Antisymmetrized <pq||rs> and orbital energies, occupied first.

    Spin orbitals are ordered: occupied (both spins), then virtual.
    """
    n = eri_mo.shape[0]
    nso = 2 * n
    if nso > MAX_SPIN_ORBITALS:
        raise CapacityError(f"{nso} spin orbitals exceed the CCSD limit {MAX_SPIN_ORBITALS}")
    phys = np.transpose(eri_mo, (0, 2, 1, 3))
    so = np.zeros((nso, nso, nso, nso))
    for s1 in (0, 1):
        for s2 in (0, 1):
            block = (slice(s1 * n, (s1 + 1) * n), slice(s2 * n, (s2 + 1) * n))
            so[block[0], block[1], block[0], block[1]] = phys
    aso = so - so.transpose(0, 1, 3, 2)
    eps = np.concatenate([mo_energy, mo_energy])
    occupied = list(range(n_occ)) + list(range(n, n + n_occ))
    virtual = [p for p in range(nso) if p not in occupied]
    order = occupied + virtual
    aso = aso[np.ix_(order, order, order, order)]
    return aso, eps[order], 2 * n_occ


def ccsd_correlation(
    eri_mo: np.ndarray,
    mo_energy: np.ndarray,
    n_occ: int,
    max_iterations: int = 200,
    conv_tolerance: float = 1e-9,
    diis_size: int = 8,
) -> CcsdResult:
    g, eps, no = spin_orbital_blocks(eri_mo, mo_energy, n_occ)
    nso = len(eps)
    nv = nso - no
    o, v = slice(0, no), slice(no, nso)
    d1 = eps[o, None] - eps[None, v]
    d2 = (
        eps[o, None, None, None]
        + eps[None, o, None, None]
        - eps[None, None, v, None]
        - eps[None, None, None, v]
    )
    t1 = np.zeros((no, nv))
    t2 = g[o, o, v, v] / d2
    e_mp2 = 0.25 * float(np.einsum("ijab,ijab->", g[o, o, v, v], t2))

    def energy(t1, t2):
        e = 0.25 * np.einsum("ijab,ijab->", g[o, o, v, v], t2)
        e += 0.5 * np.einsum("ijab,ia,jb->", g[o, o, v, v], t1, t1)
        return float(e)

    diis_vecs: list[np.ndarray] = []
    diis_errs: list[np.ndarray] = []
    e_old = e_mp2
    for iteration in range(1, max_iterations + 1):
        tau_t = t2 + 0.5 * (
            np.einsum("ia,jb->ijab", t1, t1) - np.einsum("ib,ja->ijab", t1, t1)
        )
        tau = t2 + (
            np.einsum("ia,jb->ijab", t1, t1) - np.einsum("ib,ja->ijab", t1, t1)
        )

        fae = np.einsum("mf,mafe->ae", t1, g[o, v, v, v])
        fae -= 0.5 * np.einsum("mnaf,mnef->ae", tau_t, g[o, o, v, v])
        fmi = np.einsum("ne,mnie->mi", t1, g[o, o, o, v])
        fmi += 0.5 * np.einsum("inef,mnef->mi", tau_t, g[o, o, v, v])
        fme = np.einsum("nf,mnef->me", t1, g[o, o, v, v])

        wmnij = g[o, o, o, o].copy()
        pij = np.einsum("je,mnie->mnij", t1, g[o, o, o, v])
        wmnij += pij - pij.transpose(0, 1, 3, 2)
        wmnij += 0.25 * np.einsum("ijef,mnef->mnij", tau, g[o, o, v, v])

        wabef = g[v, v, v, v].copy()
        pab = np.einsum("mb,amef->abef", t1, g[v, o, v, v])
        wabef -= pab - pab.transpose(1, 0, 2, 3)
        wabef += 0.25 * np.einsum("mnab,mnef->abef", tau, g[o, o, v, v])

        wmbej = g[o, v, v, o].copy()
        wmbej += np.einsum("jf,mbef->mbej", t1, g[o, v, v, v])
        wmbej -= np.einsum("nb,mnej->mbej", t1, g[o, o, v, o])
        wmbej -= np.einsum(
            "jnfb,mnef->mbej",
            0.5 * t2 + np.einsum("jf,nb->jnfb", t1, t1),
            g[o, o, v, v],
        )

        t1_new = np.einsum("ie,ae->ia", t1, fae)
        t1_new -= np.einsum("ma,mi->ia", t1, fmi)
        t1_new += np.einsum("imae,me->ia", t2, fme)
        t1_new -= np.einsum("nf,naif->ia", t1, g[o, v, o, v])
        t1_new -= 0.5 * np.einsum("imef,maef->ia", t2, g[o, v, v, v])
        t1_new -= 0.5 * np.einsum("mnae,nmei->ia", t2, g[o, o, v, o])
        t1_new = t1_new / d1

        fae_mod = fae - 0.5 * np.einsum("mb,me->be", t1, fme)
        fmi_mod = fmi + 0.5 * np.einsum("je,me->mj", t1, fme)

        t2_new = g[o, o, v, v].copy()
        term = np.einsum("ijae,be->ijab", t2, fae_mod)
        t2_new += term - term.transpose(0, 1, 3, 2)
        term = np.einsum("imab,mj->ijab", t2, fmi_mod)
        t2_new -= term - term.transpose(1, 0, 2, 3)
        t2_new += 0.5 * np.einsum("mnab,mnij->ijab", tau, wmnij)
        t2_new += 0.5 * np.einsum("ijef,abef->ijab", tau, wabef)
        term = np.einsum("imae,mbej->ijab", t2, wmbej)
        term -= np.einsum("ie,ma,mbej->ijab", t1, t1, g[o, v, v, o])
        term = term - term.transpose(0, 1, 3, 2)
        t2_new += term - term.transpose(1, 0, 2, 3)
        term = np.einsum("ie,abej->ijab", t1, g[v, v, v, o])
        t2_new += term - term.transpose(1, 0, 2, 3)
        term = np.einsum("ma,mbij->ijab", t1, g[o, v, o, o])
        t2_new -= term - term.transpose(0, 1, 3, 2)
        t2_new = t2_new / d2

        step = np.concatenate([(t1_new - t1).ravel(), (t2_new - t2).ravel()])
        flat = np.concatenate([t1_new.ravel(), t2_new.ravel()])
        # divergence check: amplitudes blow up well before float overflow
        if not np.all(np.isfinite(flat)) or np.abs(flat).max() > 1e3:
            raise ConvergenceError(
                f"amplitudes diverged at iteration {iteration}"
            )
        if len(diis_vecs) >= diis_size:
            diis_vecs.pop(0)
            diis_errs.pop(0)
        diis_vecs.append(flat)
        diis_errs.append(step)
        if len(diis_vecs) > 1:
            flat = _diis(diis_vecs, diis_errs)
        t1 = flat[: no * nv].reshape(no, nv)
        t2 = flat[no * nv :].reshape(no, no, nv, nv)

        e_new = energy(t1, t2)
        rms = float(np.sqrt(np.mean(step**2)))
        if rms < conv_tolerance and abs(e_new - e_old) < 1e-10:
            return CcsdResult(
                energy_correlation=e_new, energy_mp2=e_mp2, iterations=iteration
            )
        e_old = e_new
    raise ConvergenceError(
        f"amplitudes not converged in {max_iterations} iterations (rms {rms:.3e})"
    )


def _diis(vecs: list[np.ndarray], errs: list[np.ndarray]) -> np.ndarray:
    m = len(vecs)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = float(errs[i] @ errs[j])
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        w = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return vecs[-1]
    return sum(wi * vi for wi, vi in zip(w, vecs))
