"""Restricted Hartree-Fock with DIIS, damping, and level shifting.

Closed-shell only: the qubit Hamiltonians downstream need one spatial
orbital set shared by both spins.  Stretched geometries converge with
the shift ladder in `rhf_auto`; plain DIIS is enough near equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ScfError


@dataclass(frozen=True)
class ScfResult:
    energy_total: float
    energy_electronic: float
    nuclear_repulsion: float
    mo_coeff: np.ndarray
    mo_energy: np.ndarray
    density: np.ndarray
    n_occupied: int
    iterations: int

    @property
    def occupation_mask(self) -> int:
        """Bit i set when spatial orbital i is doubly occupied."""
        return (1 << self.n_occupied) - 1


def _symmetric_orthogonalizer(s: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(s)
    if vals.min() < 1e-8:
        raise ScfError(f"overlap matrix nearly singular (min eigenvalue {vals.min():.3e})")
    return vecs @ np.diag(vals**-0.5) @ vecs.T


def sad_density(basis, elements: list[str]) -> np.ndarray:
    """Superposition-of-atomic-densities guess, diagonal in the AO basis."""
    shell_electrons = {"1s": 2.0, "2s": 2.0}
    per_element_p = {"C": 2.0 / 3.0, "O": 4.0 / 3.0}
    diag = []
    for f in basis:
        if f.name in shell_electrons:
            occ = shell_electrons[f.name]
            if f.name == "1s" and elements[f.atom_index] == "H":
                occ = 1.0
        else:
            occ = per_element_p[elements[f.atom_index]]
        diag.append(occ)
    return np.diag(diag)


def build_fock(hcore: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return hcore + j - 0.5 * k


def electronic_energy(hcore: np.ndarray, fock: np.ndarray, density: np.ndarray) -> float:
    return 0.5 * float(np.sum(density * (hcore + fock)))


def rhf(
    s: np.ndarray,
    hcore: np.ndarray,
    eri: np.ndarray,
    e_nuc: float,
    n_electrons: int,
    guess_density: np.ndarray | None = None,
    max_iterations: int = 300,
    conv_tolerance: float = 1e-10,
    level_shift: float = 0.0,
    damping: float = 0.0,
    damping_iterations: int = 10,
    diis_size: int = 8,
) -> ScfResult:
    if n_electrons % 2:
        raise ScfError(f"restricted solver needs an even electron count, got {n_electrons}")
    n_occ = n_electrons // 2
    x = _symmetric_orthogonalizer(s)
    x_inv = np.linalg.inv(x)

    def solve(fock, shift, density):
        f_orth = x.T @ fock @ x
        if shift:
            # push virtuals up by `shift` using the current density projector
            d_orth = x_inv @ (density / 2.0) @ x_inv.T
            f_orth = f_orth + shift * (np.eye(len(s)) - d_orth)
        eps, c_orth = np.linalg.eigh(f_orth)
        c = x @ c_orth
        occ = c[:, :n_occ]
        return eps, c, 2.0 * occ @ occ.T

    if guess_density is None:
        _, _, density = solve(hcore, 0.0, np.zeros_like(s))
    else:
        density = guess_density

    diis_focks: list[np.ndarray] = []
    diis_errors: list[np.ndarray] = []
    energy = 0.0
    for iteration in range(1, max_iterations + 1):
        fock = build_fock(hcore, eri, density)
        error = x.T @ (fock @ density @ s - s @ density @ fock) @ x
        energy_new = electronic_energy(hcore, fock, density)
        error_norm = float(np.max(np.abs(error)))
        converged = error_norm < conv_tolerance and abs(energy_new - energy) < 1e-11
        energy = energy_new
        if converged and iteration > 1:
            eps, c, _ = solve(fock, 0.0, density)
            return ScfResult(
                energy_total=energy + e_nuc,
                energy_electronic=energy,
                nuclear_repulsion=e_nuc,
                mo_coeff=c,
                mo_energy=eps,
                density=density,
                n_occupied=n_occ,
                iterations=iteration,
            )
        if len(diis_errors) >= diis_size:
            diis_errors.pop(0)
            diis_focks.pop(0)
        diis_errors.append(error)
        diis_focks.append(fock)
        if len(diis_focks) > 1:
            fock = _diis_extrapolate(diis_focks, diis_errors)
        _, _, density_new = solve(fock, level_shift, density)
        if damping and iteration <= damping_iterations:
            density_new = (1.0 - damping) * density_new + damping * density
        density = density_new
    raise ScfError(
        f"no convergence in {max_iterations} iterations (error {error_norm:.3e})"
    )


def _diis_extrapolate(focks: list[np.ndarray], errors: list[np.ndarray]) -> np.ndarray:
    m = len(focks)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = float(np.sum(errors[i] * errors[j]))
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        weights = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(w * f for w, f in zip(weights, focks))


def rhf_auto(
    s: np.ndarray,
    hcore: np.ndarray,
    eri: np.ndarray,
    e_nuc: float,
    n_electrons: int,
    guess_density: np.ndarray | None = None,
    context: str = "",
) -> ScfResult:
    """RHF with an escalating shift/damping ladder for stretched geometries."""
    attempts = (
        {"level_shift": 0.0, "damping": 0.0},
        {"level_shift": 0.3, "damping": 0.3},
        {"level_shift": 1.0, "damping": 0.5, "damping_iterations": 40,
         "max_iterations": 600},
    )
    last: ScfError | None = None
    for kwargs in attempts:
        try:
            return rhf(s, hcore, eri, e_nuc, n_electrons,
                       guess_density=guess_density, **kwargs)
        except ScfError as exc:
            last = exc
    raise ScfError(f"{context}: {last}" if context else str(last))
