"""From a molecule specification to reference energies and qubit Hamiltonians.

This is the glue layer: build the integrals for one geometry, pick an
orthonormal orbital set (converged mean-field orbitals when available, core
orbitals otherwise), and hand the transformed integrals to the correlated
solvers or the qubit mapping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ccsd, fci, integrals, jw, scf
from .basis import ATOMIC_NUMBER, build_basis
from .errors import CapacityError, ConvergenceError, ScfError
from .molecules import Geometry, MoleculeSpec, coords_bohr
from .references import ReferenceRow, ReferenceTable

# Ground-state spin multiplicities of the isolated atoms we can reference.
ATOM_MULTIPLICITY = {"H": 2, "C": 3, "O": 3}


def atom_spec(element: str, charge: int = 0) -> MoleculeSpec:
    return MoleculeSpec(
        name=element.lower(),
        geometry=((element, (0.0, 0.0, 0.0)),),
        charge=charge,
        multiplicity=ATOM_MULTIPLICITY[element],
    )


def spin_counts(n_electrons: int, multiplicity: int) -> tuple[int, int]:
    """Alpha/beta electron counts for the requested spin sector."""
    n_alpha = (n_electrons + multiplicity - 1) // 2
    n_beta = n_electrons - n_alpha
    if n_beta < 0 or n_alpha - n_beta != multiplicity - 1:
        raise ValueError(
            f"multiplicity {multiplicity} impossible for {n_electrons} electrons"
        )
    return n_alpha, n_beta


@dataclass(frozen=True)
class ElectronicSystem:
    """AO integrals for a single geometry."""

    elements: tuple[str, ...]
    coords: np.ndarray  # bohr
    basis: list
    s: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray
    e_nuc: float
    n_electrons: int

    @property
    def n_orbitals(self) -> int:
        return len(self.basis)


def build_system(geometry: Geometry, charge: int = 0) -> ElectronicSystem:
    elements = [el for el, _ in geometry]
    coords = coords_bohr(geometry)
    basis = build_basis(elements, coords)
    charges = np.array([ATOMIC_NUMBER[el] for el in elements], dtype=np.float64)
    s = integrals.overlap_matrix(basis)
    hcore = integrals.kinetic_matrix(basis) + integrals.nuclear_matrix(basis, charges, coords)
    eri = integrals.eri_tensor(basis)
    e_nuc = integrals.nuclear_repulsion(charges, coords)
    n_el = int(charges.sum()) - charge
    return ElectronicSystem(
        elements=tuple(elements),
        coords=coords,
        basis=basis,
        s=s,
        hcore=hcore,
        eri=eri,
        e_nuc=e_nuc,
        n_electrons=n_el,
    )


def core_orbitals(system: ElectronicSystem) -> np.ndarray:
    """Orthonormal fallback orbitals: core Hamiltonian eigenvectors in the
    symmetrically orthogonalized basis.  Any orthonormal set gives the same
    exact diagonalization; this one at least orders by one-electron energy."""
    x = scf._symmetric_orthogonalizer(system.s)
    _, vecs = np.linalg.eigh(x.T @ system.hcore @ x)
    return x @ vecs


@dataclass(frozen=True)
class SolvedPoint:
    """One geometry with an orbital basis chosen (mean field if it ran)."""

    system: ElectronicSystem
    mo_coeff: np.ndarray
    mo_energy: np.ndarray | None
    scf_result: scf.ScfResult | None
    notes: tuple[str, ...]

    @property
    def hf_total(self) -> float | None:
        return None if self.scf_result is None else self.scf_result.energy_total


def solve_point(spec: MoleculeSpec, value: float | None = None) -> SolvedPoint:
    geometry = spec.geometry_at(value)
    system = build_system(geometry, spec.charge)
    notes: list[str] = []
    scf_result = None
    closed_shell = spec.multiplicity == 1 and system.n_electrons % 2 == 0
    if closed_shell:
        guess = scf.sad_density(system.basis, list(system.elements))
        where = f"{spec.name} at {value!r}" if value is not None else spec.name
        try:
            scf_result = scf.rhf_auto(
                system.s,
                system.hcore,
                system.eri,
                system.e_nuc,
                system.n_electrons,
                guess_density=guess,
                context=where,
            )
        except ScfError as exc:
            notes.append(f"scf failed: {exc}")
    else:
        notes.append("open shell; mean field skipped")
    if scf_result is not None:
        mo_coeff = scf_result.mo_coeff
        mo_energy = scf_result.mo_energy
    else:
        mo_coeff = core_orbitals(system)
        mo_energy = None
    return SolvedPoint(system, mo_coeff, mo_energy, scf_result, tuple(notes))


def fci_total(point: SolvedPoint, multiplicity: int, dim_limit: int | None = None):
    """Exact diagonalization in the point's orbital basis, total energy."""
    system = point.system
    n_alpha, n_beta = spin_counts(system.n_electrons, multiplicity)
    h_mo, eri_mo = fci.ao_to_mo(system.hcore, system.eri, point.mo_coeff)
    kwargs = {} if dim_limit is None else {"dim_limit": dim_limit}
    result = fci.fci_ground_energy(
        h_mo, eri_mo, n_alpha, n_beta, offset=system.e_nuc, **kwargs
    )
    return result


def ccsd_total(point: SolvedPoint) -> float:
    """Mean field plus coupled-cluster correlation; needs converged orbitals."""
    if point.scf_result is None:
        raise ConvergenceError("no mean-field reference for coupled cluster")
    system = point.system
    _, eri_mo = fci.ao_to_mo(system.hcore, system.eri, point.mo_coeff)
    result = ccsd.ccsd_correlation(
        eri_mo, point.mo_energy, point.scf_result.n_occupied
    )
    return point.scf_result.energy_total + result.energy_correlation


def compute_point(
    spec: MoleculeSpec,
    value: float | None = None,
    fci_limit: int | None = None,
    with_ccsd: bool = True,
    point: SolvedPoint | None = None,
):
    """HF/CCSD/FCI totals for one geometry; missing entries stay None."""
    if point is None:
        point = solve_point(spec, value)
    notes = list(point.notes)
    hf = point.hf_total

    fci_energy = None
    try:
        fci_energy = fci_total(point, spec.multiplicity, fci_limit).energy
    except CapacityError as exc:
        notes.append(f"fci skipped: {exc}")

    ccsd_energy = None
    if with_ccsd and hf is not None:
        try:
            ccsd_energy = ccsd_total(point)
        except CapacityError as exc:
            notes.append(f"ccsd skipped: {exc}")
        except ConvergenceError as exc:
            notes.append(f"ccsd failed: {exc}")
    # Coupled cluster is not variational; at stretched geometries it can
    # land below the exact energy.  Such a value is not a usable reference,
    # so it is dropped and the reason recorded.
    if ccsd_energy is not None and fci_energy is not None:
        if ccsd_energy < fci_energy - 1e-6:
            notes.append(
                f"ccsd dropped: {ccsd_energy:.6f} below exact {fci_energy:.6f}"
            )
            ccsd_energy = None
    return hf, ccsd_energy, fci_energy, "; ".join(notes)


def generate_references(
    spec: MoleculeSpec,
    values=None,
    fci_limit: int | None = None,
    with_ccsd: bool = True,
) -> ReferenceTable:
    """One row per scan value; failed or skipped methods are marked, not faked."""
    if values is None:
        if spec.scan is None:
            raise ValueError("spec has no scan and no explicit values given")
        values = spec.scan.values
    rows = []
    for value in values:
        hf, ccsd_energy, fci_energy, note = compute_point(
            spec, value, fci_limit=fci_limit, with_ccsd=with_ccsd
        )
        rows.append(
            ReferenceRow(
                parameter=float(value),
                hf=hf,
                ccsd=ccsd_energy,
                fci=fci_energy,
                note=note,
            )
        )
    return ReferenceTable(tuple(rows))


@dataclass(frozen=True)
class GeneratedHamiltonian:
    spec: MoleculeSpec
    value: float | None
    hamiltonian: jw.QubitHamiltonian
    scf_result: scf.ScfResult
    system: ElectronicSystem

    @property
    def hf_mask(self) -> int:
        return jw.hartree_fock_mask(self.system.n_orbitals, self.scf_result.n_occupied)

    def metadata(self) -> dict:
        meta = {
            "basis": self.spec.basis,
            "e_nuc": repr(self.system.e_nuc),
            "e_scf": repr(self.scf_result.energy_total),
            "molecule": self.spec.name,
            "n_electrons": str(self.system.n_electrons),
            "n_spatial_orbitals": str(self.system.n_orbitals),
            "source": "stabchem",
        }
        if self.value is not None and self.spec.scan is not None:
            meta["parameter"] = f"{self.spec.scan.name}={float(self.value)!r}"
        for key, val in self.spec.metadata.items():
            meta.setdefault(key, val)
        return dict(sorted(meta.items()))


def generate_hamiltonian(
    spec: MoleculeSpec,
    value: float | None = None,
    threshold: float = jw.EMISSION_THRESHOLD,
    point: SolvedPoint | None = None,
) -> GeneratedHamiltonian:
    """Qubit Hamiltonian in the mean-field orbital basis for one geometry.

    The nuclear repulsion is folded into the identity coefficient, so the
    minimum eigenvalue is the total electronic-structure energy and the
    Hartree-Fock basis state sits exactly at the mean-field total.
    """
    if point is None:
        point = solve_point(spec, value)
    if point.scf_result is None:
        raise ScfError(
            f"cannot emit a Hamiltonian for {spec.name}: " + "; ".join(point.notes)
        )
    system = point.system
    h_mo, eri_mo = fci.ao_to_mo(system.hcore, system.eri, point.mo_coeff)
    ham = jw.jordan_wigner(h_mo, eri_mo, constant=system.e_nuc, threshold=threshold)
    return GeneratedHamiltonian(spec, value, ham, point.scf_result, system)


def write_generated(path, generated: GeneratedHamiltonian) -> None:
    jw.write_hamiltonian(path, generated.hamiltonian, generated.metadata())


def write_hf_state(path, generated: GeneratedHamiltonian) -> None:
    jw.write_determinant_stabilizers(
        path,
        generated.hamiltonian.n_qubits,
        generated.hf_mask,
        comment=f"mean-field determinant of {generated.spec.name}",
    )
