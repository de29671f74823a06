"""Minimal-basis molecular electronic structure for stabilizer-search inputs.

Everything is built from scratch on numpy/scipy primitives: STO-3G
integrals, restricted Hartree-Fock, determinant FCI, spin-orbital CCSD, and
a Jordan-Wigner emitter whose output files feed the stabilizer search tool
through its documented formats.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConvergenceError,
    ParseError,
    ScfError,
    StabchemError,
)
from .molecules import (
    BUILTIN_SPECS,
    MoleculeSpec,
    Scan,
    benzene_spec,
    h2_spec,
    load_molecule,
    parse_molecule,
    save_molecule,
    serialize_molecule,
    water_spec,
)
from .pipeline import (
    ATOM_MULTIPLICITY,
    GeneratedHamiltonian,
    atom_spec,
    build_system,
    compute_point,
    generate_hamiltonian,
    generate_references,
    solve_point,
    write_generated,
    write_hf_state,
)
from .references import (
    ReferenceRow,
    ReferenceTable,
    load_references,
    write_references,
)

__all__ = [
    "ATOM_MULTIPLICITY",
    "BUILTIN_SPECS",
    "CapacityError",
    "ConvergenceError",
    "GeneratedHamiltonian",
    "MoleculeSpec",
    "ParseError",
    "ReferenceRow",
    "ReferenceTable",
    "Scan",
    "ScfError",
    "StabchemError",
    "__version__",
    "atom_spec",
    "benzene_spec",
    "build_system",
    "compute_point",
    "generate_hamiltonian",
    "generate_references",
    "h2_spec",
    "load_molecule",
    "load_references",
    "parse_molecule",
    "save_molecule",
    "serialize_molecule",
    "solve_point",
    "water_spec",
    "write_generated",
    "write_hf_state",
    "write_references",
]
