"""Stabilizer-state approximation of molecular ground states."""

from .errors import (
    CapacityError,
    ConvergenceError,
    DefectError,
    ParseError,
    StabgsError,
    TableauError,
)
from .pauli import (
    PauliString,
    PauliSum,
    PauliTerm,
    commutes,
    format_pauli,
    load_hamiltonian,
    multiply,
    parse_hamiltonian,
    parse_pauli,
    serialize_hamiltonian,
)
from .oracle import (
    ENUMERATION_MAX_QUBITS,
    STATEVECTOR_MAX_QUBITS,
    GroundStateDetail,
    apply_pauli,
    apply_sum,
    enumerate_stabilizer_energies,
    exact_ground_energy,
    ground_state_detail,
    stabilizer_energy_spectrum,
    stabilizer_state_count,
)
from .curves import (
    CurveEntry,
    CurveError,
    CurveManifest,
    CurvePoint,
    load_manifest,
    read_curve_csv,
    run_curve,
    write_curve_csv,
)
from .search import (
    Candidate,
    CompletionPolicy,
    SearchConfig,
    SearchResult,
    SearchStats,
    branch_search,
    complete_tableau,
    greedy_search,
    sign_hillclimb,
)
from .tableau import (
    AddOutcome,
    DecodedState,
    SignedPauli,
    StabilizerTableau,
    load_stabilizers,
    parse_signed_pauli,
    parse_stabilizers,
    serialize_stabilizers,
)

__version__ = "0.1.0"
