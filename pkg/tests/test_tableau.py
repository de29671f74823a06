import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference as ref
from stabgs.errors import CapacityError, ParseError, TableauError
from stabgs.pauli import PauliSum, parse_pauli
from stabgs.tableau import (
    AddOutcome,
    SignedPauli,
    StabilizerTableau,
    parse_signed_pauli,
    parse_stabilizers,
    serialize_stabilizers,
)

HF_EQ_GENS = ["+ZIII", "+IIZI", "-IZII", "-IIIZ"]  # |01;01> tableau
STRETCH_GENS = ["-ZIZI", "-ZIIZ", "-IZZI"]  # stretched-H2 partial tableau
RESONATING_GENS = ["-ZIZI", "-IZIZ", "-XXYY", "-IIZZ"]


def random_tableau(rng, n, g=None, diagonal_only=False):
    """Random valid tableau grown by rejection sampling."""
    t = StabilizerTableau(n)
    target = n if g is None else g
    attempts = 0
    while t.g < target and attempts < 2000:
        attempts += 1
        x = 0 if diagonal_only else int(rng.integers(0, 1 << n))
        z = int(rng.integers(0, 1 << n))
        if x == 0 and z == 0:
            continue
        sign = 1 if rng.integers(0, 2) else -1
        t.try_add(SignedPauli(sign, parse_pauli_bits(n, x, z)))
    assert t.g == target
    return t


def parse_pauli_bits(n, x, z):
    from stabgs.pauli import PauliString

    return PauliString(n, x, z, 0)


def dense_of(sp):
    return sp.sign * ref.dense_from_label(sp.string.label)


def tableau_state(t):
    """Dense statevector via projector eigendecomposition (independent path)."""
    gens = [(sp.sign, sp.string.label) for sp in t.generators]
    p = ref.stabilizer_projector(t.n_qubits, gens)
    vals, vecs = np.linalg.eigh(p)
    assert np.isclose(vals[-1], 1.0)
    return vecs[:, -1]


class TestTryAdd:
    def test_hf_sequence_all_added(self):
        t = StabilizerTableau(4)
        for g in HF_EQ_GENS:
            assert t.try_add(g) is AddOutcome.ADDED
        assert t.is_complete

    def test_dependent_consistent_product(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        # (+ZIII) * (-IZII) = -ZZII
        assert t.try_add("-ZZII") is AddOutcome.DEPENDENT_CONSISTENT
        assert t.try_add("+ZZII") is AddOutcome.DEPENDENT_CONFLICT
        assert t.g == 4

    def test_anticommutes(self):
        t = StabilizerTableau(4)
        assert t.try_add("+XIII") is AddOutcome.ADDED
        assert t.try_add("+ZIII") is AddOutcome.ANTICOMMUTES
        assert t.g == 1

    def test_add_twice_is_dependent_consistent(self):
        t = StabilizerTableau(2)
        assert t.try_add("-YZ") is AddOutcome.ADDED
        assert t.try_add("-YZ") is AddOutcome.DEPENDENT_CONSISTENT

    def test_identity_rejected(self):
        t = StabilizerTableau(2)
        with pytest.raises(ValueError):
            t.try_add("+II")

    def test_from_generators_errors_name_offenders(self):
        with pytest.raises(TableauError, match="1 and 2"):
            StabilizerTableau.from_generators(4, ["+XIII", "+ZIII"])
        with pytest.raises(TableauError, match="generator 3"):
            StabilizerTableau.from_generators(4, ["+ZIII", "-IZII", "-ZZII"])


class TestMembership:
    def test_product_of_two(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        assert t.membership_sign(parse_pauli("ZIZI")) == 1

    def test_x_string_not_in_group(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        assert t.membership_sign(parse_pauli("XXXX")) is None

    def test_identity_membership(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        assert t.membership_sign(parse_pauli("IIII")) == 1

    def test_expectation_pair_product(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        assert t.expectation(parse_pauli("IIZZ")) == -1
        assert t.expectation(parse_pauli("XXYY")) == 0

    def test_expectation_triple_product(self):
        gens = STRETCH_GENS + ["+IIIZ"]
        t = StabilizerTableau.from_generators(4, gens)
        assert t.expectation(parse_pauli("IZIZ")) == -1

    def test_partial_tableau_centralizer_scores_zero(self):
        t = StabilizerTableau.from_generators(2, ["+ZI"])
        # IZ commutes but is not in the group
        assert t.expectation(parse_pauli("IZ")) == 0
        assert t.expectation(parse_pauli("ZI")) == 1
        assert t.expectation(parse_pauli("XI")) == 0


class TestCanonicalForm:
    def test_permutation_invariance(self):
        a = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        b = StabilizerTableau.from_generators(4, HF_EQ_GENS[::-1])
        assert a == b and a.key() == b.key()

    def test_same_group_different_generators(self):
        a = StabilizerTableau.from_generators(2, ["+ZI", "+IZ"])
        b = StabilizerTableau.from_generators(2, ["+ZI", "+ZZ"])
        assert a == b

    def test_canonicalize_idempotent(self):
        t = StabilizerTableau.from_generators(4, RESONATING_GENS)
        assert t.canonicalize() == t.canonicalize().canonicalize()

    def test_sign_distinguishes(self):
        a = StabilizerTableau.from_generators(2, ["+ZI"])
        b = StabilizerTableau.from_generators(2, ["-ZI"])
        assert a != b

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_canonical_rows_stabilize_same_state(self, seed):
        rng = np.random.default_rng(seed)
        t = random_tableau(rng, 3)
        psi = tableau_state(t)
        for sp in t.generators:
            assert np.allclose(dense_of(sp) @ psi, psi)


class TestEnergy:
    def test_hf_energy_on_equilibrium_fixture(self, fixtures_dir):
        # per-term substitution over the bundled equilibrium Hamiltonian
        from stabgs.pauli import load_hamiltonian

        h = load_hamiltonian(fixtures_dir / "h2_d0.74.ham")
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        assert abs(t.energy(h) - (-1.831)) < 1e-9

    def test_empty_sum(self):
        t = StabilizerTableau.from_generators(2, ["+ZI", "+IZ"])
        assert t.energy(PauliSum(2, [])) == 0.0

    def test_identity_term_contributes_coefficient(self):
        t = StabilizerTableau.from_generators(2, ["+ZI", "+IZ"])
        h = PauliSum(2, [(-0.5, "II"), (1.0, "ZI")])
        assert t.energy(h) == pytest.approx(0.5)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_expectations_match_scalar_path(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        t = random_tableau(rng, n, g=int(rng.integers(1, n + 1)))
        terms = []
        for _ in range(12):
            terms.append(
                (
                    float(rng.normal()),
                    parse_pauli_bits(
                        n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))
                    ),
                )
            )
        h = PauliSum(n, terms)
        vec = t.expectations(h)
        for i in range(len(h)):
            assert vec[i] == t.expectation(h.string_at(i))

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_partial_tableau_matches_mixture_trace(self, seed):
        rng = np.random.default_rng(seed)
        n = 3
        t = random_tableau(rng, n, g=int(rng.integers(1, n + 1)))
        gens = [(sp.sign, sp.string.label) for sp in t.generators]
        x, z = int(rng.integers(0, 8)), int(rng.integers(0, 8))
        p = parse_pauli_bits(n, x, z)
        dense_p = ref.dense_pauli(n, x, z)
        expected = ref.mixture_expectation(n, gens, dense_p)
        assert t.expectation(p) == pytest.approx(expected, abs=1e-9)

    def test_wide_tableau_packed_kernel(self):
        n = 72
        gens = []
        for q in range(0, n, 2):
            lab = ["I"] * n
            lab[n - 1 - q] = "Z"
            lab[n - 1 - (q + 1)] = "Z"
            gens.append(("-" if q % 4 else "+") + "".join(lab))
        t = StabilizerTableau.from_generators(n, gens)
        h = PauliSum(
            n,
            [
                (1.0, gens[0][1:]),
                (2.0, gens[1][1:]),
                (0.5, "X" * n),
                (0.25, "I" * n),
            ],
        )
        vals = t.expectations(h)
        # gens[1] carries a minus sign, so its bare string scores -1
        assert list(vals) == [1, -1, 0, 1]
        assert t.energy(h) == pytest.approx(1.0 - 2.0 + 0.25)


class TestDecode:
    def test_hf_state_single_ket(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        d = t.decode_state()
        assert d.support == ["0101"]
        assert d.amplitudes == [pytest.approx(1.0)]

    def test_ghz_pair(self):
        t = StabilizerTableau.from_generators(4, STRETCH_GENS + ["-XXYY"])
        d = t.decode_state()
        assert d.support == ["0011", "1100"]
        mags = [abs(a) for a in d.amplitudes]
        assert mags == [pytest.approx(2**-0.5)] * 2
        ratio = d.amplitudes[1] / d.amplitudes[0]
        assert abs(abs(ratio) - 1) < 1e-12 and abs(ratio.imag) < 1e-12

    def test_ghz_sign_flip_flips_relative_phase(self):
        minus = StabilizerTableau.from_generators(4, STRETCH_GENS + ["-XXYY"])
        plus = StabilizerTableau.from_generators(4, STRETCH_GENS + ["+XXYY"])
        rm = minus.decode_state().amplitudes
        rp = plus.decode_state().amplitudes
        assert rm[1] / rm[0] == pytest.approx(-(rp[1] / rp[0]))

    def test_spin_resonating_relative_phase_minus(self):
        t = StabilizerTableau.from_generators(4, RESONATING_GENS)
        d = t.decode_state()
        assert d.support == ["0110", "1001"]
        assert d.amplitudes[1] / d.amplitudes[0] == pytest.approx(-1.0)

    def test_partial_tableau_rejected(self):
        t = StabilizerTableau.from_generators(4, STRETCH_GENS)
        with pytest.raises(TableauError):
            t.decode_state()

    def test_support_limit(self):
        t = StabilizerTableau.from_generators(2, ["+XI", "+IX"])
        with pytest.raises(CapacityError):
            t.decode_state(support_limit=2)

    def test_ket_strings_split(self):
        t = StabilizerTableau.from_generators(4, HF_EQ_GENS)
        lines = t.decode_state().ket_strings(split=2)
        assert lines == ["+1.000000000 |01;01>"]

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_decoded_state_is_stabilized(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        t = random_tableau(rng, n)
        d = t.decode_state(support_limit=1 << n)
        psi = d.statevector()
        assert np.isclose(np.linalg.norm(psi), 1.0)
        for sp in t.generators:
            assert np.allclose(dense_of(sp) @ psi, psi, atol=1e-12)

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_expectation_equals_statevector_value(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        t = random_tableau(rng, n)
        psi = t.decode_state(support_limit=1 << n).statevector()
        x, z = int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))
        p = parse_pauli_bits(n, x, z)
        val = psi.conj() @ (ref.dense_pauli(n, x, z) @ psi)
        assert t.expectation(p) == pytest.approx(val.real, abs=1e-12)
        assert abs(val.imag) < 1e-12

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_membership_homomorphism(self, seed):
        rng = np.random.default_rng(seed)
        n = 4
        t = random_tableau(rng, n)
        gens = t.generators
        idx = rng.integers(0, len(gens), size=3)
        prod = gens[idx[0]].string
        sign = gens[idx[0]].sign
        for i in idx[1:]:
            prod = prod * gens[i].string
            sign *= gens[i].sign
        # fold the letters-level phase into the expected sign
        assert prod.phase_exp % 2 == 0
        expected = sign * (1 if prod.phase_exp == 0 else -1)
        assert t.membership_sign(prod.hermitian_part()) == expected


class TestStabilizerFiles:
    def test_parse_basic(self):
        n, gens = parse_stabilizers("# HF tableau\n%n_qubits 4\n+ZIII\n-IZII\n")
        assert n == 4
        assert [g.label for g in gens] == ["+ZIII", "-IZII"]

    def test_sign_optional_on_input(self):
        assert parse_signed_pauli("ZIZI").sign == 1
        assert parse_signed_pauli("-ZIZI").sign == -1

    def test_serialize_roundtrip(self):
        t = StabilizerTableau.from_generators(4, RESONATING_GENS)
        n, gens = parse_stabilizers(serialize_stabilizers(t))
        t2 = StabilizerTableau.from_generators(n, gens)
        assert t2 == t

    def test_parse_errors(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_stabilizers("%n_qubits 4\n+ZIQI\n")
        with pytest.raises(ParseError):
            parse_stabilizers("# empty\n")
