"""End-to-end tests for the command-line surface.

Most cases drive cli.main() in-process and assert on captured streams and
exit codes; a couple go through a real subprocess to cover the module
entry point.
"""

import json
import subprocess
import sys

import pytest

from stabgs import cli
from stabgs.curves import read_curve_csv
from stabgs.pauli import load_hamiltonian
from stabgs.tableau import StabilizerTableau, load_stabilizers

EQ_ENERGY_LINE = "stabilizer energy: -1.831000000"


def run_cli(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


@pytest.fixture
def h2_eq(fixtures_dir):
    return str(fixtures_dir / "h2_d0.74.ham")


@pytest.fixture
def h2_stretched(fixtures_dir):
    return str(fixtures_dir / "h2_d2.80.ham")


@pytest.fixture
def eq_stab(fixtures_dir):
    return str(fixtures_dir / "h2_eq.stab")


class TestEnergy:
    def test_equilibrium_hf_energy(self, capsys, h2_eq, eq_stab):
        rc, out, _ = run_cli(capsys, "energy", h2_eq, eq_stab)
        assert rc == 0
        assert out.strip() == EQ_ENERGY_LINE

    def test_matches_library_to_last_digit(self, capsys, h2_eq, eq_stab):
        rc, out, _ = run_cli(capsys, "energy", h2_eq, eq_stab)
        h = load_hamiltonian(h2_eq)
        n, gens = load_stabilizers(eq_stab)
        t = StabilizerTableau.from_generators(n, gens)
        assert out.strip().split(": ")[1] == f"{t.energy(h):.9f}"

    def test_verbose_per_term_report(self, capsys, h2_eq, eq_stab):
        rc, out, _ = run_cli(capsys, "energy", h2_eq, eq_stab, "--verbose")
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[-1] == EQ_ENERGY_LINE
        terms = lines[:-1]
        assert len(terms) == len(load_hamiltonian(h2_eq))
        # X-sector terms have expectation 0 on the product state
        assert "0.045 XXXX -> 0" in terms
        assert "-0.223 ZIII -> +1" in terms

    def test_anticommuting_generators_named(self, capsys, h2_eq, tmp_path):
        bad = tmp_path / "bad.stab"
        bad.write_text("%n_qubits 4\n+XIII\n+ZIII\n")
        rc, _, err = run_cli(capsys, "energy", h2_eq, str(bad))
        assert rc == 2
        assert "+XIII" in err and "+ZIII" in err

    def test_qubit_count_mismatch(self, capsys, h2_eq, tmp_path):
        stab = tmp_path / "wide.stab"
        stab.write_text("%n_qubits 5\n+ZIIII\n")
        rc, _, err = run_cli(capsys, "energy", h2_eq, str(stab))
        assert rc == 2
        assert "mismatch" in err

    def test_parse_error_is_line_numbered(self, capsys, eq_stab, tmp_path):
        ham = tmp_path / "bad.ham"
        ham.write_text("%n_qubits 4\n0.5 ZIII\n0.25 QIII\n")
        rc, _, err = run_cli(capsys, "energy", str(ham), eq_stab)
        assert rc == 2
        assert "line 3" in err

    def test_empty_hamiltonian_scores_zero(self, capsys, eq_stab, tmp_path):
        ham = tmp_path / "empty.ham"
        ham.write_text("%n_qubits 4\n")
        rc, out, _ = run_cli(capsys, "energy", str(ham), eq_stab)
        assert rc == 0
        assert out.strip() == "stabilizer energy: 0.000000000"

    def test_missing_file(self, capsys, eq_stab, tmp_path):
        rc, _, err = run_cli(capsys, "energy", str(tmp_path / "no.ham"), eq_stab)
        assert rc == 2


class TestSearch:
    def test_equilibrium_single_canonical_candidate(self, capsys, h2_eq):
        rc, out, _ = run_cli(capsys, "search", h2_eq, "--verbose")
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "candidates: 1"
        assert lines[1] == "candidate 1: energy -1.831000000 degeneracy 1"
        assert [s.strip() for s in lines[2:]] == ["+ZIII", "-IZII", "+IIZI", "-IIIZ"]

    def test_stretched_degenerate_family(self, capsys, h2_stretched):
        rc, out, _ = run_cli(
            capsys,
            "search",
            h2_stretched,
            "--tie-tol",
            "0.05",
            "--enumerate-degenerate",
            "--verbose",
        )
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "candidates: 5"
        energies = [
            line.split()[3] for line in lines if line.startswith("candidate ")
        ]
        assert energies == ["-1.121000000"] * 5
        gens = {line.strip() for line in lines if not line.startswith("candidate")}
        # product, GHZ-resonating, and spin-resonating families all present:
        # the latter is -ZIZI,-IZIZ,-XXYY,-IIZZ in canonical row-echelon form
        assert {"+ZIII", "+IZII", "-IIZI", "-IIIZ"} <= gens
        assert {"-XXXX", "+ZIIZ", "-IZIZ", "-IIZZ"} <= gens

    def test_out_writes_canonical_files(self, capsys, h2_stretched, tmp_path):
        out_dir = tmp_path / "cands"
        rc, out, _ = run_cli(
            capsys,
            "search",
            h2_stretched,
            "--tie-tol",
            "0.05",
            "--enumerate-degenerate",
            "--out",
            str(out_dir),
        )
        assert rc == 0
        files = sorted(p.name for p in out_dir.iterdir())
        assert files == [f"candidate_{i:02d}.stab" for i in range(1, 6)]
        n, gens = load_stabilizers(out_dir / "candidate_01.stab")
        t = StabilizerTableau.from_generators(n, gens)
        assert t.is_complete
        assert t.energy(load_hamiltonian(h2_stretched)) == pytest.approx(-1.121)

    def test_stdout_is_deterministic(self, capsys, h2_stretched):
        args = ("search", h2_stretched, "--tie-tol", "0.05", "--verbose")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_bad_beam_is_usage_error(self, capsys, h2_eq):
        rc, _, err = run_cli(capsys, "search", h2_eq, "--beam", "0")
        assert rc == 1
        assert "--beam" in err


class TestDecode:
    def test_hf_product_state(self, capsys, eq_stab):
        rc, out, _ = run_cli(capsys, "decode", eq_stab, "--split", "2")
        assert rc == 0
        assert out.strip() == "+1.000000000 |01;01>"

    def test_spin_resonating_two_kets(self, capsys, fixtures_dir):
        stab = str(fixtures_dir / "h2_resonating.stab")
        rc, out, _ = run_cli(capsys, "decode", stab, "--split", "2")
        assert rc == 0
        assert out.splitlines() == [
            "+0.707106781 |01;10>",
            "-0.707106781 |10;01>",
        ]

    def test_chain_resonating_eight_kets(self, capsys, fixtures_dir):
        stab = str(fixtures_dir / "chain8_resonating_odd.stab")
        rc, out, _ = run_cli(capsys, "decode", stab, "--split", "4")
        lines = out.strip().splitlines()
        assert len(lines) == 8
        assert all(line.lstrip("+-").startswith("0.353553391 |") for line in lines)

    def test_partial_tableau_rejected(self, capsys, tmp_path):
        stab = tmp_path / "partial.stab"
        stab.write_text("%n_qubits 4\n+ZIII\n+IZII\n")
        rc, _, err = run_cli(capsys, "decode", str(stab))
        assert rc == 2
        assert "g = 2" in err

    def test_support_overflow(self, capsys, fixtures_dir):
        stab = str(fixtures_dir / "chain8_resonating_odd.stab")
        rc, _, err = run_cli(capsys, "decode", stab, "--limit", "4")
        assert rc == 3

    def test_split_out_of_range(self, capsys, eq_stab):
        rc, _, err = run_cli(capsys, "decode", eq_stab, "--split", "9")
        assert rc == 1


class TestCurve:
    CURVE_FLAGS = ("--tie-tol", "0.05", "--enumerate-degenerate")

    def test_bundled_manifest(self, capsys, fixtures_dir, tmp_path):
        out = tmp_path / "curve.csv"
        rc, stdout, _ = run_cli(
            capsys,
            "curve",
            str(fixtures_dir / "h2_curve.json"),
            *self.CURVE_FLAGS,
            "--out",
            str(out),
        )
        assert rc == 0
        assert "2 points" in stdout
        points = read_curve_csv(out)
        assert [p.label for p in points] == ["d=0.74", "d=2.80"]
        assert points[0].stabilizer_energy == pytest.approx(-1.831)
        assert points[0].degeneracy == 1
        # stretched: whole degenerate family ties, and the stabilizer state
        # recovers all of the correlation energy the HF reference misses
        assert points[1].degeneracy == 5
        assert points[1].stabilizer_energy == pytest.approx(
            points[1].references["exact"]
        )
        gap_hf = points[1].references["exact"] - points[1].references["HF"]
        assert abs(gap_hf) > 0.2

    def test_csv_columns_and_roundtrip(self, capsys, fixtures_dir, tmp_path):
        out = tmp_path / "curve.csv"
        run_cli(
            capsys,
            "curve",
            str(fixtures_dir / "h2_curve.json"),
            *self.CURVE_FLAGS,
            "--out",
            str(out),
        )
        header = out.read_text().splitlines()[0]
        assert header == "label,parameter,stabilizer_energy,degeneracy,HF,exact,wall_time_s"
        points = read_curve_csv(out)
        again = tmp_path / "again.csv"
        from stabgs.curves import write_curve_csv

        write_curve_csv(points, again)
        assert read_curve_csv(again) == points

    def test_jobs_matches_serial(self, capsys, fixtures_dir, tmp_path):
        serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
        manifest = str(fixtures_dir / "h2_curve.json")
        run_cli(capsys, "curve", manifest, *self.CURVE_FLAGS, "--out", str(serial))
        run_cli(
            capsys,
            "curve",
            manifest,
            *self.CURVE_FLAGS,
            "--jobs",
            "2",
            "--out",
            str(parallel),
        )
        a, b = read_curve_csv(serial), read_curve_csv(parallel)
        for pa, pb in zip(a, b):
            assert (pa.label, pa.parameter, pa.stabilizer_energy) == (
                pb.label,
                pb.parameter,
                pb.stabilizer_energy,
            )
            assert pa.degeneracy == pb.degeneracy
            assert pa.references == pb.references

    def test_single_entry_manifest(self, capsys, fixtures_dir, tmp_path):
        manifest = tmp_path / "one.json"
        manifest.write_text(
            json.dumps(
                {
                    "version": 1,
                    "output_path": "one.csv",
                    "entries": [
                        {
                            "label": "only",
                            "parameter": 1.0,
                            "hamiltonian_path": str(fixtures_dir / "h2_d0.74.ham"),
                        }
                    ],
                }
            )
        )
        rc, _, _ = run_cli(capsys, "curve", str(manifest))
        assert rc == 0
        rows = (tmp_path / "one.csv").read_text().strip().splitlines()
        assert len(rows) == 2
        assert rows[0] == "label,parameter,stabilizer_energy,degeneracy,wall_time_s"

    def test_entry_failure_aborts_by_label(self, capsys, tmp_path):
        (tmp_path / "broken.ham").write_text("%n_qubits 4\n0.5 QIII\n")
        manifest = tmp_path / "m.json"
        manifest.write_text(
            json.dumps(
                {
                    "version": 1,
                    "output_path": "out.csv",
                    "entries": [
                        {
                            "label": "bad-point",
                            "parameter": 1.0,
                            "hamiltonian_path": "broken.ham",
                        }
                    ],
                }
            )
        )
        rc, _, err = run_cli(capsys, "curve", str(manifest))
        assert rc == 2
        assert "bad-point" in err
        assert not (tmp_path / "out.csv").exists()

    def test_non_monotone_parameters_rejected(self, capsys, fixtures_dir, tmp_path):
        ham = str(fixtures_dir / "h2_d0.74.ham")
        manifest = tmp_path / "m.json"
        entries = [
            {"label": l, "parameter": p, "hamiltonian_path": ham}
            for l, p in (("a", 1.0), ("b", 3.0), ("c", 2.0))
        ]
        manifest.write_text(
            json.dumps({"version": 1, "output_path": "o.csv", "entries": entries})
        )
        rc, _, err = run_cli(capsys, "curve", str(manifest))
        assert rc == 2
        assert "monotone" in err

    def test_unknown_version_rejected(self, capsys, tmp_path):
        manifest = tmp_path / "m.json"
        manifest.write_text('{"version": 2, "output_path": "o.csv", "entries": []}')
        rc, _, err = run_cli(capsys, "curve", str(manifest))
        assert rc == 2
        assert "version" in err


class TestOracle:
    def test_exact_equilibrium(self, capsys, h2_eq):
        rc, out, _ = run_cli(capsys, "oracle", "exact", h2_eq)
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "exact ground energy: -1.851296975"
        assert lines[1].startswith("residual:")
        assert lines[2].startswith("iterations:")
        assert lines[3] == "method: dense"

    def test_enumerate_equilibrium(self, capsys, h2_eq):
        rc, out, _ = run_cli(capsys, "oracle", "enumerate", h2_eq)
        assert rc == 0
        assert out.splitlines() == [
            "minimum stabilizer energy: -1.831000000",
            "degenerate minima: 1",
            "states scanned: 36720",
        ]

    def test_exact_capacity(self, capsys, tmp_path):
        ham = tmp_path / "wide.ham"
        ham.write_text("%n_qubits 21\n0.5 " + "Z" * 21 + "\n")
        rc, _, err = run_cli(capsys, "oracle", "exact", str(ham))
        assert rc == 3
        assert "21" in err

    def test_enumerate_capacity(self, capsys, fixtures_dir):
        rc, _, err = run_cli(
            capsys, "oracle", "enumerate", str(fixtures_dir / "chain8.ham")
        )
        assert rc == 3


class TestPrune:
    def test_prune_to_file(self, capsys, h2_eq, tmp_path):
        out = tmp_path / "pruned.ham"
        rc, stdout, _ = run_cli(
            capsys, "prune", h2_eq, "--prune", "0.1", "--out", str(out)
        )
        assert rc == 0
        assert "kept 11 of 15" in stdout
        kept = load_hamiltonian(out)
        assert len(kept) == 11
        assert min(abs(c) for c in kept.coefficients) >= 0.1

    def test_prune_to_stdout(self, capsys, h2_eq):
        rc, stdout, err = run_cli(capsys, "prune", h2_eq, "--prune", "0.1")
        assert rc == 0
        assert stdout.startswith("%n_qubits 4")
        assert "kept 11 of 15" in err

    def test_threshold_flag_required(self, capsys, h2_eq):
        rc, _, _ = run_cli(capsys, "prune", h2_eq)
        assert rc == 1


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        rc, _, err = run_cli(capsys, "frobnicate")
        assert rc == 1

    def test_no_arguments(self, capsys):
        rc, _, _ = run_cli(capsys)
        assert rc == 1

    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0
        assert "energy" in capsys.readouterr().out

    def test_subprocess_entry_point(self, fixtures_dir):
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "stabgs",
                "energy",
                str(fixtures_dir / "h2_d0.74.ham"),
                str(fixtures_dir / "h2_eq.stab"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == EQ_ENERGY_LINE
