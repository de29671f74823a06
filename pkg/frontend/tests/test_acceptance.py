"""Acceptance gate for the chemistry frontend: criteria 8 through 11.

Each test prints one PASS/FAIL line (run with -s to see them live).  The
backend search tool is always driven through its installed command line,
never imported.  Criterion 11 generates the stretched-ring Hamiltonian at
full size, so this module takes a few minutes.
"""

import csv
import json
import re
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from stabchem.molecules import (
    BENZENE_CC_EQUILIBRIUM,
    H2_DEFAULT_GRID,
    WATER_DEFAULT_GRID,
    benzene_spec,
    h2_spec,
)
from stabchem.pipeline import (
    atom_spec,
    fci_total,
    generate_hamiltonian,
    solve_point,
    write_generated,
)

from conftest import FIXTURES, run_tool

import reference


@contextmanager
def criterion(num: int, summary: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {num}: {summary}")
        raise
    print(f"[PASS] criterion {num}: {summary}")


def run_frontend(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "stabchem", *map(str, argv)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def read_curve(csv_path):
    with open(csv_path, newline="") as fh:
        return list(csv.DictReader(fh))


def candidate_energies(stdout: str) -> list[float]:
    return [
        float(m.group(1))
        for m in re.finditer(r"candidate \d+: energy (\S+) degeneracy", stdout)
    ]


# -- criterion 8: emitted coefficients reproduce the published pair ----------


def test_criterion_8_h2_coefficients(tmp_path):
    with criterion(
        8, "generated H2 operators match the published coefficient tables"
    ):
        for value, fixture_name in ((0.74, "h2_d0.74.ham"), (2.8, "h2_d2.80.ham")):
            generated = generate_hamiltonian(h2_spec(), value)
            out = tmp_path / f"gen_{value}.ham"
            write_generated(out, generated)
            _, _, got = reference.read_ham_file(out)
            _, _, want = reference.read_ham_file(FIXTURES / fixture_name)
            # the published tables keep the scalar purely electronic; the
            # generated files fold nuclear repulsion into the identity
            identity = "I" * 4
            got[identity] = got.get(identity, 0.0) - generated.system.e_nuc
            worst = 0.0
            for label in sorted(set(got) | set(want)):
                diff = abs(got.get(label, 0.0) - want.get(label, 0.0))
                worst = max(worst, diff)
                assert diff < 5e-4, (value, label, diff)
            print(f"  d={value}: worst coefficient difference {worst:.2e}")


# -- criterion 9: the full dissociation curve ---------------------------------


@pytest.fixture(scope="module")
def h2_curve(tmp_path_factory, stabgs_cmd):
    out_dir = tmp_path_factory.mktemp("h2_curve")
    run_frontend(
        "scan", "h2", "--out-dir", out_dir, "--prefix", "h2", "--no-ccsd"
    )
    manifest = out_dir / "h2_manifest.json"
    run_tool(
        stabgs_cmd,
        "curve", manifest,
        "--tie-tol", "0.05", "--enumerate-degenerate", "--hillclimb",
        "--jobs", "1",
    )
    output = json.loads(manifest.read_text())["output_path"]
    return read_curve(out_dir / output)


def test_criterion_9_h2_curve(h2_curve):
    rows = {float(r["parameter"]): r for r in h2_curve}
    assert set(rows) == set(H2_DEFAULT_GRID)
    with criterion(
        9,
        "H2 curve: mean-field at equilibrium, near-exact beyond 2 A",
    ):
        eq = rows[0.74]
        eq_gap = abs(float(eq["stabilizer_energy"]) - float(eq["HF"]))
        print(f"  equilibrium |stabilizer - HF| = {eq_gap:.2e}")
        assert eq_gap <= 1e-9

        stretch_gaps = {
            d: float(rows[d]["stabilizer_energy"]) - float(rows[d]["FCI"])
            for d in sorted(rows)
            if d >= 2.0
        }
        for d, gap in stretch_gaps.items():
            marker = "" if gap < 0.02 else "  <-- exceeds 0.02"
            print(f"  d={d:<4g} stabilizer - FCI = {gap:.6f}{marker}")
        assert all(gap < 0.02 for gap in stretch_gaps.values()), stretch_gaps


# -- criterion 10: water keeps one curve down to the atomic limit -------------


@pytest.fixture(scope="module")
def water_curve(tmp_path_factory, stabgs_cmd):
    out_dir = tmp_path_factory.mktemp("water_curve")
    run_frontend(
        "scan", "h2o", "--out-dir", out_dir, "--prefix", "h2o", "--no-ccsd"
    )
    manifest = out_dir / "h2o_manifest.json"
    run_tool(
        stabgs_cmd,
        "curve", manifest,
        "--tie-tol", "0.05", "--enumerate-degenerate", "--hillclimb",
        "--jobs", "1",
    )
    output = json.loads(manifest.read_text())["output_path"]
    return out_dir, read_curve(out_dir / output)


def test_criterion_10_water_curve(water_curve, stabgs_cmd):
    out_dir, rows_list = water_curve
    rows = {float(r["parameter"]): r for r in rows_list}
    assert set(rows) == set(WATER_DEFAULT_GRID)
    with criterion(
        10, "water: one stabilizer energy per geometry, atomic limit at 4 A"
    ):
        # every discovered candidate family collapses onto a single energy
        for value in sorted(rows):
            proc = run_tool(
                stabgs_cmd,
                "search", out_dir / f"h2o_{value:g}.ham",
                "--tie-tol", "0.05", "--enumerate-degenerate", "--hillclimb",
            )
            energies = candidate_energies(proc.stdout)
            assert energies, proc.stdout
            spread = max(energies) - min(energies)
            assert spread < 1e-9, (value, energies)
            assert energies[0] == pytest.approx(
                float(rows[value]["stabilizer_energy"]), abs=1e-9
            )

        oxygen = fci_total(solve_point(atom_spec("O")), 3).energy
        hydrogen = fci_total(solve_point(atom_spec("H")), 2).energy
        asymptote = oxygen + 2 * hydrogen
        end_gap = float(rows[4.0]["stabilizer_energy"]) - asymptote
        print(f"  stabilizer(4.0) - [O + 2H] = {end_gap:.6f}")
        assert abs(end_gap) < 0.05


# -- criterion 11: the stretched ring at full scale ---------------------------


def test_criterion_11_stretched_ring(tmp_path, stabgs_cmd):
    with criterion(
        11, "stretched C6H6 sits ~0.12 Ha above the isolated atoms, in budget"
    ):
        started = time.monotonic()
        generated = generate_hamiltonian(
            benzene_spec(uniform=True), 5.0, threshold=1e-8
        )
        ham_path = tmp_path / "ring_5.0.ham"
        write_generated(ham_path, generated)
        generation_s = time.monotonic() - started

        proc = run_tool(
            stabgs_cmd,
            "search", ham_path, "--prune", "1e-6", "--hillclimb",
        )
        wall_s = time.monotonic() - started
        energies = candidate_energies(proc.stdout)
        assert energies, proc.stdout
        stabilizer = min(energies)

        carbon = fci_total(solve_point(atom_spec("C")), 3).energy
        hydrogen = fci_total(solve_point(atom_spec("H")), 2).energy
        atomic_total = 6 * carbon + 6 * hydrogen
        deviation = stabilizer - atomic_total
        print(
            f"  stabilizer {stabilizer:.6f}, atoms {atomic_total:.6f},"
            f" deviation {deviation:.4f}"
        )
        print(f"  generation {generation_s:.1f} s, total {wall_s:.1f} s")
        assert 0.07 <= deviation <= 0.17
        assert wall_s < 600.0
