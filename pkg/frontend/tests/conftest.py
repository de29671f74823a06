import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from stabchem.molecules import h2_spec, water_spec
from stabchem.pipeline import solve_point

sys.path.insert(0, str(Path(__file__).resolve().parent))

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def stabgs_cmd() -> list[str]:
    """Command prefix for the stabilizer-search tool, used via subprocess only."""
    exe = shutil.which("stabgs")
    if exe:
        return [exe]
    probe = subprocess.run(
        [sys.executable, "-m", "stabgs", "--version"], capture_output=True
    )
    if probe.returncode == 0:
        return [sys.executable, "-m", "stabgs"]
    pytest.fail("stabgs executable not found; the backend must be installed")


def run_tool(cmd, *args, check=True):
    proc = subprocess.run(
        [*cmd, *map(str, args)], capture_output=True, text=True
    )
    if check and proc.returncode != 0:
        raise AssertionError(
            f"{' '.join(map(str, args))} exited {proc.returncode}: "
            f"{proc.stderr.strip()}"
        )
    return proc


# solved mean-field points reused across modules; SCF is deterministic so
# session scope is safe
@pytest.fixture(scope="session")
def h2_eq_point():
    return solve_point(h2_spec(), 0.74)


@pytest.fixture(scope="session")
def h2_stretch_point():
    return solve_point(h2_spec(), 2.8)


@pytest.fixture(scope="session")
def water_eq_point():
    return solve_point(water_spec(), None)
