import json
import sys
from pathlib import Path

import pytest

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# Make oracles importable from every test module.
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def golden():
    with open(FIXTURE_DIR / "golden.json") as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / name


@pytest.fixture(scope="session")
def h2_integrals(golden):
    from qcembed.integrals import read_fcidump

    return read_fcidump(FIXTURE_DIR / golden["h2_0735"]["file"])


@pytest.fixture(scope="session")
def lih_integrals(golden):
    from qcembed.integrals import read_fcidump

    return read_fcidump(FIXTURE_DIR / golden["lih"]["file"])


@pytest.fixture(scope="session")
def h2o_integrals(golden):
    from qcembed.integrals import read_fcidump

    return read_fcidump(FIXTURE_DIR / golden["h2o"]["file"])
