import json
from importlib.resources import files
from pathlib import Path

import pytest

from pfqi.config import load_config

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def geneva_text():
    return files("pfqi").joinpath("data/geneva_1999.cfg").read_text()


@pytest.fixture(scope="session")
def geneva_cfg(geneva_text):
    return load_config(geneva_text)


@pytest.fixture(scope="session")
def geneva(geneva_cfg):
    return geneva_cfg.record


@pytest.fixture(scope="session")
def golden():
    with open(FIXTURES / "geneva_golden.json") as fh:
        return json.load(fh)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
