import numpy as np
import pytest

from macrounc.pipeline.synthetic import write_synthetic_country

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> bool:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}"
    if detail:
        line += f" [{detail}]"
    print(line)
    _ACCEPTANCE[number] = (title, passed, line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number][2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def synthetic_config(tmp_path_factory):
    """A one-country configuration over simulated raw series."""
    return write_synthetic_country(tmp_path_factory.mktemp("synthetic"), seed=3)
