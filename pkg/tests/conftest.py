from pathlib import Path

import pytest
from hypothesis import settings

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def write_scores(tmp_path):
    """Write a list of llrs as a score file and return its path."""

    def _write(llrs, name="scores.csv"):
        path = tmp_path / name
        lines = ["# utterance_id,loglik_1,loglik_2"]
        lines += [f"u{i},{-5.0 + x!r},-5.0" for i, x in enumerate(llrs)]
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write


def pytest_configure(config):
    config.acceptance_results = {}


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status, title, detail = results[num]
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {title} -- {detail}")
