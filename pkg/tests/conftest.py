import sys

import pytest


def small_primes(lo, hi):
    return [p for p in range(max(lo, 2), hi + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.delenv("CACHE_DIR", raising=False)
    return tmp_path / "cache"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
