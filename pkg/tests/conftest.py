from __future__ import annotations

import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dkoszul import instances  # noqa: E402
from dkoszul.scalar import Field  # noqa: E402

F = Field("prime", 32003)
Q = Field("rational")


@functools.lru_cache(maxsize=None)
def builtin(name: str, D: int = 12):
    if name == "kxy":
        # the path-space quotient grows like 2^D here; H <= 5 needs far less
        D = min(D, 10)
    return instances.BUILTINS[name].build(D, F)


@functools.lru_cache(maxsize=None)
def example(D: int = 8):
    return instances.example_algebra(D, F)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("DKOSZUL_CACHE", str(tmp_path / "cache"))


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion in the terminal summary

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if not item.name.startswith("test_criterion_"):
        return
    n = int(item.name.rsplit("_", 1)[1])
    if rep.when == "call" or rep.failed:
        doc = (item.function.__doc__ or "").strip()
        prev = _CRITERIA.get(n, (True, doc))[0]
        _CRITERIA[n] = (prev and rep.passed, doc)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, doc = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {doc}")
