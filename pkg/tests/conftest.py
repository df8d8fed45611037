from __future__ import annotations

import functools

import pytest

from latticehfi import builtin_family, run_pipeline
from latticehfi.obstruct import compute_side

_CRITERIA: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA.setdefault(mark.args[0], []).append(rep.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok = all(_CRITERIA[n])
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} "
                                    f"({sum(_CRITERIA[n])}/{len(_CRITERIA[n])} checks)")


@functools.lru_cache(maxsize=None)
def side(name: str, j: int = 1, method: str = "auto"):
    return compute_side(builtin_family(name, j), "auto", method)


@functools.lru_cache(maxsize=None)
def pipeline(name: str, rev: str | None, j: int = 1):
    return run_pipeline(builtin_family(name, j), None if rev is None else builtin_family(rev, j))


def nj(j: int):
    return pipeline("gamma_Nj", "gamma_prime_Nj", j)


def k1():
    return pipeline("k1_surgery", "k1_surgery_reversed", 1)
