from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "alea",
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("alea")

CRITERIA = {
    1: "dice pool: exact win probability 0.90661502737169",
    2: "dice pool variant: win probability begins 0.91182365",
    3: "Yahtzee: P(three of a kind >= 17) = 17/144",
    4: "coin: {@head: 503/1000, @ship: 497/1000}",
    5: "star-comparison table",
    6: "stochastic evaluation of deterministic programs is a point mass",
    7: "type preservation (deterministic, exact, sampled)",
    8: "emptiness oracle and subtyping soundness",
    9: "distribution monad laws",
    10: "sampler fidelity and reproducibility",
    11: "frontend corpus parses, desugars and type-checks",
}

_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for n in getattr(report, "criteria", ()):
        _outcomes[n].append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    report.criteria = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if results is None:
            continue
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {CRITERIA[n]}  ({len(results)} tests)")
