from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CRITERIA = {
    1: "Nil connection, all 27 components exact",
    2: "Nil curvature, all components exact",
    3: "Nil Laplacian, double Laplacian and S(X)",
    4: "Nil horizontal sub-terms, eight goldens",
    5: "Nil aggregate conditions and systems",
    6: "Sol ODE and its exponential solutions",
    7: "Nil classification families and the counterexample",
    8: "same-sign rigidity on Nil",
    9: "first variation by central differences",
    10: "property suites",
}

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _outcomes[marker.args[0]].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if not results:
            continue
        failed = [name for name, o in results if o != "passed"]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {n:2d}: {status}  {CRITERIA[n]} ({len(results) - len(failed)}/{len(results)} checks)"
        tr.write_line(line)
        for name in failed:
            tr.write_line(f"    failing: {name}")
