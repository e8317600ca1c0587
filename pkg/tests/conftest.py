import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", help="rewrite CLI golden files")


# -- acceptance summary ---------------------------------------------------------------

CRITERIA = {
    1: "golden coefficients, three routes agree through t^30",
    2: "quadratic residuals vanish through t^30",
    3: "bijection suites",
    4: "identity suites",
    5: "asymptotic constants and ratio agreement",
    6: "weighted expansions and specialization",
    7: "kernel diagonals match the DP",
    8: "property suites, 1000 cases each",
}
_outcomes = {}
_criterion_of = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion k")


def pytest_runtest_logreport(report):
    if report.when != "call" and report.outcome != "failed":
        return
    k = _criterion_of.get(report.nodeid)
    if k is not None:
        _outcomes[k] = _outcomes.get(k, True) and report.passed


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        if k in _outcomes:
            verdict = "PASS" if _outcomes[k] else "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {k}: {verdict}  {CRITERIA[k]}")
