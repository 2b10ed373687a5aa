"""Shared test setup.

The first call into each jit kernel pays a compile (the cache softens this
across sessions but not within a cold one), so a session fixture warms
every kernel before any test body runs; the acceptance timing test would
otherwise measure the compiler.  Acceptance results are echoed one per
line at the end of the run.
"""

import pathlib

import pytest
from hypothesis import HealthCheck, settings

import modcent as mc

settings.register_profile(
    "suite", deadline=None, max_examples=50, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large,
                           HealthCheck.filter_too_much])
settings.load_profile("suite")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    g = mc.generate(mc.GenConfig(n=20, module_rule=4, seed=0, enforce_p=True))
    mc.brandes_bc(g, threads=2)
    mc.brandes_bc(g, pair_filter="cross-module")
    mc.brandes_bc(g, pair_filter=lambda s, t: s < t)
    mc.sssp_dijkstra(g, 0)
    mc.global_centrality(g, validate=True)
    mc.coarse_global(g)


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance.append((name, "PASS" if report.passed else "FAIL"))
    elif report.failed:  # setup/teardown error
        _acceptance.append((name, "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _acceptance:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {verdict}")
