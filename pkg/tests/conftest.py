"""Shared fixtures.

The verdict-table reproduction and the support scan are the two
expensive seeded searches (tens of seconds and a few minutes
respectively at the default 200 restarts).  Both are deterministic, so
they run once per session here and every test that needs them reads the
cached result.
"""

import time

import pytest

from qmask.patterns import (
    FeasibilityConfig,
    reproduce_table,
    support_theorem_scan,
)


@pytest.fixture(scope="session")
def default_cfg() -> FeasibilityConfig:
    return FeasibilityConfig()


@pytest.fixture(scope="session")
def tables_run(default_cfg):
    """(results-by-table, elapsed seconds) at the default config."""
    t0 = time.perf_counter()
    results = {n: reproduce_table(n, default_cfg) for n in (1, 2, 3, 4)}
    return results, time.perf_counter() - t0


@pytest.fixture(scope="session")
def scan_run(default_cfg):
    """(support-scan violations, elapsed seconds) at the default config."""
    t0 = time.perf_counter()
    violations = support_theorem_scan(default_cfg)
    return violations, time.perf_counter() - t0
