"""Shared instance builders, sweep fixtures, and the acceptance summary hook."""

import time

import pytest

from hitsetlab.experiments import ExperimentConfig, GridPoint, run_sweep
from hitsetlab.instance import HSInstance, from_dense


def circulant(n: int, k: int) -> HSInstance:
    """Row i covers columns i, i+1, ..., i+k-1 cyclically (1-regular example)."""
    return from_dense([[1 if (j - i) % n < k else 0 for j in range(n)]
                       for i in range(n)])


def identity(n: int) -> HSInstance:
    return from_dense([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def all_ones(m: int, n: int) -> HSInstance:
    return from_dense([[1] * n for _ in range(m)])


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE_LINES = []


def record_acceptance(num: int, name: str, passed: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if passed else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance summary")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# -- expensive sweeps shared between criteria --------------------------------

@pytest.fixture(scope="session")
def dense_sweep():
    """10-trial dense sweep at n = m = 2000 over three densities.

    Returns (records, elapsed_seconds).  The LP solves dominate; on slow
    hardware this fixture takes tens of minutes, so everything that needs
    dense records shares it.
    """
    config = ExperimentConfig(
        grid=(GridPoint(2000, "2000", "0.05"),
              GridPoint(2000, "2000", "0.1"),
              GridPoint(2000, "2000", "0.2")),
        trials=10,
        base_seed=11,
        solvers=("lp", "block_greedy"),
    )
    t0 = time.perf_counter()
    records = run_sweep(config)
    return records, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sparse_sweep():
    """20-trial sparse sweep at n = 10^4, m = 50, p = 0.02."""
    config = ExperimentConfig(
        grid=(GridPoint(10_000, "50", "0.02"),),
        trials=20,
        base_seed=7,
        solvers=("lp", "block_greedy"),
    )
    t0 = time.perf_counter()
    records = run_sweep(config)
    return records, time.perf_counter() - t0
