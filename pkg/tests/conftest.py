import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

_VERDICTS: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long stretch runs")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict():
    def record(tag: str, name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {tag} {name}: {detail}"
        _VERDICTS.append(line)
        print(line)

    return record


def brute_force_tensors(counts):
    """Every deterministic product tensor, built with itertools, flattened row-major."""
    rows = []
    for signs in itertools.product((1, -1), repeat=sum(counts)):
        parts, pos = [], 0
        for n in counts:
            parts.append(np.array(signs[pos:pos + n]))
            pos += n
        t = parts[0]
        for p in parts[1:]:
            t = np.multiply.outer(t, p)
        rows.append(t.reshape(-1))
    return np.array(rows, dtype=float)


def oracle_targets(angles):
    total = np.zeros(())
    for party in angles:
        total = np.add.outer(total, np.asarray(party, dtype=float))
    return np.cos(total).reshape(-1)


def highs_vmax(angles):
    """v_max from scipy's HiGHS over all raw strategies; independent of ghzvis."""
    counts = [len(p) for p in angles]
    T = brute_force_tensors(counts)
    c = oracle_targets(angles)
    n = T.shape[0]
    A = np.zeros((c.size + 1, n + 1))
    A[: c.size, :n] = T.T
    A[: c.size, n] = -c
    A[c.size, :n] = 1.0
    b = np.zeros(c.size + 1)
    b[-1] = 1.0
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    bounds = [(0, None)] * n + [(0, 1)]
    res = linprog(cost, A_eq=A, b_eq=b, bounds=bounds, method="highs")
    assert res.status == 0, res.message
    return float(res.x[-1])
