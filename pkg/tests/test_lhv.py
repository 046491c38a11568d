import numpy as np
import pytest

from ghzvis.lhv import (
    CAP_ENV_VAR,
    CapExceededError,
    DeterministicStrategy,
    build_basis,
    enumerate_strategies,
    product_tensor,
    strategy_matrix,
)
from ghzvis.quantum import SettingsGrid

from conftest import brute_force_tensors


def distinct_by_pairwise_comparison(rows):
    kept = []
    for r in rows:
        if not any(np.array_equal(r, k) for k in kept):
            kept.append(r)
    return kept


@pytest.mark.parametrize("counts, n", [((1, 1, 1), 8), ((2, 2, 2), 64), ((3, 3, 3), 512)])
def test_enumeration_count_and_uniqueness(counts, n):
    strategies = list(enumerate_strategies(counts))
    assert len(strategies) == n
    assert len({s.assignments for s in strategies}) == n
    assert all(s.counts == counts for s in strategies)


def test_enumeration_order_is_binary_counting():
    first, second, *_, last = enumerate_strategies((2, 1))
    assert first.assignments == ((1, 1), (1,))
    assert second.assignments == ((1, 1), (-1,))
    assert last.assignments == ((-1, -1), (-1,))


def test_enumeration_accepts_grid():
    grid = SettingsGrid.from_angles([[0.0, 1.0], [0.0], [0.5]])
    assert sum(1 for _ in enumerate_strategies(grid)) == 16


def test_cap_is_enforced(monkeypatch):
    with pytest.raises(CapExceededError, match="cap of 5"):
        next(enumerate_strategies((2, 2, 2), cap=5))
    monkeypatch.setenv(CAP_ENV_VAR, "4")
    with pytest.raises(CapExceededError):
        build_basis((2, 2, 1))


def test_product_tensor_examples():
    ones = product_tensor(DeterministicStrategy(((1, 1), (1, 1), (1, 1))))
    assert ones.dims == (2, 2, 2)
    assert (ones.values == 1).all()

    t = product_tensor(DeterministicStrategy(((1, -1), (1, 1), (1, 1)))).values
    assert (t[0] == 1).all() and (t[1] == -1).all()

    s = DeterministicStrategy(((1, -1), (-1, 1), (1, 1)))
    flipped = DeterministicStrategy(((-1, 1), (1, -1), (1, 1)))
    np.testing.assert_array_equal(product_tensor(s).values, product_tensor(flipped).values)


def test_strategy_values_validated():
    with pytest.raises(ValueError):
        DeterministicStrategy(((1, 0), (1,)))


@pytest.mark.parametrize("counts, raw, distinct", [((2, 2, 2), 64, 16), ((1, 1, 1), 8, 2), ((2, 2), 16, 8)])
def test_basis_size_matches_brute_force(counts, raw, distinct):
    rows = [product_tensor(s).values.reshape(-1) for s in enumerate_strategies(counts)]
    assert len(rows) == raw
    assert len(distinct_by_pairwise_comparison(rows)) == distinct
    basis = build_basis(counts)
    assert len(basis) == distinct
    assert int(basis.multiplicity.sum()) == raw


@pytest.mark.parametrize("counts", [(1, 1, 1), (2, 2), (2, 3), (2, 2, 2), (3, 2, 1), (1, 2, 2, 1), (3, 3, 3)])
def test_basis_matches_raw_tensor_set(counts):
    basis = build_basis(counts)
    raw = brute_force_tensors(counts).astype(np.int8)
    stored = {row.tobytes() for row in basis.tensors}
    assert len(stored) == len(basis)
    assert stored == {row.tobytes() for row in raw}
    assert len(basis) == 2 ** (sum(counts) - len(counts) + 1)
    # closed under negation
    assert all((-row).tobytes() in stored for row in basis.tensors)


def test_basis_is_sorted_and_deterministic():
    a = build_basis((2, 3, 2))
    b = build_basis(SettingsGrid.from_angles([[0, 1], [0, 1, 2], [0, 1]]))
    np.testing.assert_array_equal(a.tensors, b.tensors)
    keys = [tuple(r) for r in a.tensors]
    assert keys == sorted(keys)


def test_multiplicity_map():
    basis = build_basis((2, 2, 2))
    mm = basis.multiplicity_map()
    assert len(mm) == 16 and set(mm.values()) == {4}
    assert basis.tensor(0).values.shape == (2, 2, 2)


def test_strategy_matrix_modes():
    assert strategy_matrix((2, 2, 2), "raw").shape == (64, 8)
    assert strategy_matrix((2, 2, 2), "half").shape == (32, 8)
    assert strategy_matrix((2, 2, 2), "full").shape == (16, 8)
    np.testing.assert_array_equal(strategy_matrix((2, 1, 2), "raw"), brute_force_tensors((2, 1, 2)))
    with pytest.raises(ValueError):
        strategy_matrix((2, 2), "quarter")
