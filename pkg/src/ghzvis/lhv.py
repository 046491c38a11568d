"""Deterministic local strategies and their product correlation tensors.

A deterministic strategy fixes a +/-1 outcome for every setting of every
party.  Its correlation tensor is the outer product of the per-party sign
vectors; these rank-one tensors generate the local-hidden-variable polytope.

Flipping the signs of an even number of parties leaves the product tensor
unchanged, so ``2**sum(counts)`` strategies collapse onto
``2**(sum(counts) - n_parties + 1)`` distinct tensors.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .quantum import SettingsGrid

CAP_ENV_VAR = "GHZVIS_MAX_SETTINGS"
DEFAULT_CAP = 24

DEDUP_MODES = ("full", "half", "raw")


class CapExceededError(ValueError):
    """The total number of settings is beyond the enumeration cap."""


def settings_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None


def as_counts(grid_or_counts: SettingsGrid | Sequence[int]) -> tuple[int, ...]:
    if isinstance(grid_or_counts, SettingsGrid):
        return grid_or_counts.counts
    counts = tuple(int(n) for n in grid_or_counts)
    if len(counts) < 2:
        raise ValueError(f"need at least 2 parties, got counts {counts}")
    if any(n < 1 for n in counts):
        raise ValueError(f"every party needs at least one setting, got counts {counts}")
    return counts


def check_cap(counts: Sequence[int], cap: int | None = None) -> None:
    cap = settings_cap() if cap is None else cap
    total = sum(counts)
    if total > cap:
        raise CapExceededError(
            f"{total} settings in total exceeds the enumeration cap of {cap} "
            f"(2**{total} strategies); raise it with {CAP_ENV_VAR}"
        )


@dataclass(frozen=True)
class DeterministicStrategy:
    assignments: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for party in self.assignments:
            if any(x not in (1, -1) for x in party):
                raise ValueError(f"strategy values must be +1 or -1, got {party}")

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.assignments)


@dataclass(frozen=True)
class ProductTensor:
    dims: tuple[int, ...]
    values: np.ndarray


def _sign_table(n: int) -> np.ndarray:
    """All +/-1 vectors of length n by binary counting, MSB first, bit 1 -> -1."""
    idx = np.arange(2**n)[:, None]
    bits = (idx >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def enumerate_strategies(
    grid: SettingsGrid | Sequence[int], cap: int | None = None
) -> Iterator[DeterministicStrategy]:
    """Yield all ``2**sum(counts)`` strategies.

    Strategy number ``s`` reads its assignment bits from the binary expansion
    of ``s`` over the concatenated settings, first party most significant.
    """
    counts = as_counts(grid)
    check_cap(counts, cap)
    total = sum(counts)
    for s in range(2**total):
        flat = [1 - 2 * ((s >> (total - 1 - pos)) & 1) for pos in range(total)]
        parties, pos = [], 0
        for n in counts:
            parties.append(tuple(flat[pos:pos + n]))
            pos += n
        yield DeterministicStrategy(tuple(parties))


def product_tensor(s: DeterministicStrategy) -> ProductTensor:
    values = np.ones((), dtype=np.int8)
    for party in s.assignments:
        values = np.multiply.outer(values, np.asarray(party, dtype=np.int8))
    return ProductTensor(s.counts, values)


def _kron_rows(tables: Sequence[np.ndarray]) -> np.ndarray:
    """Row-wise outer products: one output row per combination of input rows.

    Rows combine party-major (first table slowest), columns row-major.
    """
    out = np.ones((1, 1), dtype=np.int8)
    for t in tables:
        r0, c0 = out.shape
        r1, c1 = t.shape
        out = (out[:, None, :, None] * t[None, :, None, :]).reshape(r0 * r1, c0 * c1)
    return out


def strategy_matrix(counts: Sequence[int], mode: str = "full") -> np.ndarray:
    """Flattened product tensors as rows of an int8 matrix.

    ``raw`` lists every strategy in enumeration order; ``half`` pins the first
    outcome of the last party (one sign symmetry, duplicates remain); ``full``
    pins the first outcome of all but the last party, one row per distinct
    tensor.
    """
    counts = as_counts(counts)
    if mode not in DEDUP_MODES:
        raise ValueError(f"unknown dedup mode {mode!r}; choose from {DEDUP_MODES}")
    last = len(counts) - 1
    tables = []
    for k, n in enumerate(counts):
        t = _sign_table(n)
        pinned = (mode == "full" and k < last) or (mode == "half" and k == last)
        tables.append(t[: 2 ** (n - 1)] if pinned else t)
    return _kron_rows(tables)


@dataclass(frozen=True)
class StrategyBasis:
    """Distinct product tensors, one row each, with class sizes.

    ``tensors[r]`` is the flattened (row-major) tensor of class r and
    ``multiplicity[r]`` the number of raw strategies producing it.
    """

    dims: tuple[int, ...]
    tensors: np.ndarray
    multiplicity: np.ndarray

    def __len__(self) -> int:
        return self.tensors.shape[0]

    def tensor(self, r: int) -> ProductTensor:
        return ProductTensor(self.dims, self.tensors[r].reshape(self.dims))

    def multiplicity_map(self) -> dict[bytes, int]:
        return {row.tobytes(): int(m) for row, m in zip(self.tensors, self.multiplicity)}


def _lex_order(rows: np.ndarray) -> np.ndarray:
    # np.lexsort treats the last key as primary; -1 sorts before +1 naturally
    return np.lexsort(rows.T[::-1])


@functools.lru_cache(maxsize=32)
def _cached_basis(counts: tuple[int, ...]) -> StrategyBasis:
    rows = strategy_matrix(counts, "full")
    rows = rows[_lex_order(rows)]
    rows.setflags(write=False)
    mult = np.full(rows.shape[0], 2 ** (len(counts) - 1), dtype=np.int64)
    mult.setflags(write=False)
    return StrategyBasis(counts, rows, mult)


def build_basis(grid: SettingsGrid | Sequence[int], cap: int | None = None) -> StrategyBasis:
    """Deduplicated strategy basis, sorted lexicographically (-1 < +1).

    Depends only on the setting counts, so results are cached and shared
    read-only.
    """
    counts = as_counts(grid)
    check_cap(counts, cap)
    return _cached_basis(counts)
