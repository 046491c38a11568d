"""Quantum predictions for GHZ states measured with dichotomic spin observables.

Each party measures ``n . sigma`` for a Bloch unit vector ``n``.  With white
noise of weight ``1 - V`` mixed into the state, the 3-qubit outcome
probabilities are

    P(m, l, k) = 1/8 (1 + ml a3 b3 + mk a3 c3 + lk b3 c3
                      + mlk V sum_rps M_rps a_r b_p c_s)

with the only nonzero tensor entries M_111 = 1 and M_122 = M_212 = M_221 = -1.
For equatorial (coplanar) analyzers the full correlation collapses to
``V cos(sum of azimuths)``, which holds for any number of parties.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HALF_PI = math.pi / 2

# Nonzero entries of the 3-qubit correlation tensor (0-based indices).
_M_ENTRIES: tuple[tuple[tuple[int, int, int], float], ...] = (
    ((0, 0, 0), 1.0),
    ((0, 1, 1), -1.0),
    ((1, 0, 1), -1.0),
    ((1, 1, 0), -1.0),
)


def check_visibility(v: float) -> float:
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v!r}")
    return v


@dataclass(frozen=True)
class AnalyzerDirection:
    """Bloch-sphere direction of a dichotomic observable, angles in radians."""

    theta: float = HALF_PI
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError(f"non-finite analyzer angles ({self.theta}, {self.phi})")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")

    @classmethod
    def equatorial(cls, phi: float) -> AnalyzerDirection:
        return cls(HALF_PI, float(phi))

    @property
    def is_equatorial(self) -> bool:
        return self.theta == HALF_PI

    def vector(self) -> np.ndarray:
        return direction_to_vector(self)


@dataclass(frozen=True)
class SettingsGrid:
    """Per-party lists of analyzer directions.

    ``parties[k][i]`` is the i-th setting of party k.  ``coplanar`` asserts
    that every direction lies on the equator (theta = pi/2 exactly).
    """

    parties: tuple[tuple[AnalyzerDirection, ...], ...]
    coplanar: bool = field(default=True)

    def __post_init__(self) -> None:
        parties = tuple(tuple(p) for p in self.parties)
        object.__setattr__(self, "parties", parties)
        if len(parties) < 2:
            raise ValueError(f"a settings grid needs at least 2 parties, got {len(parties)}")
        for k, settings in enumerate(parties):
            if not settings:
                raise ValueError(f"party {k} has no settings")
        if self.coplanar and not all(d.is_equatorial for p in parties for d in p):
            raise ValueError("grid flagged coplanar but some theta != pi/2")

    @classmethod
    def from_angles(cls, angles: Iterable[Iterable[float]]) -> SettingsGrid:
        """Coplanar grid from per-party azimuth lists."""
        return cls(
            tuple(tuple(AnalyzerDirection.equatorial(a) for a in party) for party in angles),
            coplanar=True,
        )

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parties)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def is_equatorial(self) -> bool:
        return all(d.is_equatorial for p in self.parties for d in p)

    def angles(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(d.phi for d in p) for p in self.parties)

    def flat_angles(self) -> np.ndarray:
        return np.array([d.phi for p in self.parties for d in p], dtype=float)

    def subgrid(self, picks: Sequence[Sequence[int]]) -> SettingsGrid:
        """Grid keeping only settings ``picks[k]`` of each party k."""
        return SettingsGrid(
            tuple(tuple(self.parties[k][i] for i in idx) for k, idx in enumerate(picks)),
            coplanar=self.coplanar,
        )


def grid_from_flat(counts: Sequence[int], flat: Sequence[float]) -> SettingsGrid:
    """Split a flat azimuth vector into a coplanar grid with the given counts."""
    flat = [float(x) for x in flat]
    if len(flat) != sum(counts):
        raise ValueError(f"expected {sum(counts)} angles for counts {tuple(counts)}, got {len(flat)}")
    out, pos = [], 0
    for n in counts:
        out.append(flat[pos:pos + n])
        pos += n
    return SettingsGrid.from_angles(out)


@dataclass(frozen=True)
class CorrelationTensor:
    dims: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        if tuple(self.values.shape) != tuple(self.dims):
            raise ValueError(f"values shape {self.values.shape} does not match dims {self.dims}")

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)


def direction_to_vector(d: AnalyzerDirection) -> np.ndarray:
    if d.is_equatorial:
        # cos(pi/2) evaluates to 6e-17; keep the equator exact
        st, ct = 1.0, 0.0
    else:
        st, ct = math.sin(d.theta), math.cos(d.theta)
    return np.array([math.cos(d.phi) * st, math.sin(d.phi) * st, ct])


def _three_body(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    return sum(w * a[r] * b[p] * c[s] for (r, p, s), w in _M_ENTRIES)


def joint_probability(
    outcomes: Sequence[int], directions: Sequence[AnalyzerDirection], v: float
) -> float:
    """Probability of the outcome triple ``(m, l, k)`` for a noisy 3-qubit GHZ state."""
    if len(outcomes) != 3 or len(directions) != 3:
        raise ValueError("joint_probability is defined for exactly 3 parties")
    if any(o not in (1, -1) for o in outcomes):
        raise ValueError(f"outcomes must be +1 or -1, got {tuple(outcomes)}")
    v = check_visibility(v)
    m, l, k = outcomes
    a, b, c = (direction_to_vector(d) for d in directions)
    return (
        1.0
        + m * l * a[2] * b[2]
        + m * k * a[2] * c[2]
        + l * k * b[2] * c[2]
        + m * l * k * v * _three_body(a, b, c)
    ) / 8.0


def correlation(angles: Sequence[float], v: float) -> float:
    """Full correlation ``V cos(sum of azimuths)`` for equatorial analyzers."""
    if len(angles) < 2:
        raise ValueError("correlation needs at least 2 parties")
    return check_visibility(v) * math.cos(math.fsum(float(a) for a in angles))


def correlation_from_probabilities(directions: Sequence[AnalyzerDirection], v: float) -> float:
    """Sum of ``mlk * P(m, l, k)`` over all eight outcome triples."""
    return sum(
        m * l * k * joint_probability((m, l, k), directions, v)
        for m, l, k in itertools.product((1, -1), repeat=3)
    )


def angle_sums(grid: SettingsGrid) -> np.ndarray:
    """Tensor of azimuth sums, one axis per party, row-major like the grid."""
    total = np.zeros(())
    for party in grid.angles():
        total = np.add.outer(total, np.asarray(party, dtype=float))
    return total


def correlation_tensor(grid: SettingsGrid, v: float = 1.0) -> CorrelationTensor:
    if not grid.is_equatorial:
        raise ValueError("correlation tensors are only computed for coplanar grids (theta = pi/2)")
    v = check_visibility(v)
    values = v * np.cos(angle_sums(grid))
    return CorrelationTensor(grid.counts, values)


@dataclass(frozen=True)
class Marginals:
    single: tuple[dict[int, float], ...]
    pairs: dict[tuple[int, int], dict[tuple[int, int], float]]


def marginals(directions: Sequence[AnalyzerDirection], v: float) -> Marginals:
    """Closed-form one- and two-party marginals of the 3-qubit distribution.

    Summing the joint formula over the remaining outcomes kills every term odd
    in a summed outcome, leaving 1/2 for single parties and
    ``(1 + x y a3 b3) / 4`` for a pair.  Coplanar analyzers therefore give
    exactly 1/2 and 1/4 regardless of angles and visibility.
    """
    if len(directions) != 3:
        raise ValueError("marginals are defined for exactly 3 parties")
    check_visibility(v)
    z = [direction_to_vector(d)[2] for d in directions]
    single = tuple({1: 0.5, -1: 0.5} for _ in range(3))
    pairs = {}
    for i, j in itertools.combinations(range(3), 2):
        pairs[(i, j)] = {
            (x, y): (1.0 + x * y * z[i] * z[j]) / 4.0
            for x, y in itertools.product((1, -1), repeat=2)
        }
    return Marginals(single, pairs)
