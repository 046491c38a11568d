"""Small exact checks: the CHSH combination and the GHZ contradiction.

The GHZ argument here uses the sine convention ``E = sin(phiA + phiB + phiC)``
(perfect correlations whenever the angle sum is pi/2 + k pi), kept separate
from the cosine convention used by the visibility solver.  Everything runs on
integer +/-1 values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class ChshAssignment:
    a1: int
    a2: int
    b1: int
    b2: int

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "b1", "b2"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1, got {getattr(self, name)!r}")


def all_chsh_assignments() -> list[ChshAssignment]:
    return [ChshAssignment(*vals) for vals in itertools.product((1, -1), repeat=4)]


def chsh_combination(x: ChshAssignment) -> int:
    """``a1 b1 + a1 b2 + a2 b1 - a2 b2``, always +2 or -2."""
    return x.a1 * x.b1 + x.a1 * x.b2 + x.a2 * x.b1 - x.a2 * x.b2


def chsh_value(e11: float, e12: float, e21: float, e22: float) -> float:
    return e11 + e12 + e21 - e22


def chsh_bound_check(correlations: Sequence[float]) -> tuple[float, bool]:
    """CHSH value of ``(E11, E12, E21, E22)`` and whether |S| <= 2 holds."""
    if len(correlations) != 4:
        raise ValueError("expected the four correlations E11, E12, E21, E22")
    s = chsh_value(*correlations)
    return s, -2.0 <= s <= 2.0


def chsh_quantum_correlations(
    alphas: Sequence[float] = (0.0, HALF_PI), betas: Sequence[float] = (-math.pi / 4, math.pi / 4)
) -> tuple[float, float, float, float]:
    """``cos(alpha_n + beta_m)`` at the given angles, ordered E11, E12, E21, E22."""
    return tuple(math.cos(a + b) for a in alphas for b in betas)


def ghz_sin_correlation(phi_a: float, phi_b: float, phi_c: float) -> float:
    return math.sin(phi_a + phi_b + phi_c)


@dataclass(frozen=True)
class GhzConstraint:
    angles: tuple[float, float, float]
    product: int


@dataclass(frozen=True)
class ParadoxRecord:
    constraints: tuple[GhzConstraint, ...]
    derived_product: int
    quantum_value: int
    satisfying_assignments: int
    total_assignments: int

    @property
    def contradiction(self) -> bool:
        return self.derived_product != self.quantum_value and self.satisfying_assignments == 0


def _perfect_value(angles: tuple[float, float, float]) -> int:
    e = ghz_sin_correlation(*angles)
    if abs(abs(e) - 1.0) > 1e-12:
        raise ValueError(f"angles {angles} do not give a perfect correlation (E = {e})")
    return 1 if e > 0 else -1


def ghz_paradox() -> ParadoxRecord:
    """Elements of reality for the angles 0 and pi/2 cannot exist.

    The three perfect correlations with one pi/2 setting each demand product
    +1.  Across them each party's 0-value appears twice and its pi/2-value
    once, so multiplying them predicts ``A(pi/2) B(pi/2) C(pi/2) = +1``,
    while quantum mechanics gives -1.  An exhaustive pass over all 64 assignments confirms that no
    assignment of predetermined values meets all four requirements.
    """
    settings = (HALF_PI, 0.0)
    premises = [(HALF_PI, 0.0, 0.0), (0.0, 0.0, HALF_PI), (0.0, HALF_PI, 0.0)]
    target = (HALF_PI, HALF_PI, HALF_PI)
    constraints = tuple(GhzConstraint(a, _perfect_value(a)) for a in premises + [target])

    # Multiply the premises side by side.  Since every value squares to 1,
    # only local values appearing an odd number of times survive on the left.
    parity: dict[tuple[int, float], int] = {}
    for c in constraints[:-1]:
        for party, angle in enumerate(c.angles):
            parity[(party, angle)] = parity.get((party, angle), 0) ^ 1
    survivors = {key for key, odd in parity.items() if odd}
    if survivors != {(party, a) for party, a in enumerate(target)}:
        raise AssertionError(f"premises do not reduce to the target product: {survivors}")
    derived = 1
    for c in constraints[:-1]:
        derived *= c.product

    satisfying = 0
    total = 0
    for values in itertools.product((1, -1), repeat=6):
        # values[2*k + s]: party k, setting s (0 -> pi/2, 1 -> 0)
        total += 1
        if all(
            math.prod(values[2 * k + settings.index(a)] for k, a in enumerate(c.angles)) == c.product
            for c in constraints
        ):
            satisfying += 1

    return ParadoxRecord(
        constraints=constraints,
        derived_product=derived,
        quantum_value=constraints[-1].product,
        satisfying_assignments=satisfying,
        total_assignments=total,
    )
