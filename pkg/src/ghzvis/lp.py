"""Critical visibility as a linear program.

For fixed settings the noisy quantum correlations ``V * c`` admit a local
hidden-variable model iff they are a convex mixture of deterministic
product tensors.  Maximizing ``V`` over

    sum_s w_s T_s[e] - V c[e] = 0    for every setting combination e
    sum_s w_s = 1,   w >= 0,   0 <= V <= 1

gives the largest visibility that is still local, ``v_max``.  The optimum
is always finite and feasible: ``V = 0`` with equal weight on a tensor and
its negation satisfies every constraint.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from . import simplex
from .lhv import as_counts, build_basis, check_cap, strategy_matrix
from .quantum import SettingsGrid, correlation_tensor

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8


class LpInfeasibleError(RuntimeError):
    """The visibility LP came back infeasible, which its construction rules out."""


@dataclass(frozen=True)
class LpProblem:
    """Equality-form LP over ``x = (w_1, ..., w_n, V)``.

    ``columns`` holds one flattened product tensor per row; ``targets`` the
    correlation tensor at ``V = 1``.
    """

    dims: tuple[int, ...]
    columns: np.ndarray
    targets: np.ndarray
    mode: str = "full"

    @property
    def n_columns(self) -> int:
        return self.columns.shape[0]

    @property
    def n_constraints(self) -> int:
        return self.targets.size + 1

    @property
    def n_variables(self) -> int:
        return self.n_columns + 1

    def equality_system(self) -> tuple[np.ndarray, np.ndarray]:
        n_entries = self.targets.size
        A = np.empty((n_entries + 1, self.n_variables))
        A[:n_entries, :-1] = self.columns.T
        A[:n_entries, -1] = -self.targets
        A[n_entries, :-1] = 1.0
        A[n_entries, -1] = 0.0
        b = np.zeros(n_entries + 1)
        b[n_entries] = 1.0
        return A, b

    def objective(self) -> np.ndarray:
        cost = np.zeros(self.n_variables)
        cost[-1] = -1.0
        return cost

    def upper_bounds(self) -> np.ndarray:
        upper = np.full(self.n_variables, np.inf)
        upper[-1] = 1.0
        return upper


@dataclass
class LpSolution:
    status: str
    v_max: float
    weights: np.ndarray
    duals: np.ndarray
    iterations: int
    residual: float
    basis: np.ndarray | None = None

    @property
    def optimal(self) -> bool:
        return self.status == simplex.OPTIMAL


def build_problem(grid: SettingsGrid, mode: str = "full", cap: int | None = None) -> LpProblem:
    """Visibility LP for a coplanar grid.

    ``mode`` selects the strategy columns: ``full`` (one column per distinct
    product tensor), ``half`` (only the global sign flip removed) or
    ``raw`` (every strategy).
    """
    counts = as_counts(grid)
    check_cap(counts, cap)
    targets = correlation_tensor(grid, 1.0).flat()
    if mode == "full":
        columns = build_basis(counts, cap).tensors
    else:
        columns = strategy_matrix(counts, mode)
    return LpProblem(counts, columns, targets, mode)


def solve_lp(
    problem: LpProblem,
    *,
    warm_basis: np.ndarray | None = None,
    max_iter: int = 50_000,
) -> LpSolution:
    A, b = problem.equality_system()
    res = simplex.solve(
        problem.objective(),
        A,
        b,
        problem.upper_bounds(),
        basis=warm_basis,
        max_iter=max_iter,
    )
    if res.status == simplex.INFEASIBLE:
        raise LpInfeasibleError(f"visibility LP for dims {problem.dims} reported infeasible")
    if res.status == simplex.UNBOUNDED:
        raise LpInfeasibleError(f"visibility LP for dims {problem.dims} reported unbounded")
    weights = res.x[:-1]
    v = float(res.x[-1])
    # duals of the max problem are the negated duals of min(-V)
    duals = -res.duals
    residual = float(np.abs(problem.columns.T @ weights - v * problem.targets).max(initial=0.0))
    if res.status == simplex.OPTIMAL and residual > RESIDUAL_TOL:
        log.warning("certificate residual %.3g above %.1g", residual, RESIDUAL_TOL)
    return LpSolution(
        status=res.status,
        v_max=min(max(v, 0.0), 1.0),
        weights=weights,
        duals=duals,
        iterations=res.iterations,
        residual=residual,
        basis=res.basis,
    )


def critical_visibility(grid: SettingsGrid, mode: str = "full", cap: int | None = None) -> LpSolution:
    """Largest visibility at which ``grid``'s GHZ correlations stay local."""
    return solve_lp(build_problem(grid, mode, cap))


def write_lp(problem: LpProblem, out: TextIO | None = None) -> str:
    """Write the problem in CPLEX LP text format; returns the text."""
    buf = io.StringIO()
    names = [f"w{s}" for s in range(problem.n_columns)]
    buf.write(f"\\ visibility LP, dims {' '.join(map(str, problem.dims))}, columns {problem.mode}\n")
    buf.write("Maximize\n obj: V\nSubject To\n")
    for e, target in enumerate(problem.targets):
        terms = []
        for name, t in zip(names, problem.columns[:, e]):
            terms.append(f"{'+' if t > 0 else '-'} {name}")
        terms.append(f"{'-' if target >= 0 else '+'} {abs(float(target)):.17g} V")
        buf.write(f" e{e}: " + " ".join(terms) + " = 0\n")
    buf.write(" norm: " + " + ".join(names) + " = 1\n")
    buf.write("Bounds\n 0 <= V <= 1\nEnd\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def check_certificate(problem: LpProblem, solution: LpSolution) -> float:
    """Max-norm residual of the mixture against ``v_max * targets``."""
    return float(np.abs(problem.columns.T @ solution.weights - solution.v_max * problem.targets).max())

