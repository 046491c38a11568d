"""Dense revised simplex method for small equality-form linear programs.

Solves

    minimize  c @ x
    subject to A @ x == b,  0 <= x <= upper

Finite upper bounds become slack rows.  Phase one drives artificial
variables to zero, phase two optimizes the real objective.  Pricing is
Dantzig's most-negative reduced cost; after a run of degenerate pivots the
solver falls back to Bland's smallest-index rule, which cannot cycle, and
returns to Dantzig once the objective moves again.

Visibility LPs have a zero right-hand side on almost every row, so every
vertex near the start is massively degenerate.  Both phases therefore run on
a slightly perturbed right-hand side (fixed-seed, so results are
reproducible).  Afterwards the true right-hand side is restored; the basis
stays dual feasible and a few dual simplex pivots recover primal
feasibility.

The basis inverse is kept explicitly and updated with product-form pivots,
with a fresh inversion every ``refactor_every`` iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"

_PERTURB_SEED = 0x5EED


@dataclass
class SimplexResult:
    status: str
    x: np.ndarray
    fun: float
    duals: np.ndarray
    basis: np.ndarray
    iterations: int
    bland_pivots: int = 0


class _Tableau:
    """Working state of the revised simplex over a standard-form matrix."""

    def __init__(self, A, b, basis, *, feas_tol, opt_tol, pivot_tol, refactor_every, stall_limit):
        self.A = A
        self.b = b
        self.basis = np.asarray(basis, dtype=np.intp).copy()
        self.feas_tol = feas_tol
        self.opt_tol = opt_tol
        self.pivot_tol = pivot_tol
        self.refactor_every = refactor_every
        self.stall_limit = stall_limit
        self.iterations = 0
        self.bland_pivots = 0
        self.refactor()

    def refactor(self) -> None:
        self.Binv = np.linalg.inv(self.A[:, self.basis])
        self.xB = self.Binv @ self.b
        self._since_refactor = 0

    def set_rhs(self, b: np.ndarray) -> None:
        self.b = b
        self.refactor()

    def duals(self, cost: np.ndarray) -> np.ndarray:
        return cost[self.basis] @ self.Binv

    def reduced_costs(self, cost: np.ndarray, eligible: np.ndarray) -> np.ndarray:
        d = cost - self.duals(cost) @ self.A
        d[~eligible] = 0.0
        d[self.basis] = 0.0
        return d

    def run(self, cost: np.ndarray, eligible: np.ndarray, max_iter: int) -> str:
        """Primal simplex from the current (primal feasible) basis."""
        degenerate_run = 0
        while True:
            d = self.reduced_costs(cost, eligible)
            use_bland = degenerate_run >= self.stall_limit
            if use_bland:
                candidates = np.flatnonzero(d < -self.opt_tol)
                if candidates.size == 0:
                    return OPTIMAL
                j = int(candidates[0])
            else:
                j = int(np.argmin(d))
                if d[j] >= -self.opt_tol:
                    return OPTIMAL
            if self.iterations >= max_iter:
                return ITERATION_LIMIT

            alpha = self.Binv @ self.A[:, j]
            rows = np.flatnonzero(alpha > self.pivot_tol)
            if rows.size == 0:
                return UNBOUNDED
            ratios = np.maximum(self.xB[rows], 0.0) / alpha[rows]
            step = ratios.min()
            ties = rows[ratios <= step + self.feas_tol * 1e-3]
            if use_bland:
                r = int(ties[np.argmin(self.basis[ties])])
                self.bland_pivots += 1
            else:
                r = int(ties[np.argmax(alpha[ties])])

            self.pivot(r, j, alpha, max(self.xB[r], 0.0) / alpha[r])
            if step * -d[j] > self.opt_tol * 1e-3:
                degenerate_run = 0
            else:
                degenerate_run += 1

    def run_dual(self, cost: np.ndarray, eligible: np.ndarray, max_iter: int) -> str:
        """Dual simplex from a dual feasible basis until primal feasible."""
        while True:
            r = int(np.argmin(self.xB))
            if self.xB[r] >= -self.feas_tol:
                return OPTIMAL
            if self.iterations >= max_iter:
                return ITERATION_LIMIT
            row = self.Binv[r] @ self.A
            row[~eligible] = 0.0
            row[self.basis] = 0.0
            cols = np.flatnonzero(row < -self.pivot_tol)
            if cols.size == 0:
                return INFEASIBLE
            d = np.maximum(self.reduced_costs(cost, eligible)[cols], 0.0)
            ratios = d / -row[cols]
            best = ratios.min()
            ties = cols[ratios <= best + self.opt_tol * 1e-3]
            j = int(ties[np.argmin(row[ties])])
            alpha = self.Binv @ self.A[:, j]
            self.pivot(r, j, alpha, self.xB[r] / alpha[r])

    def pivot(self, r: int, j: int, alpha: np.ndarray, step: float) -> None:
        self.xB -= step * alpha
        self.xB[r] = step
        pivot_row = self.Binv[r] / alpha[r]
        self.Binv -= np.outer(alpha, pivot_row)
        self.Binv[r] = pivot_row
        self.basis[r] = j
        self.iterations += 1
        self._since_refactor += 1
        if self._since_refactor >= self.refactor_every:
            self.refactor()


def _standard_form(A_eq, b_eq, upper):
    m, n = A_eq.shape
    bounded = np.flatnonzero(np.isfinite(upper))
    k = bounded.size
    A = np.zeros((m + k, n + k))
    A[:m, :n] = A_eq
    A[m + np.arange(k), bounded] = 1.0
    A[m + np.arange(k), n + np.arange(k)] = 1.0
    b = np.concatenate([b_eq, upper[bounded]])
    return A, b, k


def solve(
    c,
    A_eq,
    b_eq,
    upper=None,
    *,
    basis=None,
    max_iter: int = 50_000,
    feas_tol: float = 1e-9,
    opt_tol: float = 1e-9,
    pivot_tol: float = 1e-9,
    perturb: float = 1e-7,
    refactor_every: int = 64,
    stall_limit: int = 50,
) -> SimplexResult:
    """Minimize ``c @ x`` over ``A_eq x = b_eq, 0 <= x <= upper``.

    ``basis`` optionally warm-starts phase two with column indices of the
    standard form (original columns followed by one slack per finite upper
    bound), typically taken from a previous result.  It is ignored if it is
    singular or not primal feasible.

    ``duals`` holds one multiplier per row of ``A_eq``.
    """
    c = np.asarray(c, dtype=float)
    A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.asarray(b_eq, dtype=float)
    m0, n0 = A_eq.shape
    upper = np.full(n0, np.inf) if upper is None else np.asarray(upper, dtype=float)
    if np.any(upper < 0):
        raise ValueError("upper bounds must be non-negative")

    A, b, k = _standard_form(A_eq, b_eq, upper)
    m, n = A.shape
    cost = np.concatenate([c, np.zeros(k)])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0
    row_sign = np.where(flip, -1.0, 1.0)
    opts = dict(
        feas_tol=feas_tol,
        opt_tol=opt_tol,
        pivot_tol=pivot_tol,
        refactor_every=refactor_every,
        stall_limit=stall_limit,
    )

    if perturb > 0:
        rng = np.random.default_rng(_PERTURB_SEED)
        b_work = b + perturb * (1.0 + rng.random(m)) * np.maximum(1.0, b)
    else:
        b_work = b

    tab = _try_warm(A, b_work, basis, opts) if basis is not None else None
    if tab is not None:
        eligible = np.ones(n, dtype=bool)
        cost_w = cost
    else:
        tab, eligible, cost_w, status = _phase_one(A, b_work, cost, k, n0, opts, max_iter)
        if status == INFEASIBLE and perturb > 0:
            # perturbation can break consistency of dependent rows
            return solve(c, A_eq, b_eq, upper, max_iter=max_iter, feas_tol=feas_tol,
                         opt_tol=opt_tol, pivot_tol=pivot_tol, perturb=0.0,
                         refactor_every=refactor_every, stall_limit=stall_limit)
        if status != OPTIMAL:
            return _result(status, tab, cost_w, n0, m0, row_sign)

    status = tab.run(cost_w, eligible, max_iter)
    if status == OPTIMAL and perturb > 0:
        tab.set_rhs(b)
        status = tab.run_dual(cost_w, eligible, max_iter)
        if status == OPTIMAL:
            np.maximum(tab.xB, 0.0, out=tab.xB)
            status = tab.run(cost_w, eligible, max_iter)
    return _result(status, tab, cost_w, n0, m0, row_sign)


def _phase_one(A, b, cost, k, n0, opts, max_iter):
    """Find a feasible basis; slack rows start with their slack basic."""
    m, n = A.shape
    n_art = m - k
    A1 = np.hstack([A, np.zeros((m, n_art))])
    A1[np.arange(n_art), n + np.arange(n_art)] = 1.0
    start = np.concatenate([n + np.arange(n_art), n0 + np.arange(k)])
    cost1 = np.concatenate([np.zeros(n), np.ones(n_art)])
    cost2 = np.concatenate([cost, np.zeros(n_art)])
    tab = _Tableau(A1, b, start, **opts)
    status = tab.run(cost1, np.ones(n + n_art, dtype=bool), max_iter)
    eligible = np.concatenate([np.ones(n, dtype=bool), np.zeros(n_art, dtype=bool)])
    if status != OPTIMAL:
        return tab, eligible, cost2, status
    infeasibility = float(cost1[tab.basis] @ tab.xB)
    if infeasibility > opts["feas_tol"] * max(1.0, np.abs(b).max(initial=0.0)):
        return tab, eligible, cost2, INFEASIBLE
    _drive_out_artificials(tab, n, opts["pivot_tol"])
    return tab, eligible, cost2, OPTIMAL


def _try_warm(A, b, basis, opts):
    basis = np.asarray(basis, dtype=np.intp)
    m, n = A.shape
    if basis.shape != (m,) or basis.min() < 0 or basis.max() >= n or np.unique(basis).size != m:
        return None
    if np.linalg.cond(A[:, basis]) > 1e10:
        return None
    tab = _Tableau(A, b, basis, **opts)
    if tab.xB.min() < -opts["feas_tol"]:
        return None
    np.maximum(tab.xB, 0.0, out=tab.xB)
    return tab


def _drive_out_artificials(tab: _Tableau, n_real: int, pivot_tol: float) -> None:
    """Pivot zero-level artificials out of the basis where a real column allows.

    Rows where no real column has a nonzero entry are redundant; their
    artificial stays basic at zero and can never move.
    """
    for r in range(tab.basis.size):
        if tab.basis[r] < n_real:
            continue
        row = tab.Binv[r] @ tab.A[:, :n_real]
        row[tab.basis[tab.basis < n_real]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > pivot_tol * 1e3:
            alpha = tab.Binv @ tab.A[:, j]
            tab.pivot(r, j, alpha, tab.xB[r] / alpha[r])


def _result(status, tab, cost, n0, m0, row_sign) -> SimplexResult:
    width = tab.A.shape[1]
    x_std = np.zeros(width)
    x_std[tab.basis] = tab.xB
    x = x_std[:n0].copy()
    x[(x < 0) & (x > -tab.feas_tol)] = 0.0
    y = tab.duals(cost) * row_sign
    return SimplexResult(
        status=status,
        x=x,
        fun=float(cost[:n0] @ x),
        duals=y[:m0],
        basis=tab.basis.copy(),
        iterations=tab.iterations,
        bland_pivots=tab.bland_pivots,
    )
