"""Search over analyzer settings for the smallest critical visibility.

The objective maps one azimuth per setting (coplanar analyzers) to the LP
optimum ``v_max``.  It is piecewise smooth with flat directions (shifting
one party's angles by t and another's by -t leaves every angle sum, hence
the objective, unchanged), so a derivative-free downhill simplex search is
run from many seeded random starts.

Randomness comes from numpy's PCG64 generator.  Each restart (or scan
sample) draws from its own child of ``SeedSequence(seed)``, so results do
not depend on the order in which restarts are executed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lhv import as_counts, build_basis, check_cap
from .lp import LpProblem, LpSolution, critical_visibility, solve_lp
from .quantum import SettingsGrid, grid_from_flat

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SimplexConfig:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    tolerance: float = 1e-6
    max_iterations: int = 2000
    restarts: int = 30
    seed: int = 0
    initial_step: float = 0.5

    def __post_init__(self) -> None:
        if not self.reflection > 0:
            raise ValueError("reflection coefficient must be > 0")
        if not self.expansion > 1:
            raise ValueError("expansion coefficient must be > 1")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction coefficient must lie in (0, 1)")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink coefficient must lie in (0, 1)")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be > 0")


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: list[float] = field(default_factory=list)


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start: Sequence[float],
    cfg: SimplexConfig = SimplexConfig(),
    rng: np.random.Generator | None = None,
) -> NelderMeadResult:
    """Downhill simplex minimization.

    The initial simplex is ``start`` plus one vertex per coordinate, displaced
    along that axis by ``initial_step`` times a random factor in [0.5, 1]
    with random sign.  Iteration stops once the spread of function values
    over the simplex drops below ``cfg.tolerance``; hitting
    ``cfg.max_iterations`` first leaves ``converged`` False.
    """
    x0 = np.asarray(start, dtype=float).ravel()
    dim = x0.size
    if dim < 1:
        raise ValueError("nelder_mead needs at least one dimension")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)

    evaluations = 0

    def f(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        return float(objective(x))

    steps = cfg.initial_step * rng.uniform(0.5, 1.0, dim) * rng.choice((-1.0, 1.0), dim)
    pts = np.tile(x0, (dim + 1, 1))
    pts[1:] += np.diag(steps)
    vals = np.array([f(p) for p in pts])

    rho, chi, gamma, sigma = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    history = []
    iterations = 0
    converged = False
    while True:
        order = np.argsort(vals, kind="stable")
        pts, vals = pts[order], vals[order]
        history.append(float(vals[0]))
        if vals[-1] - vals[0] < cfg.tolerance:
            converged = True
            break
        if iterations >= cfg.max_iterations:
            break
        iterations += 1

        centroid = pts[:-1].mean(axis=0)
        worst = pts[-1]
        xr = centroid + rho * (centroid - worst)
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + chi * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                pts[-1], vals[-1] = xe, fe
            else:
                pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = centroid + gamma * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                pts[-1], vals[-1] = xc, fc
                continue
        else:
            xc = centroid + gamma * (worst - centroid)
            fc = f(xc)
            if fc < vals[-1]:
                pts[-1], vals[-1] = xc, fc
                continue
        pts[1:] = pts[0] + sigma * (pts[1:] - pts[0])
        vals[1:] = [f(p) for p in pts[1:]]

    return NelderMeadResult(pts[0].copy(), float(vals[0]), iterations, evaluations, converged, history)


class VisibilityObjective:
    """``v_max`` as a function of a flat azimuth vector, for fixed counts.

    Keeps the previous optimal LP basis and offers it as a warm start; nearby
    simplex vertices usually share most of their optimal basis.
    """

    def __init__(self, counts: Sequence[int], cap: int | None = None):
        self.counts = as_counts(counts)
        check_cap(self.counts, cap)
        self.columns = build_basis(self.counts, cap).tensors
        self.evaluations = 0
        self._warm: np.ndarray | None = None

    def targets(self, flat: np.ndarray) -> np.ndarray:
        sums = np.zeros(())
        pos = 0
        for n in self.counts:
            sums = np.add.outer(sums, flat[pos:pos + n])
            pos += n
        return np.cos(sums).reshape(-1)

    def solve(self, flat: Sequence[float]) -> LpSolution:
        flat = np.asarray(flat, dtype=float)
        if flat.size != sum(self.counts):
            raise ValueError(f"expected {sum(self.counts)} angles, got {flat.size}")
        problem = LpProblem(self.counts, self.columns, self.targets(flat))
        sol = solve_lp(problem, warm_basis=self._warm)
        self.evaluations += 1
        if sol.optimal:
            self._warm = sol.basis
        return sol

    def __call__(self, flat: Sequence[float]) -> float:
        return self.solve(flat).v_max


@dataclass
class RestartRecord:
    start: list[float]
    end: list[float]
    value: float
    iterations: int
    evaluations: int
    converged: bool


@dataclass
class ScanSummary:
    samples: int
    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass
class OptimizationReport:
    counts: tuple[int, ...]
    seed: int
    method: str
    config: dict
    best_grid: SettingsGrid | None
    best_v: float | None
    records: list[RestartRecord]
    total_lp_solves: int
    values: list[float] = field(default_factory=list)
    summary: ScanSummary | None = None


def _run_restart(counts: tuple[int, ...], cfg: SimplexConfig, child: np.random.SeedSequence) -> RestartRecord:
    rng = np.random.Generator(np.random.PCG64(child))
    start = rng.uniform(0.0, TWO_PI, sum(counts))
    objective = VisibilityObjective(counts)
    res = nelder_mead(objective, start, cfg, rng)
    return RestartRecord(
        start=start.tolist(),
        end=res.x.tolist(),
        value=res.fun,
        iterations=res.iterations,
        evaluations=res.evaluations,
        converged=res.converged,
    )


def _map(fn, args: list, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args)))


def minimize_vmax(
    counts: Sequence[int], cfg: SimplexConfig = SimplexConfig(), workers: int = 1
) -> OptimizationReport:
    """Multi-restart Nelder-Mead search for the settings minimizing ``v_max``.

    Starting points are uniform in [0, 2pi) per coordinate.
    """
    counts = as_counts(counts)
    check_cap(counts)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    records = _map(_run_restart, [(counts, cfg, ch) for ch in children], workers)
    best = min(range(len(records)), key=lambda i: (records[i].value, i))
    return OptimizationReport(
        counts=counts,
        seed=cfg.seed,
        method="nelder-mead",
        config=_config_dict(cfg),
        best_grid=grid_from_flat(counts, records[best].end),
        best_v=records[best].value,
        records=records,
        total_lp_solves=sum(r.evaluations for r in records),
    )


def _scan_sample(counts: tuple[int, ...], child: np.random.SeedSequence) -> tuple[list[float], float]:
    rng = np.random.Generator(np.random.PCG64(child))
    flat = rng.uniform(0.0, TWO_PI, sum(counts))
    return flat.tolist(), critical_visibility(grid_from_flat(counts, flat)).v_max


def random_scan(counts: Sequence[int], samples: int, seed: int = 0, workers: int = 1) -> OptimizationReport:
    """Evaluate ``v_max`` at ``samples`` uniformly random coplanar grids."""
    counts = as_counts(counts)
    check_cap(counts)
    if samples < 0:
        raise ValueError("samples must be >= 0")
    children = np.random.SeedSequence(seed).spawn(samples)
    results = _map(_scan_sample, [(counts, ch) for ch in children], workers)
    values = [v for _, v in results]
    report = OptimizationReport(
        counts=counts,
        seed=seed,
        method="random-scan",
        config={"samples": samples},
        best_grid=None,
        best_v=None,
        records=[],
        total_lp_solves=samples,
        values=values,
    )
    if samples:
        best = int(np.argmin(values))
        report.best_grid = grid_from_flat(counts, results[best][0])
        report.best_v = values[best]
        q = np.quantile(values, [0.25, 0.5, 0.75])
        report.summary = ScanSummary(samples, min(values), float(q[0]), float(q[1]), float(q[2]), max(values))
    return report


def evaluate_fixed(grid: SettingsGrid) -> LpSolution:
    """``v_max`` at a fixed grid, no search."""
    return critical_visibility(grid)


def subset_witness(
    grid: SettingsGrid, size: int = 2, target: float = 0.5, tol: float = 1e-3
) -> tuple[tuple[tuple[int, ...], ...], float] | None:
    """First ``size``-per-party sub-grid whose ``v_max`` is within ``tol`` of ``target``.

    Returns the chosen setting indices per party and the sub-grid value, or
    None when no sub-grid qualifies.
    """
    choices = [itertools.combinations(range(n), size) for n in grid.counts]
    for picks in itertools.product(*choices):
        v = critical_visibility(grid.subgrid(picks)).v_max
        if abs(v - target) <= tol:
            return picks, v
    return None


def _config_dict(cfg: SimplexConfig) -> dict:
    return {
        "reflection": cfg.reflection,
        "expansion": cfg.expansion,
        "contraction": cfg.contraction,
        "shrink": cfg.shrink,
        "tolerance": cfg.tolerance,
        "max_iterations": cfg.max_iterations,
        "restarts": cfg.restarts,
        "initial_step": cfg.initial_step,
    }
