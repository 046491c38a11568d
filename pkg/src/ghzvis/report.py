"""Rendering of LP solutions and optimization reports as table, JSON or CSV.

JSON output is a plain tree of lists, dicts, strings and numbers.  Angles are
rounded to 12 significant digits; visibilities keep full float precision.
Identical inputs produce byte-identical text.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .grids import format_angle
from .lp import LpSolution
from .optimizer import OptimizationReport
from .quantum import SettingsGrid

FORMATS = ("table", "json", "csv")


def _angle(x: float) -> float:
    return float(format_angle(x))


def grid_tree(grid: SettingsGrid | None) -> list[list[float]] | None:
    if grid is None:
        return None
    return [[_angle(a) for a in party] for party in grid.angles()]


def solution_tree(grid: SettingsGrid, sol: LpSolution, certificate: bool = False, columns=None) -> dict:
    tree = {
        "counts": list(grid.counts),
        "angles": grid_tree(grid),
        "status": sol.status,
        "v_max": sol.v_max,
        "iterations": sol.iterations,
        "residual": sol.residual,
    }
    if certificate:
        support = np.flatnonzero(sol.weights > 1e-12)
        mix = []
        for s in support:
            item = {"column": int(s), "weight": float(sol.weights[s])}
            if columns is not None:
                item["tensor"] = [int(t) for t in columns[s]]
            mix.append(item)
        tree["certificate"] = mix
        tree["duals"] = [float(y) for y in sol.duals]
    return tree


def report_tree(report: OptimizationReport) -> dict:
    tree = {
        "counts": list(report.counts),
        "seed": report.seed,
        "method": report.method,
        "config": report.config,
        "best_v": report.best_v,
        "best_angles": grid_tree(report.best_grid),
        "total_lp_solves": report.total_lp_solves,
    }
    if report.method == "random-scan":
        s = report.summary
        tree["summary"] = None if s is None else {
            "samples": s.samples, "min": s.min, "q1": s.q1, "median": s.median, "q3": s.q3, "max": s.max,
        }
        tree["values"] = list(report.values)
    else:
        tree["restarts"] = [
            {
                "index": i,
                "start": [_angle(a) for a in r.start],
                "end": [_angle(a) for a in r.end],
                "value": r.value,
                "iterations": r.iterations,
                "evaluations": r.evaluations,
                "converged": r.converged,
            }
            for i, r in enumerate(report.records)
        ]
    return tree


def to_json(tree: dict) -> str:
    return json.dumps(tree, indent=2) + "\n"


def solution_text(grid: SettingsGrid, sol: LpSolution, fmt: str, certificate: bool = False, columns=None) -> str:
    if fmt == "json":
        return to_json(solution_tree(grid, sol, certificate, columns))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["counts", "status", "v_max", "iterations", "residual"])
        w.writerow([" ".join(map(str, grid.counts)), sol.status, f"{sol.v_max:.9f}", sol.iterations, f"{sol.residual:.3g}"])
        if certificate:
            w.writerow([])
            w.writerow(["column", "weight"])
            for s in np.flatnonzero(sol.weights > 1e-12):
                w.writerow([int(s), repr(float(sol.weights[s]))])
        return buf.getvalue()
    lines = [
        f"counts      {' x '.join(map(str, grid.counts))}",
        f"status      {sol.status}",
        f"v_max       {sol.v_max:.9f}",
        f"noise 1-V   {1.0 - sol.v_max:.9f}",
        f"pivots      {sol.iterations}",
        f"residual    {sol.residual:.3g}",
    ]
    if certificate:
        lines.append("certificate (column: weight)")
        for s in np.flatnonzero(sol.weights > 1e-12):
            lines.append(f"  {int(s):>8d}: {sol.weights[s]:.12f}")
    return "\n".join(lines) + "\n"


def report_text(report: OptimizationReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(report_tree(report))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if report.method == "random-scan":
            w.writerow(["sample", "v_max"])
            for i, v in enumerate(report.values):
                w.writerow([i, repr(v)])
        else:
            w.writerow(["restart", "value", "iterations", "evaluations", "converged", "end_angles"])
            for i, r in enumerate(report.records):
                w.writerow([i, repr(r.value), r.iterations, r.evaluations, r.converged,
                            " ".join(format_angle(a) for a in r.end)])
        return buf.getvalue()

    lines = [f"counts      {' x '.join(map(str, report.counts))}", f"method      {report.method}", f"seed        {report.seed}"]
    if report.best_v is None:
        lines.append("best v_max  (no samples)")
    else:
        lines.append(f"best v_max  {report.best_v:.9f}")
        for k, party in enumerate(report.best_grid.angles()):
            lines.append(f"  party {k}   " + " ".join(format_angle(a) for a in party))
    lines.append(f"LP solves   {report.total_lp_solves}")
    if report.method == "random-scan" and report.summary is not None:
        s = report.summary
        lines.append(
            f"summary     min {s.min:.9f}  q1 {s.q1:.9f}  median {s.median:.9f}  q3 {s.q3:.9f}  max {s.max:.9f}"
        )
    elif report.records:
        lines.append(f"{'restart':>7}  {'value':>12}  {'iters':>5}  {'evals':>5}  conv")
        for i, r in enumerate(report.records):
            lines.append(f"{i:>7}  {r.value:12.9f}  {r.iterations:>5}  {r.evaluations:>5}  {'yes' if r.converged else 'no'}")
    return "\n".join(lines) + "\n"
