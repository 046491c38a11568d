"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 enumeration cap exceeded,
4 LP iteration limit.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import demos, report, simplex
from .grids import GridFileError, PRESET_GRIDS, parse_grid, read_grid, write_grid
from .lhv import CAP_ENV_VAR, CapExceededError, DEDUP_MODES
from .lp import build_problem, solve_lp, write_lp
from .optimizer import SimplexConfig, minimize_vmax, random_scan
from .quantum import SettingsGrid

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_ITERATIONS = 4

OPTIMIZE_PRESETS = {"paper_2": (2, 2, 2), "paper_3": (3, 3, 3)}


class InputError(Exception):
    pass


def _emit(text: str, out: str | None, summary: str | None = None) -> None:
    if out:
        Path(out).write_text(text)
        if summary:
            sys.stdout.write(summary)
    else:
        sys.stdout.write(text)


def _counts(args: argparse.Namespace, presets: dict[str, tuple[int, ...]]) -> tuple[int, ...]:
    chosen = [name for name in presets if getattr(args, name, False)]
    if len(chosen) > 1:
        raise InputError("choose at most one preset")
    if chosen:
        if args.counts:
            raise InputError("--counts cannot be combined with a preset")
        return presets[chosen[0]]
    if not args.counts:
        raise InputError("--counts is required (or a preset)")
    counts = tuple(args.counts)
    if args.parties is not None:
        if len(counts) == 1:
            counts = counts * args.parties
        elif len(counts) != args.parties:
            raise InputError(f"--parties {args.parties} does not match {len(counts)} counts")
    if len(counts) < 2:
        raise InputError("need at least 2 parties; pass one count per party or use --parties")
    if any(n < 1 for n in counts):
        raise InputError("every count must be >= 1")
    return counts


def _grid(args: argparse.Namespace) -> SettingsGrid:
    presets = [name for name in ("paper_2", "paper_5", "chsh", "single") if getattr(args, name)]
    sources = len(presets) + bool(args.grid) + bool(args.angles)
    if sources != 1:
        raise InputError("give exactly one grid source: --grid FILE, --angles (per party), or a preset")
    if args.grid:
        return read_grid(args.grid)
    if args.angles:
        return parse_grid(args.angles, "--angles")
    return PRESET_GRIDS[presets[0].replace("_", "-")]()


def cmd_visibility(args: argparse.Namespace) -> int:
    grid = _grid(args)
    problem = build_problem(grid, args.columns)
    if args.dump_lp:
        with open(args.dump_lp, "w") as fh:
            write_lp(problem, fh)
    sol = solve_lp(problem, max_iter=args.max_pivots)
    text = report.solution_text(grid, sol, args.format, args.certificate, problem.columns)
    _emit(text, args.out, f"v_max {sol.v_max:.9f}\n")
    return EXIT_ITERATIONS if sol.status == simplex.ITERATION_LIMIT else EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    counts = _counts(args, OPTIMIZE_PRESETS)
    cfg = SimplexConfig(
        tolerance=args.tolerance,
        max_iterations=args.max_iter,
        restarts=args.restarts,
        seed=args.seed,
        initial_step=args.step,
    )
    rep = minimize_vmax(counts, cfg, workers=args.workers)
    text = report.report_text(rep, args.format)
    summary = f"best v_max {rep.best_v:.9f}\n" + "".join(
        f"party {k}: " + " ".join(report.format_angle(a) for a in party) + "\n"
        for k, party in enumerate(rep.best_grid.angles())
    )
    _emit(text, args.out, summary)
    if args.grid_out:
        with open(args.grid_out, "w") as fh:
            write_grid(rep.best_grid, fh, f"best v_max {rep.best_v!r}, counts {' '.join(map(str, counts))}, seed {args.seed}")
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    counts = _counts(args, {"paper_4x4x4": (4, 4, 4)})
    samples = args.samples
    if samples is None:
        samples = 9000 if args.paper_4x4x4 else 1000
    if samples < 0:
        raise InputError("--samples must be >= 0")
    rep = random_scan(counts, samples, args.seed, workers=args.workers)
    text = report.report_text(rep, args.format)
    summary = "no samples\n" if rep.best_v is None else f"min v_max {rep.best_v:.9f} over {samples} samples\n"
    _emit(text, args.out, summary)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    lines = []
    if args.which == "ghz":
        rec = demos.ghz_paradox()
        for c in rec.constraints[:-1]:
            lines.append(f"sin({' + '.join(f'{a:.4f}' for a in c.angles)}) = {c.product:+d}  =>  A B C = {c.product:+d}")
        last = rec.constraints[-1]
        lines.append(f"quantum:  at ({', '.join(f'{a:.4f}' for a in last.angles)}) A B C = {rec.quantum_value:+d}")
        lines.append(f"product of the first three: A B C = {rec.derived_product:+d}")
        lines.append(f"assignments satisfying all four: {rec.satisfying_assignments}/{rec.total_assignments}")
        verdict = "contradiction" if rec.contradiction else "consistent"
        lines.append(f"derived {rec.derived_product:+d}, quantum {rec.quantum_value:+d}, {verdict}")
    elif args.classical:
        for x in demos.all_chsh_assignments():
            lines.append(f"a1={x.a1:+d} a2={x.a2:+d} b1={x.b1:+d} b2={x.b2:+d}  S={demos.chsh_combination(x):+d}")
        values = {demos.chsh_combination(x) for x in demos.all_chsh_assignments()}
        lines.append(f"values taken: {sorted(values)}")
    else:
        e = demos.chsh_quantum_correlations()
        s, ok = demos.chsh_bound_check(e)
        lines.append("E11 E12 E21 E22 = " + " ".join(f"{x:+.6f}" for x in e))
        lines.append(f"S = {s:.9f} (2*sqrt(2) = {2 * math.sqrt(2):.9f})")
        lines.append("bound |S| <= 2 " + ("satisfied" if ok else "violated"))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=report.FORMATS, default="table")
    p.add_argument("--out", metavar="PATH", help="write the full output here; print a summary instead")


def _add_counts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--counts", type=int, nargs="+", metavar="N", help="settings per party")
    p.add_argument("--parties", type=int, metavar="N", help="repeat a single --counts value for N parties")
    p.add_argument("--seed", type=int, default=0, metavar="U64")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzvis",
        description="Critical visibility of GHZ correlations against local hidden variables.",
        epilog=f"The enumeration cap on total settings defaults to 24; override with {CAP_ENV_VAR}.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("visibility", help="v_max for a fixed grid")
    p.add_argument("--grid", metavar="FILE", help="grid file: one line of radians per party")
    p.add_argument("--angles", action="append", metavar="ANGLES", help="one party's angles, repeat per party")
    p.add_argument("--paper-2", action="store_true", help="{0, pi/2} for three parties")
    p.add_argument("--paper-5", action="store_true", help="the five-setting grid")
    p.add_argument("--chsh", action="store_true", help="two-party CHSH-optimal grid")
    p.add_argument("--single", action="store_true", help="one setting per party")
    p.add_argument("--columns", choices=DEDUP_MODES, default="full", help="strategy columns in the LP")
    p.add_argument("--certificate", action="store_true", help="print the local mixture and duals")
    p.add_argument("--dump-lp", metavar="PATH", help="write the LP in CPLEX LP format")
    p.add_argument("--max-pivots", type=int, default=50_000, metavar="N", help="simplex pivot budget (exit 4 when exhausted)")
    _add_output(p)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("optimize", help="multi-restart Nelder-Mead search for the lowest v_max")
    _add_counts(p)
    p.add_argument("--paper-2", action="store_true", help="counts 2 2 2")
    p.add_argument("--paper-3", action="store_true", help="counts 3 3 3")
    p.add_argument("--restarts", type=int, default=30)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--step", type=float, default=0.5, help="initial simplex size in radians")
    p.add_argument("--grid-out", metavar="FILE", help="write the best grid as a grid file")
    _add_output(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("scan", help="v_max at seeded random grids")
    _add_counts(p)
    p.add_argument("--paper-4x4x4", action="store_true", help="counts 4 4 4, 9000 samples")
    p.add_argument("--samples", type=int)
    _add_output(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("demo", help="CHSH and GHZ demonstrations")
    p.add_argument("which", choices=("ghz", "chsh"))
    p.add_argument("--classical", action="store_true", help="list all deterministic CHSH values")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"ghzvis: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GridFileError, InputError, ValueError) as exc:
        print(f"ghzvis: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
