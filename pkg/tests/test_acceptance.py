"""One pass/fail line per acceptance criterion; see the summary section of the pytest run."""

import itertools
import math
import time

import numpy as np
import pytest

from ghzvis.demos import chsh_bound_check, chsh_quantum_correlations, ghz_paradox
from ghzvis.grids import chsh_grid, five_setting_grid, mermin_grid
from ghzvis.lhv import _cached_basis
from ghzvis.lp import critical_visibility
from ghzvis.optimizer import SimplexConfig, evaluate_fixed, minimize_vmax, random_scan, subset_witness
from ghzvis.quantum import (
    AnalyzerDirection,
    SettingsGrid,
    correlation,
    correlation_from_probabilities,
    joint_probability,
    marginals,
)
from ghzvis.report import report_text

from conftest import highs_vmax

SQRT2 = math.sqrt(2)
OUTCOMES = list(itertools.product((1, -1), repeat=3))
SCAN_SAMPLES = 500


@pytest.fixture(scope="module")
def three_setting_run():
    return minimize_vmax((3, 3, 3), SimplexConfig(restarts=30, seed=1))


@pytest.fixture(scope="module")
def four_setting_scan():
    return random_scan((4, 4, 4), SCAN_SAMPLES, seed=1)


def test_c01_mermin_threshold(verdict):
    _cached_basis.cache_clear()  # time a cold solve, enumeration included
    t0 = time.perf_counter()
    v = critical_visibility(mermin_grid()).v_max
    elapsed = time.perf_counter() - t0
    ok = abs(v - 0.5) <= 1e-6 and elapsed < 1.0
    verdict("C1", "Mermin two-setting threshold", ok, f"v_max={v:.12f}, {elapsed * 1e3:.1f} ms")
    assert ok


def test_c02_three_setting_optimum(verdict, three_setting_run):
    rep = three_setting_run
    ok = abs(rep.best_v - 0.5) <= 1e-3
    verdict("C2", "three-setting optimum, 30 restarts", ok,
            f"best_v={rep.best_v:.9f}, {rep.total_lp_solves} LP solves")
    assert ok


def test_c03_five_setting_grid(verdict):
    t0 = time.perf_counter()
    sol = evaluate_fixed(five_setting_grid())
    elapsed = time.perf_counter() - t0
    ok = sol.optimal and abs(sol.v_max - 0.5) <= 1e-4
    verdict("C3", "five-setting fixed grid", ok, f"v_max={sol.v_max:.12f}, {elapsed:.2f} s, {sol.iterations} pivots")
    assert ok


def test_c04_four_setting_scan_floor(verdict, four_setting_scan):
    rep = four_setting_scan
    low = min(rep.values)
    ok = len(rep.values) >= 500 and low > 0.5 - 1e-6
    verdict("C4", "4x4x4 random scan floor", ok,
            f"{len(rep.values)} samples, min={low:.9f}, median={rep.summary.median:.6f}")
    assert ok


def test_c05_chsh_cross_check(verdict):
    v = critical_visibility(chsh_grid()).v_max
    oracle = highs_vmax(chsh_grid().angles())
    s, _ = chsh_bound_check(chsh_quantum_correlations())
    ok = (
        abs(v - 1 / SQRT2) <= 1e-4
        and abs(v * 2 * SQRT2 - 2.0) <= 1e-3
        and abs(v - oracle) <= 1e-7
        and abs(s - 2 * SQRT2) <= 1e-12
    )
    verdict("C5", "CHSH cross-check", ok, f"v_max={v:.9f}, 16-strategy oracle={oracle:.9f}, v*2sqrt2={v * 2 * SQRT2:.9f}")
    assert ok


def test_c06_ghz_paradox(verdict):
    rec = ghz_paradox()
    ok = (
        rec.derived_product == 1
        and rec.quantum_value == -1
        and rec.satisfying_assignments == 0
        and rec.total_assignments == 64
    )
    verdict("C6", "GHZ paradox", ok,
            f"derived {rec.derived_product:+d}, quantum {rec.quantum_value:+d}, "
            f"{rec.satisfying_assignments}/{rec.total_assignments} satisfying")
    assert ok


def _count_tuples(max_total=9):
    for parties in range(2, 5):
        for counts in itertools.product(range(1, 5), repeat=parties):
            if sum(counts) <= max_total:
                yield counts


def test_c07_dedup_matches_raw(verdict):
    rng = np.random.default_rng(2024)
    worst, cases = 0.0, 0
    for counts in _count_tuples():
        draws = [rng.uniform(0, 2 * math.pi, sum(counts))]
        # lattice angles make the LP heavily degenerate
        draws.append(rng.integers(0, 8, sum(counts)) * math.pi / 4)
        for flat in draws:
            parties, pos = [], 0
            for n in counts:
                parties.append(flat[pos:pos + n])
                pos += n
            grid = SettingsGrid.from_angles(parties)
            full = critical_visibility(grid, "full").v_max
            raw = critical_visibility(grid, "raw").v_max
            worst = max(worst, abs(full - raw))
            cases += 1
    ok = worst <= 1e-9
    verdict("C7", "dedup basis vs raw basis", ok, f"{cases} grids with total settings <= 9, max |diff|={worst:.2e}")
    assert ok


def test_c08_subset_property(verdict, three_setting_run):
    grid = three_setting_run.best_grid
    found = subset_witness(grid, size=2, target=0.5, tol=1e-3)
    if found is None:
        verdict("C8", "two-setting subset at the 3x3x3 optimum", False, "no qualifying sub-grid")
        pytest.fail("no qualifying sub-grid")
    picks, v = found
    sub = grid.subgrid(picks).angles()
    shown = "; ".join(" ".join(f"{a:.6f}" for a in party) for party in sub)
    verdict("C8", "two-setting subset at the 3x3x3 optimum", True, f"picks={picks}, v_max={v:.9f}, angles [{shown}]")


def test_c09_quantum_invariants(verdict):
    rng = np.random.default_rng(99)
    draws = 10_000
    worst_norm = worst_cons = worst_marg = 0.0
    min_p = 1.0
    for _ in range(draws):
        phis = rng.uniform(0, 2 * math.pi, 3)
        v = float(rng.uniform(0, 1))
        dirs = [AnalyzerDirection.equatorial(p) for p in phis]
        probs = {o: joint_probability(o, dirs, v) for o in OUTCOMES}
        min_p = min(min_p, min(probs.values()))
        worst_norm = max(worst_norm, abs(sum(probs.values()) - 1.0))
        worst_cons = max(worst_cons, abs(correlation(phis, v) - correlation_from_probabilities(dirs, v)))
        marg = marginals(dirs, v)
        for k in range(3):
            for x in (1, -1):
                summed = sum(p for o, p in probs.items() if o[k] == x)
                worst_marg = max(worst_marg, abs(summed - 0.5), abs(marg.single[k][x] - 0.5))
        for pair, table in marg.pairs.items():
            for xy, p in table.items():
                summed = sum(q for o, q in probs.items() if (o[pair[0]], o[pair[1]]) == xy)
                worst_marg = max(worst_marg, abs(p - 0.25), abs(summed - 0.25))
    ok = worst_norm <= 1e-12 and min_p >= -1e-12 and worst_cons <= 1e-12 and worst_marg <= 1e-12
    verdict("C9", "quantum-model invariants", ok,
            f"{draws} draws, norm {worst_norm:.1e}, min p {min_p:.3g}, consistency {worst_cons:.1e}, "
            f"marginals {worst_marg:.1e}")
    assert ok


def test_c10_determinism(verdict, three_setting_run, four_setting_scan):
    opt_again = minimize_vmax((3, 3, 3), SimplexConfig(restarts=30, seed=1))
    scan_again = random_scan((4, 4, 4), SCAN_SAMPLES, seed=1)
    same_opt = report_text(opt_again, "json") == report_text(three_setting_run, "json")
    same_scan = report_text(scan_again, "json") == report_text(four_setting_scan, "json")
    ok = same_opt and same_scan
    verdict("C10", "seeded reruns byte-identical", ok, f"optimize {same_opt}, scan {same_scan}")
    assert ok


@pytest.mark.slow
def test_c04_stretch_full_scan(verdict):
    rep = random_scan((4, 4, 4), 9000, seed=1)
    low = min(rep.values)
    ok = low > 0.5 - 1e-6
    verdict("C4+", "4x4x4 random scan, 9000 samples", ok, f"min={low:.9f}, median={rep.summary.median:.6f}")
    assert ok
