"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL verdict that is printed at the end of
the pytest session. Run directly (``python tests/test_acceptance.py``) to get
the same lines without pytest.
"""

import functools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

sys.path.insert(0, str(Path(__file__).parent))

from netpredict import cli, congruency, corpus, entropy, measures, sweeps, synth  # noqa: E402

BASELINE_RUNS = 40
SEEDS = range(10)
SW_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
SW_FIXED = {"n_nodes": 50, "T": 300}
TSBM_DIAG = (0.0, 0.5, 1.0)
TSBM_FIXED_GAMMA = 0.5
TSBM_FIXED = {"communities": 4, "n_nodes": 100, "degree": 3, "T": 300}

VERDICTS: list[str] = []


def verdict(n, name, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {name}: {detail} [{elapsed:.1f}s / {budget:.0f}s]"
    VERDICTS.append(line)
    return ok, line


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# --- shared synthetic battery (criteria 5, 6, 9) ---------------------------------


@functools.lru_cache(maxsize=None)
def small_world_battery():
    def go():
        return {
            p: [sweeps.evaluate_corpus("small-world", {**SW_FIXED, "rewire_p": p}, s, BASELINE_RUNS,
                                       with_tep=False, with_markov=True) for s in SEEDS]
            for p in SW_GRID
        }

    return timed(go)


@functools.lru_cache(maxsize=None)
def tsbm_battery():
    points = {(b, b) for b in TSBM_DIAG} | {(b, TSBM_FIXED_GAMMA) for b in TSBM_DIAG}

    def go():
        return {
            (b, g): [sweeps.evaluate_corpus("tsbm", {**TSBM_FIXED, "beta": b, "gamma": g}, s, BASELINE_RUNS,
                                            with_tep=True, tep_runs=0, with_markov=True) for s in SEEDS]
            for b, g in sorted(points)
        }

    return timed(go)


def mean(results, attr):
    return float(np.mean([getattr(r, attr) for r in results]))


# --- criteria ---------------------------------------------------------------------


def criterion_1():
    def go():
        return entropy.lambda_2d([[0, 1], [1, 0]]).sum_squares, entropy.lambda_2d([[1, 1], [1, 1]]).sum_squares

    (a, b), dt = timed(go)
    return verdict(1, "match-length fixtures", a == 7 and b == 13, f"sum sq = {a}, {b} (want 7, 13)", dt, 1)


def criterion_2():
    def go():
        worst = 0.0
        for N in range(2, 17):
            worst = max(worst, abs(entropy.solve_fano(0, N) - 1), abs(entropy.solve_fano(math.log2(N), N) - 1 / N))
        x = entropy.solve_fano(0.5, 2)
        h = -(x * math.log2(x) + (1 - x) * math.log2(1 - x))
        return worst, x, h

    (worst, x, h), dt = timed(go)
    ok = worst <= 1e-9 and abs(x - 0.88997) <= 1e-4 and abs(h - 0.5) <= 1e-9
    return verdict(2, "Fano solver", ok, f"endpoint err {worst:.1e}, root {x:.6f}, H(root) = {h:.10f}", dt, 1)


def criterion_3():
    def go():
        h2 = [entropy.entropy_rate_2d(np.random.default_rng(s).integers(0, 2, (64, 64))).bits_per_cell for s in range(20)]
        blk = [entropy.block_entropy_oracle(np.random.default_rng(s).integers(0, 2, (64, 64)), 1).bits_per_cell
               for s in range(20)]
        h4 = [entropy.entropy_rate_2d(np.random.default_rng(s).integers(0, 4, (64, 64))).bits_per_cell for s in range(20)]
        return float(np.mean(h2)), float(np.mean(blk)), float(np.mean(h4))

    (h2, blk, h4), dt = timed(go)
    ok = 0.7 <= h2 <= 1.3 and abs(h2 - blk) <= 0.3 and h4 > h2
    return verdict(3, "entropy oracle agreement", ok, f"lz2d {h2:.3f}, block {blk:.3f}, 4-symbol {h4:.3f}", dt, 120)


def criterion_4():
    def go():
        plan = congruency.split_squares(3, 5)
        stages = congruency.stage_sequence([0.9, 0.8], plan, 2)
        fit = congruency.extrapolate_ttp(stages, plan, 2)
        res = congruency.congruency_residual(plan, [0.9, 0.8], 2, fit.k)
        return plan, stages, fit, res

    (plan, stages, fit, res), dt = timed(go)
    ok = (
        plan.square_sizes == (3, 2)
        and plan.unit_count == 2
        and [s.N for s in stages] == [4, 7]
        and abs(stages[0].p - 0.82) <= 1e-12
        and abs(stages[1].p - 0.74) <= 1e-12
        and abs(fit.k + 0.026667) <= 1e-6
        and abs(fit.ttp - 0.9) <= 1e-6
        and abs(res[2]) <= 1e-9
    )
    detail = f"k = {fit.k:.6f}, b = {fit.b:.6f}, ttp = {fit.ttp:.6f}, residual = {res[2]:.1e}"
    return verdict(4, "splitting chain", ok, detail, dt, 1)


def criterion_5():
    battery, dt = small_world_battery()
    curve = [mean(battery[p], "nttp") for p in SW_GRID]
    rho = spearmanr(SW_GRID, curve)[0]
    rho_all = spearmanr([p for p in SW_GRID for _ in SEEDS], [r.nttp for p in SW_GRID for r in battery[p]])[0]
    ok = curve[0] >= 0.9 and curve[-1] <= 0.1 and rho <= -0.9
    detail = f"NTTP by p = {[round(c, 3) for c in curve]}, rho = {rho:.3f} (per corpus {rho_all:.3f})"
    return verdict(5, "small-world sweep", ok, detail, dt, 15 * 60)


def criterion_6():
    battery, dt = tsbm_battery()
    diag = [mean(battery[(b, b)], "ttp") for b in TSBM_DIAG]
    fixed = [(mean(battery[(b, TSBM_FIXED_GAMMA)], "ttp"), mean(battery[(b, TSBM_FIXED_GAMMA)], "tep")) for b in TSBM_DIAG]
    ttp_var = max(t for t, _ in fixed) - min(t for t, _ in fixed)
    tep_var = max(t for _, t in fixed) - min(t for _, t in fixed)
    ok = all(a <= b for a, b in zip(diag, diag[1:])) and tep_var < ttp_var
    detail = (f"diagonal TTP = {[round(x, 3) for x in diag]}; at gamma={TSBM_FIXED_GAMMA} "
              f"TTP range {ttp_var:.3f} vs TeP range {tep_var:.3f}")
    return verdict(6, "TSBM trend", ok, detail, dt, 30 * 60)


def _sw_half():
    return corpus.filter_matrix(synth.gen_small_world(synth.SmallWorldParams(50, 0.5, 300, 0)))


def criterion_7():
    def go():
        f = _sw_half()
        seeds = np.random.SeedSequence(7).generate_state(20)
        return [measures.ttp(corpus.permute_rows(f, int(s))).ttp for s in seeds]

    vals, dt = timed(go)
    spread = max(vals) - min(vals)
    return verdict(7, "row-order robustness", spread < 0.02, f"max - min over 20 orders = {spread:.4f}", dt, 10 * 60)


def criterion_8():
    def go():
        return measures.ttp_baseline(_sw_half(), 80, 8)[1]

    vals, dt = timed(go)
    diff = abs(vals[:40].mean() - vals.mean())
    return verdict(8, "baseline convergence", diff < 0.01, f"|mean40 - mean80| = {diff:.5f}", dt, 10 * 60)


def criterion_9():
    (sw, t1), (ts, t2) = small_world_battery(), tsbm_battery()
    corpora = [r for rs in sw.values() for r in rs] + [r for rs in ts.values() for r in rs]
    gaps = [r.markov - r.ttp for r in corpora]
    worst = max(gaps)
    ok = worst <= 0.05
    detail = f"{len(corpora)} corpora, max(accuracy - TTP) = {worst:.4f}"
    return verdict(9, "bound dominance", ok, detail, t1 + t2, 45 * 60)


def criterion_10():
    def go():
        f = corpus.filter_matrix(synth.gen_small_world(synth.SmallWorldParams(50, 0.2, 300, 0)))
        out = []
        for frac in (0.0, 0.1, 0.3):
            x = corpus.drop_links(f, frac, 10)
            out.append(measures.normalize(measures.ttp(x).ttp, measures.ttp_baseline(x, BASELINE_RUNS, 11)[0]))
        return out

    vals, dt = timed(go)
    ok = all(b <= a + 0.05 for a, b in zip(vals, vals[1:]))
    return verdict(10, "missing-data degradation", ok, f"NTTP at drop 0/0.1/0.3 = {[round(v, 3) for v in vals]}", dt, 10 * 60)


def criterion_11(workdir: Path):
    def go():
        workdir.mkdir(parents=True, exist_ok=True)
        events = workdir / "events.txt"
        events.write_text("0 1 2\n5 1 2\n12 2 3\n3 3 1\n")
        m = workdir / "sw.txt"
        cli.main(["synth", "small-world", "-o", str(m), "--param", "n_nodes=20", "--param", "rewire_p=0.4",
                  "--param", "T=60", "--seed", "3"])
        commands = [
            ["ingest", str(events), "--bin", "4"],
            ["filter", str(m)],
            ["perturb", str(m), "--shuffle", "rows", "--drop-fraction", "0.2", "--permute-rows", "--seed", "3"],
            ["slice", str(m), "--rows", "0:50%", "--cols", "10:"],
            ["synth", "long-range", "--param", "rows=16", "--param", "cols=32", "--seed", "3"],
            ["profile", str(m), "--baseline-runs", "5", "--row-orders", "3", "--hamming-pairs", "100", "--seed", "3"],
            ["markov", str(m), "--seed", "3"],
            ["sweep", "tsbm", "--grid", "beta+gamma=0,1", "--param", "n_nodes=40", "--param", "T=40",
             "--seeds", "2", "--baseline-runs", "2", "--seed", "3"],
        ]
        bad = []
        for i, cmd in enumerate(commands):
            outs = [workdir / f"{cmd[0]}_{i}_{k}.out" for k in range(2)]
            codes = [cli.main(cmd + ["-o", str(o)]) for o in outs]
            if codes != [0, 0] or outs[0].read_bytes() != outs[1].read_bytes():
                bad.append(cmd[0])
        return len(commands), bad

    (n, bad), dt = timed(go)
    detail = f"{n} commands rerun, differing: {bad or 'none'}"
    return verdict(11, "CLI determinism", not bad, detail, dt, 60)


# --- pytest entry points ------------------------------------------------------------


def _check(result):
    ok, line = result
    assert ok, line


def test_criterion_1():
    _check(criterion_1())


def test_criterion_2():
    _check(criterion_2())


def test_criterion_3():
    _check(criterion_3())


def test_criterion_4():
    _check(criterion_4())


@pytest.mark.slow
def test_criterion_5():
    _check(criterion_5())


@pytest.mark.slow
def test_criterion_6():
    _check(criterion_6())


def test_criterion_7():
    _check(criterion_7())


def test_criterion_8():
    _check(criterion_8())


@pytest.mark.slow
def test_criterion_9():
    _check(criterion_9())


def test_criterion_10():
    _check(criterion_10())


def test_criterion_11(tmp_path):
    _check(criterion_11(tmp_path))


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        checks = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                  criterion_7, criterion_8, criterion_9, criterion_10, lambda: criterion_11(Path(tmp))]
        results = []
        for check in checks:
            ok, line = check()
            results.append(ok)
            print(line, flush=True)
    sys.exit(0 if all(results) else 1)
