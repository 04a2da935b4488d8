"""Acceptance checks: one PASS/FAIL line per headline criterion.

Each test prints its verdict (bypassing output capture, so the lines appear
in ``pytest -v`` logs), including measured quantities and the wall-clock
time against the criterion's runtime limit, then asserts.
"""
import itertools
import time

import numpy as np
import pytest
from scipy import stats as sps

from covo import io, kernels
from covo.benchmarks import FUNCTION_IDS, evaluate, make_objective
from covo.cli import main
from covo.core import init_population, preset, run, should_terminate, step
from covo.ecg import EcgParams, MixingModel, contaminate, denoise_run, fitness_of_W, synth_ecg
from covo.experiment import Cell, run_cell
from covo.rng import RngState
from covo.stats import friedman, t_test, wilcoxon_signed_rank

from .reference import REFERENCE
from .test_core import bounded_spec


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        verdict = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[ACCEPTANCE] {verdict} {name}: {detail}; {elapsed:.2f}s (limit {limit:g}s)")
        return ok

    return emit


def test_benchmark_oracle_equivalence(report):
    t0 = time.perf_counter()
    worst = 0.0
    for k, fid in enumerate(FUNCTION_IDS):
        spec = make_objective(fid, 30)
        X = np.random.default_rng(1000 + k).uniform(spec.lower, spec.upper, (100, 30))
        got = spec.batch(X, None)  # no generator: F7 noise is zero
        want = np.array([REFERENCE[fid](list(x)) for x in X])
        rel = np.abs(got - want) / np.maximum(np.abs(want), 1e-300)
        worst = max(worst, float(rel.max()))
    elapsed = time.perf_counter() - t0
    ok = report("benchmark oracle equivalence", worst <= 1e-9,
                f"13 functions x 100 points, max relative error {worst:.2e} (tol 1e-9, backend {kernels.BACKEND})",
                elapsed, 5)
    assert ok


def test_known_optima(report):
    t0 = time.perf_counter()
    errs = {}
    for fid in FUNCTION_IDS:
        spec = make_objective(fid, 30)
        errs[fid] = abs(evaluate(spec, spec.x_star) - spec.f_star)
    elapsed = time.perf_counter() - t0
    ok = all(e <= (1e-2 if fid == "F8" else 1e-6) for fid, e in errs.items())
    worst = max((e, f) for f, e in errs.items() if f != "F8")
    ok = report("known optima", ok,
                f"max |f(x*)-f*| {worst[0]:.2e} ({worst[1]}), F8 {errs['F8']:.2e} (tol 1e-6, F8 1e-2)",
                elapsed, 1)
    assert ok


def _instrumented_run(fid, seed, params):
    """The ``run`` loop, with every evaluation and the death count observed."""
    seen = []
    spec = bounded_spec(fid, 10, seen)
    rng = RngState(seed)
    state = init_population(params, spec, rng)
    deaths = [len(state.deaths)]
    best = [state.evaluator.best_error]
    while not should_terminate(state, params)[0]:
        step(state, params, spec, rng)
        deaths.append(len(state.deaths))
        best.append(state.evaluator.best_error)
    return spec, seen, deaths, best, state.evaluator.evals


def test_covo_invariants(report):
    t0 = time.perf_counter()
    params = preset("tableII", max_iter=20_000, max_evals=20_000)
    failures = []
    runs = 0
    for fid, seed in itertools.product(("F1", "F9", "F11"), range(20)):
        spec, seen, deaths, best, evals = _instrumented_run(fid, seed, params)
        X = np.vstack(seen)
        if X.shape[0] != evals or evals > 20_000:
            failures.append(f"{fid}/{seed}: evaluation count")
        if np.any(X < spec.lower) or np.any(X > spec.upper):
            failures.append(f"{fid}/{seed}: point out of bounds")
        if any(b > a for a, b in zip(best, best[1:])):
            failures.append(f"{fid}/{seed}: trace increased")
        if any(b < a for a, b in zip(deaths, deaths[1:])):
            failures.append(f"{fid}/{seed}: death count decreased")
        res_a = run(make_objective(fid, 10), params, seed)
        res_b = run(make_objective(fid, 10), params, seed)
        if [p.best_error for p in res_a.trace] != best:
            failures.append(f"{fid}/{seed}: run differs from instrumented loop")
        csv_a = io.trace_rows(res_a, f"{fid}:covo:{seed}", fid)
        csv_b = io.trace_rows(res_b, f"{fid}:covo:{seed}", fid)
        if csv_a != csv_b:
            failures.append(f"{fid}/{seed}: trace not reproducible")
        runs += 1
    elapsed = time.perf_counter() - t0
    ok = report("COVO invariants", not failures,
                f"{runs} runs, {len(failures)} violations" + (f" (first: {failures[0]})" if failures else ""),
                elapsed, 60)
    assert ok


def test_optimization_efficacy(report):
    t0 = time.perf_counter()
    budget = 50_000
    params = preset("tableII", max_iter=budget, max_evals=budget)
    covo, rs = [], []
    for seed in range(21):
        covo.append(run_cell(Cell("F1", "covo", seed), 10, params, budget).best_error)
        rs.append(run_cell(Cell("F1", "random_search", seed), 10, params, budget).best_error)
    w = wilcoxon_signed_rank(covo, rs, alternative="less")
    elapsed = time.perf_counter() - t0
    med_c, med_r = float(np.median(covo)), float(np.median(rs))
    ok = report("optimization efficacy", med_c < med_r and w.p_value < 0.05,
                f"F1 D=10 budget 5e4, median COVO {med_c:.3e} vs random search {med_r:.3e}, "
                f"one-sided Wilcoxon p={w.p_value:.3e}", elapsed, 300)
    assert ok


def test_opposition_screening(report):
    t0 = time.perf_counter()
    spec = make_objective("F1", 10)
    params = preset("tableII")
    bad = 0
    for seed in range(100):
        raw = RngState(seed).uniform(params.L, params.U, (params.N, 10))
        raw_elite = spec.batch(raw, None).min()
        state = init_population(params, spec, RngState(seed))
        if min(ind.fitness for ind in state.infected) > raw_elite:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = report("opposition screening", bad == 0, f"100 trials of F1 D=10, {bad} with a worse elite", elapsed, 10)
    assert ok


def _enumerated_p(a, b):
    d = np.asarray(a, float) - np.asarray(b, float)
    d = d[d != 0]
    if d.size == 0:
        return 1.0
    r = sps.rankdata(np.abs(d))
    w = r[d > 0].sum()
    sums = np.array([np.dot(r, s) for s in itertools.product((0, 1), repeat=len(r))])
    return min(1.0, 2 * min(np.mean(sums <= w + 1e-9), np.mean(sums >= w - 1e-9)))


def test_statistics_oracle(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 11))
        a = rng.integers(0, 8, n).astype(float)
        b = rng.integers(0, 8, n).astype(float)
        worst = max(worst, abs(wilcoxon_signed_rank(a, b).p_value - _enumerated_p(a, b)))
    constant_ok = all(
        (friedman(np.full((rows, cols), v)).statistic, friedman(np.full((rows, cols), v)).p_value) == (0.0, 1.0)
        for rows, cols, v in ((2, 2, 0.0), (5, 3, 1.5), (21, 3, -7.0), (13, 4, 1e-12))
    )
    ident_ok = all(t_test(x, x).p_value == 1.0 for x in (rng.normal(size=n) for n in (2, 5, 21)))
    elapsed = time.perf_counter() - t0
    ok = report("statistics oracle", worst <= 1e-12 and constant_ok and ident_ok,
                f"Wilcoxon max |p - enumeration| {worst:.1e} over 100 sets, Friedman constant "
                f"{'ok' if constant_ok else 'wrong'}, t-test identical {'ok' if ident_ok else 'wrong'}",
                elapsed, 10)
    assert ok


def test_denoise_efficacy(report):
    t0 = time.perf_counter()
    model = MixingModel()
    params = preset("tableII", max_iter=10**6, max_evals=50_000)
    wins, worst_inverse = 0, 0.0
    for seed in range(20):
        rep = denoise_run(EcgParams(), model, params, seed)
        wins += rep.mse_o_r < rep.mse_o_c
        rng = RngState(seed)
        S = synth_ecg(EcgParams(), rng)
        Y, _ = contaminate(S, model, rng)
        np.testing.assert_array_equal(Y[0], rep.contaminated)
        worst_inverse = max(worst_inverse, fitness_of_W(np.linalg.inv(model.matrix).ravel(), Y, S))
    elapsed = time.perf_counter() - t0
    ok = report("denoise efficacy", wins >= 16 and worst_inverse <= 1e-12,
                f"MSE_o_r < MSE_o_c in {wins}/20 seeds (need 16), max fitness at inverse mixing {worst_inverse:.1e}",
                elapsed, 180)
    assert ok


def test_harness_round_trip(report, tmp_path):
    t0 = time.perf_counter()
    codes = [
        main(["bench", "--budget", "5000", "--out", str(tmp_path / "a")]),
        main(["stats", str(tmp_path / "a" / "trace.csv"), "--out", str(tmp_path / "stats.csv")]),
        main(["plot", str(tmp_path / "a" / "trace.csv"), "--out", str(tmp_path / "conv.svg")]),
    ]
    elapsed = time.perf_counter() - t0
    t1 = time.perf_counter()
    codes.append(main(["bench", "--budget", "5000", "--out", str(tmp_path / "b")]))
    rerun = time.perf_counter() - t1
    same = (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()
    runs = len({r.run_id for r in io.read_trace(tmp_path / "a" / "trace.csv")})
    n_stats = len(io.read_stats(tmp_path / "stats.csv"))
    ok = report("harness round trip", codes == [0, 0, 0, 0] and same and runs == 13 * 3 * 21,
                f"exit codes {codes}, {runs} runs, {n_stats} test rows, rerun byte-identical {same} "
                f"(rerun {rerun:.1f}s)", elapsed, 120)
    assert ok
