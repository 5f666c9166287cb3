"""Acceptance suite: the package-level exit criteria, one test per criterion.

Each test prints a single PASS line with the measured quantities; pytest's
report carries the FAIL case. Criteria 7 and 8 drive the full desk-scale
sweeps (100 samples per point) through the same runner the CLI uses and are
the long poles of the suite; their results are shared with criterion 9 via
module-scoped fixtures.
"""

import math
import time

import numpy as np
import pytest

import oracles
from rydis import bounds
from rydis.cli import ExperimentConfig, run_fig3, run_fig4
from rydis.dynamics import evolve_full
from rydis.graph import (
    derive_seed,
    enumerate_independent_sets,
    erdos_renyi,
    exact_mis,
    fig2a_graph,
    greedy_mis,
)
from rydis.hilbert import AnnealParams, apply_h0, builtin_schedules
from rydis.median import build_median_graph, p2_perturbative_oracle, p2_short_time, walk_evolve, walk_p2_curve

MASTER_SEED = 20260809

# pinned lower bound for the size-2 success probability across the fig3 sweep;
# "bounded below by a positive constant" with generous slack under the
# observed ~0.2 floor
P2_LOWER_BOUND = 0.05

QUANTUM_VS_GREEDY_SLACK = 0.05
TV_TOLERANCE = 1e-3
SLOPE_TOLERANCE = 0.05
ORACLE_RATIO_BAND = (0.98, 1.02)
NORM_DRIFT_LIMIT = 1e-9


def _report(num: int, detail: str) -> None:
    print(f"\nACCEPTANCE {num:02d} PASS: {detail}")


@pytest.fixture(scope="module")
def fig4_results(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig4")
    cfg = ExperimentConfig(
        experiment="fig4",
        n_list=tuple(range(4, 13)),
        p=0.8,
        samples=100,
        t_rule="100",
        omega0_rule="n**2",
        schedule="fig4",
        master_seed=MASTER_SEED,
        tolerance=1e-4,
        output=str(out / "rows.csv"),
        aggregate_output=str(out / "agg.csv"),
    )
    t0 = time.perf_counter()
    rows, aggs = run_fig4(cfg)
    return rows, aggs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def fig3_results(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig3")
    cfg = ExperimentConfig(
        experiment="fig3",
        n_list=tuple(range(6, 17)),
        p=0.5,
        samples=100,
        t_rule="20/n",
        omega0_rule="n**2",
        schedule="fig3",
        master_seed=MASTER_SEED,
        tolerance=1e-4,
        output=str(out / "rows.csv"),
        aggregate_output=str(out / "agg.csv"),
    )
    t0 = time.perf_counter()
    rows, aggs = run_fig3(cfg)
    return rows, aggs, time.perf_counter() - t0


def walk_suite():
    """Ten seeded walks over n in {6, 8, 10}, p = 0.5."""
    plan = [(6, 0), (6, 1), (6, 2), (8, 0), (8, 1), (8, 2), (10, 0), (10, 1), (10, 2), (10, 3)]
    for n, k in plan:
        yield n, erdos_renyi(n, 0.5, derive_seed(4242, n, k))


def test_criterion_01_fig2a_golden():
    t0 = time.perf_counter()
    g = fig2a_graph()
    sets = enumerate_independent_sets(g)
    mg = build_median_graph(g)
    mis = exact_mis(g)
    elapsed = time.perf_counter() - t0
    assert len(sets) == 11
    assert len(mg.adjacency) == 16
    assert mis == 0b10101 and mis.bit_count() == 3
    assert elapsed < 1.0
    _report(1, f"11 independent sets, 16 median edges, MIS {{x1,x3,x5}} in {elapsed:.3f}s")


def test_criterion_02_leakage_bound_soundness():
    sched = builtin_schedules("fig3")
    t_total = 2.0
    checked = 0
    worst = 0.0
    for n in (4, 6, 8, 10):
        omega0 = 25.0 * math.pi * n  # integer interval count L = 25 n
        bp = bounds.constants_for_schedule(sched, t_total, omega0, n)
        report = bounds.leakage_upper_bound(bp, sched)
        assert bp.l_is_integer
        assert report.convergence_ok
        assert report.certified
        for k in range(6):
            g = erdos_renyi(n, 0.5, derive_seed(1234, n, k))
            res = evolve_full(g, AnnealParams(t_total, omega0, sched), 1.0, 1e-8)
            leak_amp = math.sqrt(max(res.leakage, 0.0))
            assert leak_amp <= report.truncated_bound, (n, k, leak_amp, report.truncated_bound)
            worst = max(worst, leak_amp / report.truncated_bound)
            checked += 1
    assert checked == 24
    _report(2, f"{checked} instances, zero violations, worst sqrt-leak/bound = {worst:.3f}")


def test_criterion_03_blockade_suppression_trend():
    sched = builtin_schedules("fig4")
    instances = 20
    suppressed = 0
    for k in range(instances):
        g = erdos_renyi(8, 0.8, derive_seed(77, 8, k))
        leak = {}
        for omega0 in (64.0, 256.0):
            leak[omega0] = evolve_full(g, AnnealParams(100.0, omega0, sched), 1.0, 1e-6).leakage
        suppressed += leak[64.0] > leak[256.0]
    assert suppressed >= 0.9 * instances, f"only {suppressed}/{instances} suppressed"
    _report(3, f"leakage at omega0=n^2 exceeds omega0=4n^2 on {suppressed}/{instances} instances")


def test_criterion_04_quartic_short_time_law():
    slopes = []
    for n, g in walk_suite():
        t_total = 20.0 / n
        mg = build_median_graph(g)
        s_vals = np.geomspace(1e-3, 1e-2, 8) / t_total
        p2 = walk_p2_curve(mg, 1.0, t_total, s_vals)
        assert np.all(p2 > 0)
        slope = float(np.polyfit(np.log(s_vals), np.log(p2), 1)[0])
        assert abs(slope - 4.0) <= SLOPE_TOLERANCE, (n, slope)
        slopes.append(slope)
    _report(4, f"10 walks, log-log slopes in [{min(slopes):.4f}, {max(slopes):.4f}]")


def test_criterion_05_perturbative_oracle_agreement():
    rows = []
    for n, g in walk_suite():
        t_total = 20.0 / n
        mg = build_median_graph(g)
        s_min = 1e-3 / t_total
        walk_p2 = float(walk_p2_curve(mg, 1.0, t_total, np.array([s_min]))[0])
        oracle = p2_perturbative_oracle(mg, 1.0, t_total, s_min)
        closed_form = p2_short_time(n, g.m, 1.0, t_total, s_min)
        ratio = oracle / walk_p2
        assert ORACLE_RATIO_BAND[0] <= ratio <= ORACLE_RATIO_BAND[1], (n, ratio)
        rows.append((n, oracle, walk_p2, closed_form, ratio))
    # closed form emitted side by side, deliberately not asserted
    for n, oracle, walk_p2, closed_form, ratio in rows:
        print(
            f"  n={n:2d} oracle={oracle:.6e} walk={walk_p2:.6e} "
            f"eq5_closed_form={closed_form:.6e} ratio={ratio:.4f}"
        )
    _report(5, f"oracle/walk ratios within [{min(r[4] for r in rows):.4f}, {max(r[4] for r in rows):.4f}]")


def test_criterion_06_projection_equivalence():
    plan = [(4, 0), (4, 1), (4, 2), (5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (6, 2), (6, 3)]
    sched = builtin_schedules("fig3")
    worst = 0.0
    for n, k in plan:
        g = erdos_renyi(n, 0.5, derive_seed(99, n, k))
        t_total = 20.0 / n
        omega0 = 100.0 * n * n
        full = evolve_full(g, AnnealParams(t_total, omega0, sched), 1.0, 1e-8)
        mg = build_median_graph(g)
        walk = walk_evolve(mg, 1.0, 0.0, t_total, 1.0)
        full_probs = np.abs(full.final_state[list(mg.nodes)]) ** 2
        walk_probs = np.abs(walk.state) ** 2
        tv = 0.5 * (float(np.sum(np.abs(full_probs - walk_probs))) + full.leakage)
        assert tv <= TV_TOLERANCE, (n, k, tv)
        worst = max(worst, tv)
    _report(6, f"10 instances at omega0=100n^2, worst total-variation distance {worst:.2e}")


def test_criterion_07_fig4_qualitative_reproduction(fig4_results):
    rows, aggs, elapsed = fig4_results
    ok_rows = [r for r in rows if r["status"] == "ok"]
    assert len(ok_rows) == 900  # 9 sizes x 100 samples, no guard trips
    for row in ok_rows:
        assert row["expected_is_size"] <= row["mis_size"] + 1e-9
    margins = []
    for agg in aggs:
        assert agg["samples"] == 100
        margin = agg["expected_is_size_mean"] - (agg["greedy_size_mean"] - QUANTUM_VS_GREEDY_SLACK)
        assert margin >= 0.0, (agg["n"], agg["expected_is_size_mean"], agg["greedy_size_mean"])
        margins.append((agg["n"], agg["expected_is_size_mean"], agg["greedy_size_mean"], agg["mis_size_mean"]))
    for n, q, c, m in margins:
        print(f"  n={n:2d} quantum={q:.3f} greedy={c:.3f} mis={m:.3f}")
    _report(7, f"900 instances, quantum curve >= greedy - {QUANTUM_VS_GREEDY_SLACK} at every n ({elapsed:.0f}s)")


def test_criterion_08_fig3_qualitative_reproduction(fig3_results):
    rows, aggs, elapsed = fig3_results
    assert len(rows) == 11 * 100
    floor = min(agg["p2_sim_mean"] for agg in aggs)
    for agg in aggs:
        assert agg["p2_sim_mean"] >= P2_LOWER_BOUND, (agg["n"], agg["p2_sim_mean"])
        print(
            f"  n={agg['n']:2d} p2_sim={agg['p2_sim_mean']:.4f} "
            f"eq6={agg['p2_eq6_mean']:.4g} eq5={agg['p2_eq5_mean']:.4g} "
            f"order(sim>=eq6)={agg.get('order_sim_ge_eq6')}"
        )
    _report(8, f"per-n mean p2 floor {floor:.4f} >= {P2_LOWER_BOUND} across n=6..16 ({elapsed:.0f}s)")


def test_criterion_09_unitarity_and_determinism(fig4_results, fig3_results, tmp_path):
    fig4_rows = fig4_results[0]
    fig3_rows = fig3_results[0]
    drifts = [r["norm_drift"] for r in fig4_rows if "norm_drift" in r]
    drifts += [r["norm_drift_full"] for r in fig3_rows if "norm_drift_full" in r]
    assert drifts and max(drifts) <= NORM_DRIFT_LIMIT
    # byte-identical reruns through the same pipeline
    rerun_specs = [
        (run_fig4, ExperimentConfig(
            experiment="fig4", n_list=(6,), p=0.8, samples=5, t_rule="100",
            omega0_rule="n**2", schedule="fig4", master_seed=MASTER_SEED, tolerance=1e-4,
            output=str(tmp_path / "f4_rows.csv"), aggregate_output=str(tmp_path / "f4_agg.csv"),
        )),
        (run_fig3, ExperimentConfig(
            experiment="fig3", n_list=(8,), p=0.5, samples=5, t_rule="20/n",
            omega0_rule="n**2", schedule="fig3", master_seed=MASTER_SEED, tolerance=1e-4,
            output=str(tmp_path / "f3_rows.csv"), aggregate_output=str(tmp_path / "f3_agg.csv"),
        )),
    ]
    from pathlib import Path

    for runner, cfg in rerun_specs:
        runner(cfg)
        first = (Path(cfg.output).read_bytes(), Path(cfg.aggregate_output).read_bytes())
        runner(cfg)
        second = (Path(cfg.output).read_bytes(), Path(cfg.aggregate_output).read_bytes())
        assert first == second
    _report(9, f"max norm drift {max(drifts):.2e} over {len(drifts)} evolutions; reruns byte-identical")


def test_criterion_10_small_matrix_oracles():
    # dense Hamiltonian oracle
    worst = 0.0
    for n in range(2, 7):
        g = erdos_renyi(n, 0.5, 7 * n + 1)
        om, de, w0, t_total = 0.9, -0.4, 6.0, 2.5
        params = AnnealParams(
            t_total=t_total,
            omega0=w0,
            schedule=builtin_schedules("constant", omega=om, delta=de),
        )
        dense = oracles.dense_h0(n, g.edges, om, de, w0, t_total)
        rng = np.random.default_rng(n)
        for _ in range(4):
            x = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            ref = dense @ x
            err = float(np.max(np.abs(apply_h0(g, params, 0.4, x) - ref)))
            scale = max(1.0, float(np.max(np.abs(ref))))
            assert err <= 1e-12 * scale
            worst = max(worst, err / scale)
    # spectral radius bound on 200 random sparse Hermitian matrices
    rng = np.random.default_rng(2024)
    for _ in range(200):
        dim = int(rng.integers(4, 129))
        per_row = int(rng.integers(1, 7))
        h = np.zeros((dim, dim), dtype=complex)
        for i in range(dim):
            for j in rng.choice(dim, size=per_row, replace=False):
                val = (rng.random() * 2 - 1) + 1j * (rng.random() * 2 - 1)
                h[i, j] = val
                h[j, i] = np.conj(val)
        w = float(np.max(np.abs(h)))
        m = int(np.max(np.sum(np.abs(h) > 0, axis=1)))
        rho = float(np.max(np.abs(np.linalg.eigvalsh(h))))
        assert rho <= bounds.spectral_radius_bound(m, w) + 1e-12
    _report(10, f"dense-matrix oracle max scaled error {worst:.2e}; 200/200 spectral bounds hold")
