"""Experiment orchestration and the ``rydis`` command line.

Subcommands
-----------
gen-graph     sample one seeded G(n, p) instance and write the text format
fig4          anneal sweep: expected IS size vs greedy vs exact MIS
fig3          size-2 walk sweep: simulated p2 vs the two closed-form curves
bound-report  leakage-bound constants over an (n, omega0, T) sweep
single        one instance end to end, JSON report

Determinism contract: all randomness flows from ``master_seed`` through
``derive_seed(master_seed, n, k)``; rows are emitted sorted by (n, k); floats
are printed with ``repr``. Re-running an identical config reproduces every
output byte for byte (enable --timing to add a wall-clock column, which
breaks that promise and is therefore off by default).
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import sys
import time
from dataclasses import dataclass, fields
from multiprocessing import Pool

import numpy as np

from . import bounds, dynamics, median
from .errors import CapacityError, RydisError
from .graph import (
    Graph,
    derive_seed,
    erdos_renyi,
    exact_mis,
    greedy_mis,
    mix64,
    read_graph,
    write_graph,
)
from .hilbert import AnnealParams, Schedule, builtin_schedules, schedule_from_table

CSV_SCHEMA = "rydis-csv v1"

_MC_SALT = 0x6D635F73616C74  # distinguishes the measurement-sampling stream

FIG4_ROW_COLUMNS = [
    "experiment", "n", "k", "seed", "m_edges", "p_is", "leakage",
    "expected_is_size", "mc_is_size", "greedy_size", "mis_size",
    "leak_bound", "bound_convergence_ok", "bound_certified",
    "steps", "norm_drift", "status",
]
FIG4_AGG_COLUMNS = [
    "n", "samples", "p_is_mean", "p_is_stderr",
    "expected_is_size_mean", "expected_is_size_stderr",
    "greedy_size_mean", "greedy_size_stderr",
    "mis_size_mean", "mis_size_stderr",
]
FIG3_ROW_COLUMNS = [
    "experiment", "n", "k", "seed", "m_edges", "is2_count",
    "p2_full", "p2_walk", "p2_sim", "p2_oracle", "p2_eq5", "p2_eq6",
    "leak_bound", "bound_convergence_ok", "bound_certified",
    "steps_full", "norm_drift_full", "status",
]
FIG3_AGG_COLUMNS = [
    "n", "samples", "full_samples",
    "p2_sim_mean", "p2_sim_stderr", "p2_full_mean", "p2_full_stderr",
    "p2_walk_mean", "p2_walk_stderr", "p2_oracle_mean", "p2_oracle_stderr",
    "p2_eq5_mean", "p2_eq5_stderr", "p2_eq6_mean", "p2_eq6_stderr",
    "order_sim_ge_eq6", "order_eq6_ge_eq5",
]
BOUND_COLUMNS = [
    "n", "tau", "a1", "a2", "a3", "a4", "leading", "second", "bound",
    "convergence_ok", "certified", "approx_ratio",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: which experiment, the instance family, and the physics rules.

    ``t_rule`` and ``omega0_rule`` are arithmetic expressions in ``n``
    (e.g. "100", "20/n", "n**2"). ``schedule`` is a name spec: fig4, fig3,
    constant:OMEGA,DELTA or table:PATH.
    """

    experiment: str
    n_list: tuple[int, ...]
    p: float = 0.8
    samples: int = 100
    t_rule: str = "100"
    omega0_rule: str = "n**2"
    schedule: str = "fig4"
    master_seed: int = 1
    tolerance: float = 1e-4
    kappa: float = 20.0
    s_end: float = 1.0
    full_space_max: int = 14
    walk_max_nodes: int = 1 << 20
    workers: int = 1
    timing: bool = False
    output: str = ""
    aggregate_output: str = ""

    def __post_init__(self):
        if not self.n_list:
            raise ValueError("n_list must not be empty")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


# ---------------------------------------------------------------------------
# rule / schedule / list parsing
# ---------------------------------------------------------------------------

_ALLOWED_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.FloorDiv: lambda a, b: a // b,
    ast.Mod: lambda a, b: a % b,
    ast.Pow: lambda a, b: a**b,
}


def eval_rule(expr: str, n: int) -> float:
    """Evaluate an arithmetic rule in the single variable ``n`` (plus ``pi``)."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id == "n":
                return float(n)
            if node.id == "pi":
                return math.pi
            raise ValueError(f"unknown name {node.id!r} in rule {expr!r}")
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            return _ALLOWED_BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ValueError(f"unsupported syntax in rule {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse rule {expr!r}: {exc}") from None
    return walk(tree)


def parse_schedule(spec: str) -> Schedule:
    """Schedule from a name spec: fig4 | fig3 | constant:OMEGA,DELTA | table:PATH."""
    if spec in ("fig4", "fig3"):
        return builtin_schedules(spec)
    if spec.startswith("constant"):
        if ":" in spec:
            parts = spec.split(":", 1)[1].split(",")
            if len(parts) != 2:
                raise ValueError(f"constant schedule spec must be constant:OMEGA,DELTA, got {spec!r}")
            return builtin_schedules("constant", omega=float(parts[0]), delta=float(parts[1]))
        return builtin_schedules("constant")
    if spec.startswith("table:"):
        path = spec.split(":", 1)[1]
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 3:
            raise ValueError(f"schedule table {path} must have 3 columns (s, Omega, Delta)")
        sched = schedule_from_table(data[:, 0], data[:, 1], data[:, 2])
        sched.validate()
        return sched
    raise ValueError(f"unknown schedule spec {spec!r}")


def parse_n_list(spec: str) -> tuple[int, ...]:
    """Vertex-count list: '4,6,8' or range 'LO..HI' or 'LO..HI..STEP'."""
    spec = spec.strip()
    if ".." in spec:
        parts = spec.split("..")
        if len(parts) == 2:
            lo, hi, step = int(parts[0]), int(parts[1]), 1
        elif len(parts) == 3:
            lo, hi, step = int(parts[0]), int(parts[1]), int(parts[2])
        else:
            raise ValueError(f"bad n-list range {spec!r}")
        return tuple(range(lo, hi + 1, step))
    return tuple(int(tok) for tok in spec.split(",") if tok.strip())


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _config_echo(cfg: ExperimentConfig) -> str:
    # workers and output paths are execution details, not experiment identity
    pairs = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if f.name in ("output", "aggregate_output", "workers"):
            continue
        if isinstance(v, tuple):
            v = ",".join(str(x) for x in v)
        pairs.append(f"{f.name}={v}")
    return " ".join(pairs)


def _write_csv(path: str, comment: str, columns: list[str], rows: list[dict]) -> None:
    lines = [f"# {CSV_SCHEMA} {comment}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in columns))
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _mean_stderr(vals: list[float]) -> tuple[float | None, float | None]:
    k = len(vals)
    if k == 0:
        return None, None
    mean = math.fsum(vals) / k
    if k == 1:
        return mean, None
    var = math.fsum((v - mean) ** 2 for v in vals) / (k - 1)
    return mean, math.sqrt(var / k)


def _ensure_prob(x: float, what: str) -> float:
    if -1e-9 <= x <= 1.0 + 1e-9:
        return min(max(x, 0.0), 1.0)
    raise RuntimeError(f"invariant violation: {what}={x} outside [0, 1]")


# ---------------------------------------------------------------------------
# fig4: anneal sweep
# ---------------------------------------------------------------------------


def _sample_conditioned_size(cond: dict[int, float], seed: int) -> int:
    from .graph import SplitMix64

    u = SplitMix64(mix64(seed ^ _MC_SALT)).next_double()
    acc = 0.0
    last = 0
    for k in sorted(cond):
        acc += cond[k]
        last = k
        if u < acc:
            return k
    return last


def _bound_columns(sched, t_total: float, omega0: float, n: int) -> dict:
    bp = bounds.constants_for_schedule(sched, t_total, omega0, n)
    report = bounds.leakage_upper_bound(bp, sched)
    return {
        "leak_bound": report.truncated_bound,
        "bound_convergence_ok": report.convergence_ok,
        "bound_certified": report.certified,
    }


def _fig4_sample(task: tuple[ExperimentConfig, int, int]) -> dict:
    cfg, n, k = task
    seed = derive_seed(cfg.master_seed, n, k)
    g = erdos_renyi(n, cfg.p, seed)
    t0 = time.perf_counter()
    greedy_size = greedy_mis(g).bit_count()
    mis_size = exact_mis(g).bit_count()
    sched = parse_schedule(cfg.schedule)
    t_total = eval_rule(cfg.t_rule, n)
    omega0 = eval_rule(cfg.omega0_rule, n)
    row = {
        "experiment": cfg.experiment,
        "n": n,
        "k": k,
        "seed": seed,
        "m_edges": g.m,
        "greedy_size": greedy_size,
        "mis_size": mis_size,
        "status": "ok",
    }
    row.update(_bound_columns(sched, t_total, omega0, n))
    if n > cfg.full_space_max:
        row["status"] = "guard:full-space"
    else:
        params = AnnealParams(t_total=t_total, omega0=omega0, schedule=sched)
        res = dynamics.evolve_full(g, params, cfg.s_end, cfg.tolerance)
        row["p_is"] = _ensure_prob(res.p_is, "p_is")
        row["leakage"] = _ensure_prob(res.leakage, "leakage")
        expected = res.expected_size()
        if expected > mis_size + 1e-9:
            raise RuntimeError(f"invariant violation: expected size {expected} > MIS {mis_size}")
        row["expected_is_size"] = min(expected, float(mis_size))
        row["mc_is_size"] = _sample_conditioned_size(res.size_probs_conditioned, seed)
        row["steps"] = res.steps_taken
        row["norm_drift"] = res.norm_drift
    if cfg.timing:
        row["wall_time_s"] = time.perf_counter() - t0
    return row


def _run_tasks(cfg: ExperimentConfig, worker) -> list[dict]:
    tasks = [(cfg, n, k) for n in cfg.n_list for k in range(cfg.samples)]
    if cfg.workers > 1:
        with Pool(cfg.workers) as pool:
            rows = pool.map(worker, tasks, chunksize=1)
    else:
        rows = [worker(t) for t in tasks]
    rows.sort(key=lambda r: (r["n"], r["k"]))
    return rows


def run_fig4(cfg: ExperimentConfig) -> tuple[list[dict], list[dict]]:
    """Anneal sweep; returns (rows, per-n aggregates) and writes them as CSV."""
    rows = _run_tasks(cfg, _fig4_sample)
    aggregates = []
    for n in cfg.n_list:
        group = [r for r in rows if r["n"] == n]
        ok = [r for r in group if r["status"] == "ok"]
        agg: dict = {"n": n, "samples": len(ok)}
        # classical columns exist on every row, quantum ones only when not guarded
        for key, src in (
            ("p_is", ok),
            ("expected_is_size", ok),
            ("greedy_size", group),
            ("mis_size", group),
        ):
            mean, err = _mean_stderr([float(r[key]) for r in src if key in r])
            agg[f"{key}_mean"] = mean
            agg[f"{key}_stderr"] = err
        aggregates.append(agg)
    columns = FIG4_ROW_COLUMNS + (["wall_time_s"] if cfg.timing else [])
    if cfg.output:
        _write_csv(cfg.output, _config_echo(cfg), columns, rows)
    if cfg.aggregate_output:
        _write_csv(cfg.aggregate_output, _config_echo(cfg), FIG4_AGG_COLUMNS, aggregates)
    return rows, aggregates


# ---------------------------------------------------------------------------
# fig3: size-2 walk sweep
# ---------------------------------------------------------------------------


def _fig3_sample(task: tuple[ExperimentConfig, int, int]) -> dict:
    cfg, n, k = task
    seed = derive_seed(cfg.master_seed, n, k)
    g = erdos_renyi(n, cfg.p, seed)
    t0 = time.perf_counter()
    sched = parse_schedule(cfg.schedule)
    if sched.delta_max != 0.0 or sched.lipschitz_k != 0.0:
        raise ValueError("the size-2 walk experiment requires a constant-Omega, Delta=0 schedule")
    omega = float(sched.omega(0.0))
    t_total = eval_rule(cfg.t_rule, n)
    omega0 = eval_rule(cfg.omega0_rule, n)
    is2_count = n * (n - 1) // 2 - g.m
    row = {
        "experiment": cfg.experiment,
        "n": n,
        "k": k,
        "seed": seed,
        "m_edges": g.m,
        "is2_count": is2_count,
        "p2_eq5": median.p2_short_time(n, g.m, omega, t_total, cfg.kappa / n),
        "p2_eq6": median.p2_asymptotic_lower_bound(cfg.p / 2.0, omega, t_total, cfg.kappa),
        "status": "ok",
    }
    row.update(_bound_columns(sched, t_total, omega0, n))
    notes = []
    if n <= cfg.full_space_max:
        params = AnnealParams(t_total=t_total, omega0=omega0, schedule=sched)
        res = dynamics.evolve_full(g, params, cfg.s_end, cfg.tolerance)
        row["p2_full"] = _ensure_prob(res.size_probs.get(2, 0.0), "p2_full")
        row["steps_full"] = res.steps_taken
        row["norm_drift_full"] = res.norm_drift
    else:
        notes.append("guard:full-space")
    try:
        mg = median.build_median_graph(g, limit=cfg.walk_max_nodes)
        walk = median.walk_evolve(mg, omega, 0.0, t_total, cfg.s_end)
        row["p2_walk"] = _ensure_prob(walk.p2, "p2_walk")
        row["p2_oracle"] = median.p2_perturbative_oracle(mg, omega, t_total, cfg.s_end)
    except CapacityError:
        notes.append("guard:walk-nodes")
    if "p2_full" in row:
        row["p2_sim"] = row["p2_full"]
    elif "p2_walk" in row:
        row["p2_sim"] = row["p2_walk"]
    if notes:
        row["status"] = ";".join(notes)
    if cfg.timing:
        row["wall_time_s"] = time.perf_counter() - t0
    return row


def run_fig3(cfg: ExperimentConfig) -> tuple[list[dict], list[dict]]:
    """Size-2 walk sweep; simulated p2 next to both closed-form curves."""
    rows = _run_tasks(cfg, _fig3_sample)
    aggregates = []
    for n in cfg.n_list:
        group = [r for r in rows if r["n"] == n]
        agg: dict = {
            "n": n,
            "samples": len(group),
            "full_samples": sum(1 for r in group if "p2_full" in r),
        }
        for key in ("p2_sim", "p2_full", "p2_walk", "p2_oracle", "p2_eq5", "p2_eq6"):
            mean, err = _mean_stderr([float(r[key]) for r in group if key in r])
            agg[f"{key}_mean"] = mean
            agg[f"{key}_stderr"] = err
        if agg["p2_sim_mean"] is not None and agg["p2_eq6_mean"] is not None:
            agg["order_sim_ge_eq6"] = agg["p2_sim_mean"] >= agg["p2_eq6_mean"]
        if agg["p2_eq6_mean"] is not None and agg["p2_eq5_mean"] is not None:
            agg["order_eq6_ge_eq5"] = agg["p2_eq6_mean"] >= agg["p2_eq5_mean"]
        aggregates.append(agg)
    columns = FIG3_ROW_COLUMNS + (["wall_time_s"] if cfg.timing else [])
    if cfg.output:
        _write_csv(cfg.output, _config_echo(cfg), columns, rows)
    if cfg.aggregate_output:
        _write_csv(cfg.aggregate_output, _config_echo(cfg), FIG3_AGG_COLUMNS, aggregates)
    return rows, aggregates


# ---------------------------------------------------------------------------
# bound-report
# ---------------------------------------------------------------------------


def run_bound_report(cfg: ExperimentConfig) -> list[dict]:
    sched = parse_schedule(cfg.schedule)
    rows = []
    for n in cfg.n_list:
        t_total = eval_rule(cfg.t_rule, n)
        omega0 = eval_rule(cfg.omega0_rule, n)
        bp = bounds.constants_for_schedule(sched, t_total, omega0, n)
        report = bounds.leakage_upper_bound(bp, sched)
        rows.append(
            {
                "n": n,
                "tau": bp.tau,
                "a1": bp.a1,
                "a2": bp.a2,
                "a3": bp.a3,
                "a4": bp.a4,
                "leading": report.leading_term,
                "second": report.second_term,
                "bound": report.truncated_bound,
                "convergence_ok": report.convergence_ok,
                "certified": report.certified,
                "approx_ratio": bounds.approx_adiabatic_ratio(bp),
            }
        )
    if cfg.output:
        _write_csv(cfg.output, _config_echo(cfg), BOUND_COLUMNS, rows)
    return rows


# ---------------------------------------------------------------------------
# single-instance report
# ---------------------------------------------------------------------------


def run_single(
    g: Graph,
    schedule_spec: str,
    t_total: float,
    omega0: float,
    s_end: float = 1.0,
    tol: float = 1e-6,
    *,
    full_space_max: int = 14,
    walk_max_nodes: int = 1 << 20,
    include_state: bool = False,
) -> dict:
    """Everything about one instance: classical baselines, anneal, walk, bounds."""
    sched = parse_schedule(schedule_spec)
    out: dict = {
        "graph": {
            "n": g.n,
            "m_edges": g.m,
            "edges": [list(e) for e in g.edges],
            "greedy_size": greedy_mis(g).bit_count(),
        }
    }
    if g.n <= 40:
        out["graph"]["mis_size"] = exact_mis(g).bit_count()
    try:
        mg = median.build_median_graph(g, limit=walk_max_nodes)
        out["graph"]["is_count"] = mg.node_count
        omega_const = float(sched.omega(0.0))
        if sched.delta_max == 0.0 and sched.lipschitz_k == 0.0 and omega_const != 0.0:
            walk = median.walk_evolve(mg, omega_const, 0.0, t_total, s_end)
            out["walk"] = {
                "p2": walk.p2,
                "size_probs": {str(s): v for s, v in sorted(walk.size_probs.items())},
                "norm_drift": walk.norm_drift,
                "p2_oracle": median.p2_perturbative_oracle(mg, omega_const, t_total, s_end),
            }
        else:
            out["walk"] = {"skipped": "walk protocol requires a constant-Omega, Delta=0 schedule"}
    except CapacityError as exc:
        out["walk"] = {"skipped": str(exc)}
    if g.n <= full_space_max:
        params = AnnealParams(t_total=t_total, omega0=omega0, schedule=sched)
        res = dynamics.evolve_full(g, params, s_end, tol)
        out["evolution"] = res.to_jsonable(include_state=include_state)
        out["evolution"]["expected_is_size"] = res.expected_size()
    else:
        out["evolution"] = {"skipped": f"n={g.n} exceeds full-space guard {full_space_max}"}
    bp = bounds.constants_for_schedule(sched, t_total, omega0, g.n)
    report = bounds.leakage_upper_bound(bp, sched)
    out["bound"] = report.to_jsonable()
    out["bound"]["approx_adiabatic_ratio"] = bounds.approx_adiabatic_ratio(bp)
    out["params"] = {
        "schedule": schedule_spec,
        "t_total": t_total,
        "omega0": omega0,
        "s_end": s_end,
        "tol": tol,
    }
    return out


# ---------------------------------------------------------------------------
# argument parsing / entry point
# ---------------------------------------------------------------------------


_CONFIG_KEYS = {
    "n_list", "p", "samples", "t_rule", "omega0_rule", "schedule", "master_seed",
    "tol", "s_end", "kappa", "full_space_max", "walk_max_nodes", "workers",
    "timing", "output", "aggregate", "n", "seed", "t", "omega0",
}


def _load_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment; keys match CLI flag names."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {raw.rstrip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = val
    return out


def _add_sweep_args(
    sub: argparse.ArgumentParser,
    defaults: dict,
    p: float = 0.8,
    t_rule: str = "100",
    schedule: str = "fig4",
) -> None:
    sub.add_argument("--n-list", default=defaults.get("n_list"), required="n_list" not in defaults)
    sub.add_argument("--p", type=float, default=float(defaults.get("p", p)))
    sub.add_argument("--samples", type=int, default=int(defaults.get("samples", 100)))
    sub.add_argument("--t-rule", default=defaults.get("t_rule", t_rule))
    sub.add_argument("--omega0-rule", default=defaults.get("omega0_rule", "n**2"))
    sub.add_argument("--schedule", default=defaults.get("schedule", schedule))
    sub.add_argument("--master-seed", type=int, default=int(defaults.get("master_seed", 1)))
    sub.add_argument("--tol", type=float, default=float(defaults.get("tol", 1e-4)))
    sub.add_argument("--s-end", type=float, default=float(defaults.get("s_end", 1.0)))
    sub.add_argument("--kappa", type=float, default=float(defaults.get("kappa", 20.0)))
    sub.add_argument("--full-space-max", type=int, default=int(defaults.get("full_space_max", 14)))
    sub.add_argument("--walk-max-nodes", type=int, default=int(defaults.get("walk_max_nodes", 1 << 20)))
    sub.add_argument("--workers", type=int, default=int(defaults.get("workers", 1)))
    sub.add_argument("--timing", action="store_true", default=_truthy(defaults.get("timing", False)))
    sub.add_argument("--output", default=defaults.get("output", ""))
    sub.add_argument("--aggregate", dest="aggregate_output", default=defaults.get("aggregate", ""))


def _truthy(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def _cfg_from_args(experiment: str, args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=experiment,
        n_list=parse_n_list(args.n_list),
        p=args.p,
        samples=args.samples,
        t_rule=args.t_rule,
        omega0_rule=args.omega0_rule,
        schedule=args.schedule,
        master_seed=args.master_seed,
        tolerance=args.tol,
        kappa=args.kappa,
        s_end=args.s_end,
        full_space_max=args.full_space_max,
        walk_max_nodes=args.walk_max_nodes,
        workers=args.workers,
        timing=args.timing,
        output=args.output,
        aggregate_output=args.aggregate_output,
    )


def build_parser(file_defaults: dict | None = None) -> argparse.ArgumentParser:
    d = file_defaults or {}
    parser = argparse.ArgumentParser(prog="rydis", description=__doc__)
    parser.add_argument("--config", help="key = value defaults file; flags override it")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen-graph", help="sample one G(n, p) instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--output", required=True)

    fig4 = subs.add_parser("fig4", help="anneal sweep: expected IS size vs baselines")
    _add_sweep_args(fig4, d, p=0.8, t_rule="100", schedule="fig4")

    fig3 = subs.add_parser("fig3", help="size-2 walk sweep")
    _add_sweep_args(fig3, d, p=0.5, t_rule="20/n", schedule="fig3")

    bound = subs.add_parser("bound-report", help="leakage-bound constants over a sweep")
    _add_sweep_args(bound, d)

    single = subs.add_parser("single", help="one instance, JSON report")
    src = single.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph text file")
    src.add_argument("--n", type=int)
    single.add_argument("--p", type=float, default=float(d.get("p", 0.8)))
    single.add_argument("--seed", type=int, default=int(d.get("seed", 1)))
    single.add_argument("--schedule", default=d.get("schedule", "fig4"))
    single.add_argument("--t", dest="t_total", type=float, default=float(d.get("t", 100.0)))
    single.add_argument("--omega0", type=float, default=float(d.get("omega0", 25.0)))
    single.add_argument("--s-end", type=float, default=float(d.get("s_end", 1.0)))
    single.add_argument("--tol", type=float, default=float(d.get("tol", 1e-6)))
    single.add_argument("--full-space-max", type=int, default=int(d.get("full_space_max", 14)))
    single.add_argument("--walk-max-nodes", type=int, default=int(d.get("walk_max_nodes", 1 << 20)))
    single.add_argument("--include-state", action="store_true")
    single.add_argument("--median-out", help="also export the median graph to this path")
    single.add_argument("--output", default=d.get("output", ""))
    return parser


def _emit_error(exc: Exception) -> int:
    json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}}, sys.stderr)
    sys.stderr.write("\n")
    return 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    file_defaults = None
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
            file_defaults = _load_config_file(cfg_path)
        except (IndexError, ValueError, OSError) as exc:
            return _emit_error(exc)
    parser = build_parser(file_defaults)
    args = parser.parse_args(argv)
    try:
        if args.command == "gen-graph":
            g = erdos_renyi(args.n, args.p, args.seed)
            write_graph(g, args.output)
            print(f"wrote {args.output}: n={g.n} m={g.m}")
        elif args.command in ("fig4", "fig3"):
            cfg = _cfg_from_args(args.command, args)
            runner = run_fig4 if args.command == "fig4" else run_fig3
            rows, aggregates = runner(cfg)
            print(f"{args.command}: {len(rows)} rows, {len(aggregates)} aggregate points")
            if cfg.output:
                print(f"rows -> {cfg.output}")
            if cfg.aggregate_output:
                print(f"aggregates -> {cfg.aggregate_output}")
        elif args.command == "bound-report":
            cfg = _cfg_from_args("bound-report", args)
            rows = run_bound_report(cfg)
            print(f"bound-report: {len(rows)} rows")
            if cfg.output:
                print(f"rows -> {cfg.output}")
        elif args.command == "single":
            if args.graph:
                g = read_graph(args.graph)
            else:
                g = erdos_renyi(args.n, args.p, args.seed)
            out = run_single(
                g,
                args.schedule,
                args.t_total,
                args.omega0,
                args.s_end,
                args.tol,
                full_space_max=args.full_space_max,
                walk_max_nodes=args.walk_max_nodes,
                include_state=args.include_state,
            )
            if args.median_out:
                median.write_median_graph(
                    median.build_median_graph(g, limit=args.walk_max_nodes), args.median_out
                )
                out["median_export"] = args.median_out
            text = json.dumps(out, indent=2, sort_keys=True)
            if args.output:
                with open(args.output, "w", encoding="ascii") as fh:
                    fh.write(text + "\n")
                print(f"report -> {args.output}")
            else:
                print(text)
        return 0
    except (RydisError, ValueError, OSError, RuntimeError) as exc:
        return _emit_error(exc)


if __name__ == "__main__":
    sys.exit(main())
