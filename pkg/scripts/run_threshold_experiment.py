#!/usr/bin/env python3
"""End-to-end threshold experiment: record one auto-scaling run, sweep the
DINE thresholds over its converged tail, and plot count-vs-threshold curves.

Usage: python scripts/run_threshold_experiment.py [--steps 13000] [--seed 0]
                                                  [--out results/thresholds]
"""
import argparse
import time
from pathlib import Path

from dinelab.config import parse_run_spec
from dinelab.demo import level_blocks
from dinelab.runner import run_training
from dinelab.trace.io import export_trace
from dinelab.trace.store import refilter


def build_spec(workload_path: Path) -> dict:
    return parse_run_spec({
        "reward": {"tau": 1.0, "revenue_optional": 0.016, "revenue_mandatory": 0.01,
                   "server_cost": 0.05, "action_penalty": -0.5},
        "queue": {"service_rate": 10.0},
        "sim": {"s_max": 10, "initial_servers": 6, "arrival_max": 100.0},
        "workload": {"pattern": "trace-file", "path": str(workload_path)},
        "agent": {"discount": 0.8, "hidden_layers": [64, 64], "learning_rate": 2e-3,
                  "epsilon_decay_steps": 2500, "epsilon_end": 0.01},
        "env_model": {"min_samples": 1000, "retrain_interval": 1500, "epochs": 12,
                      "fit_sample_cap": 4000, "hidden": [32]},
    })


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=13_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--warmup", type=int, default=8000,
                        help="steps excluded from the sweep (pre-convergence)")
    parser.add_argument("--out", type=Path, default=Path("results/thresholds"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    workload_path = args.out / "workload.txt"
    rates = level_blocks(5000, seed=1) + [52.0] * (args.steps + 200 - 5000)
    workload_path.write_text("".join(f"{r}\n" for r in rates))

    print(f"training for {args.steps} steps ...")
    t0 = time.perf_counter()
    result = run_training(build_spec(workload_path), steps=args.steps, seed=args.seed)
    print(f"  done in {time.perf_counter() - t0:.0f}s")
    trace_path = args.out / "run.trace"
    export_trace(result.trace, str(trace_path))

    lo, hi = args.warmup, args.steps - 1
    rows = ["kind,threshold,count,rate"]
    n = hi - lo + 1
    for i in range(21):
        rho = round(0.05 * i, 2)
        count = len(refilter(result.trace, rho, 0.0, from_t=lo, to_t=hi).uncertain)
        rows.append(f"uncertain,{rho},{count},{count / n}")
    for i in range(26):
        phi = round(0.02 * i, 2)
        count = len(refilter(result.trace, 0.0, phi, from_t=lo, to_t=hi).extrema)
        rows.append(f"extremum,{phi},{count},{count / n}")
    csv_path = args.out / "sweep.csv"
    csv_path.write_text("\n".join(rows) + "\n")
    print(f"wrote {trace_path} and {csv_path}")
    print("plot with: python scripts/plot_threshold_sweep.py", csv_path)


if __name__ == "__main__":
    main()
