#!/usr/bin/env python3
"""Record real API responses from a demo-scenario run into JSON fixtures for
the frontend test suite.

Usage: python scripts/record_dashboard_fixtures.py [--trace existing.trace]
                                                   [--out frontend/test/fixtures]

Without --trace, runs the packaged demo scenario first (a few minutes).
"""
import argparse
import json
from pathlib import Path

from fastapi.testclient import TestClient

from dinelab.demo import CONVERGENCE_STEP, DEFAULT_STEPS, demo_spec, write_demo_workload
from dinelab.runner import run_training
from dinelab.service import ServingState, create_app
from dinelab.trace.io import export_trace, import_trace


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trace", type=Path, default=None)
    parser.add_argument("--out", type=Path, default=Path("frontend/test/fixtures"))
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    if args.trace and args.trace.exists():
        trace = import_trace(str(args.trace))
    else:
        workload = args.out / "demo_workload.txt"
        write_demo_workload(workload, seed=args.seed, total=DEFAULT_STEPS + 100)
        print(f"running the demo scenario ({DEFAULT_STEPS} steps) ...")
        trace = run_training(demo_spec(workload), steps=DEFAULT_STEPS, seed=args.seed).trace
        if args.trace:
            export_trace(trace, str(args.trace))
        workload.unlink()

    client = TestClient(create_app(ServingState(trace)))
    T = CONVERGENCE_STEP
    scenario = {"from": T - 60, "to": T + 140}
    wide = {"from": len(trace) - 5000, "to": len(trace) - 1}

    def dump(name: str, payload) -> None:
        (args.out / name).write_text(json.dumps(payload))
        print(f"  wrote {args.out / name}")

    dump("meta.json", client.get("/api/meta").json())
    dump("trace_scenario.json", client.get("/api/trace", params=scenario).json())
    dump("dines_scenario.json", client.get("/api/dines", params=scenario).json())
    dump("trace_5k.json", client.get("/api/trace", params=wide).json())
    dump("dines_5k_rho03.json",
         client.get("/api/dines", params={**wide, "rho": 0.3, "phi": 0.1}).json())
    dump("dines_5k_rho06.json",
         client.get("/api/dines", params={**wide, "rho": 0.6, "phi": 0.2}).json())

    # a selected timestep that actually carries an uncertain DINE
    dines = client.get("/api/dines", params=scenario).json()
    selected = dines["uncertain"][0]["timestep"] if dines["uncertain"] else T + 5
    dump("selected.json", {"timestep": selected})
    dump("dominance_selected.json", client.get(f"/api/dominance/{selected}").json())
    dump("counterfactual_selected.json", client.get(f"/api/counterfactual/{selected}").json())


if __name__ == "__main__":
    main()
