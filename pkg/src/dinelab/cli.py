"""Command line surface: train, sweep, serve, export, demo.

Exit codes: 0 on success, 1 for configuration problems (bad files, bad
values), 2 for runtime failures (training divergence, port in use). Every
option can also be set through DINELAB_<COMMAND>_<OPTION> environment
variables.
"""
from __future__ import annotations

import functools
import logging
import os
import sys
import threading
from pathlib import Path

import click

from .agent.core import TrainingDiverged
from .config import ConfigError, RunSpec, load_run_spec, parse_run_spec
from .demo import DEFAULT_STEPS, demo_spec, write_demo_workload
from .runner import build_trace_meta, run_training
from .service import ServingState, create_app
from .trace.io import TraceFormatError, export_trace, import_trace
from .trace.store import Trace, refilter

EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, TraceFormatError, FileNotFoundError) as e:
            click.echo(f"config error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except (TrainingDiverged, OSError) as e:
            click.echo(f"runtime failure: {e}", err=True)
            sys.exit(EXIT_RUNTIME)
    return wrapper


def _load_spec(config_path: str | None, rho: float | None, phi: float | None) -> RunSpec:
    spec = load_run_spec(config_path) if config_path else parse_run_spec({})
    if rho is not None or phi is not None:
        try:
            spec.dines = type(spec.dines)(
                rho=spec.dines.rho if rho is None else rho,
                phi=spec.dines.phi if phi is None else phi,
            )
        except ValueError as e:
            raise ConfigError(str(e)) from e
    return spec


def _check_steps(steps: int) -> int:
    if steps <= 0:
        raise ConfigError(f"steps must be positive, got {steps}")
    return steps


def _parse_grid(text: str) -> list[float]:
    """Either comma-separated values or start:step:end (inclusive)."""
    try:
        if ":" in text:
            start, step, end = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError("grid step must be positive")
            values = []
            v = start
            while v <= end + 1e-12:
                values.append(round(v, 10))
                v += step
            return values
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise ConfigError(f"bad grid {text!r}: {e}") from e


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="log progress to stderr")
def cli(verbose: bool) -> None:
    """Debugging workbench for reward-decomposed online RL."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.option("--config", "config_path", default=None, help="run configuration YAML")
@click.option("--steps", default=1000, show_default=True, help="decision intervals to run")
@click.option("--seed", default=0, show_default=True)
@click.option("--rho", type=float, default=None, help="override the uncertain-action threshold")
@click.option("--phi", type=float, default=None, help="override the extremum threshold")
@click.option("--trace", "trace_path", required=True, help="trace output file")
@_guarded
def train(config_path, steps, seed, rho, phi, trace_path):
    """Run the adaptation loop and write the decision trace."""
    steps = _check_steps(steps)
    spec = _load_spec(config_path, rho, phi)
    result = run_training(spec, steps=steps, seed=seed, log_every=max(1, steps // 10))
    export_trace(result.trace, trace_path)
    click.echo(f"wrote {len(result.trace)}-step trace to {trace_path}")
    if spec.environment == "gridworld":
        mean = result.mean_episode_return
        click.echo(f"episodes completed: {len(result.episode_returns)}, "
                   f"mean episode return: {'n/a' if mean is None else f'{mean:.2f}'}")


@cli.command()
@click.option("--config", "config_path", default=None, help="run configuration YAML (to produce a trace)")
@click.option("--steps", default=5000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--trace", "trace_path", default=None,
              help="existing trace to load; produced and saved here when absent")
@click.option("--rho-grid", default="0:0.05:1", show_default=True)
@click.option("--phi-grid", default="0:0.02:0.5", show_default=True)
@click.option("--out", "out_path", default=None, help="CSV output file (stdout when omitted)")
@_guarded
def sweep(config_path, steps, seed, trace_path, rho_grid, phi_grid, out_path):
    """Count DINEs per threshold over one recorded trace (CSV: kind,threshold,count,rate)."""
    if trace_path and Path(trace_path).exists():
        trace = import_trace(trace_path)
    else:
        steps = _check_steps(steps)
        spec = _load_spec(config_path, None, None)
        result = run_training(spec, steps=steps, seed=seed)
        trace = result.trace
        if trace_path:
            export_trace(trace, trace_path)
    n = max(1, len(trace))
    lines = ["kind,threshold,count,rate"]
    for rho in _parse_grid(rho_grid):
        count = len(refilter(trace, rho=rho, phi=0.0).uncertain)
        lines.append(f"uncertain,{rho},{count},{count / n}")
    for phi in _parse_grid(phi_grid):
        count = len(refilter(trace, rho=0.0, phi=phi).extrema)
        lines.append(f"extremum,{phi},{count},{count / n}")
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text)
        click.echo(f"wrote {len(lines) - 1} rows to {out_path}")
    else:
        click.echo(text, nl=False)


def _split_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ConfigError(f"bad address {addr!r}, expected host:port")
    return host, int(port)


@cli.command()
@click.option("--trace", "trace_path", default=None, help="recorded trace file to serve")
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--live", is_flag=True, help="train in the background and serve the growing trace")
@click.option("--config", "config_path", default=None)
@click.option("--steps", default=5000, show_default=True, help="steps for --live training")
@click.option("--seed", default=0, show_default=True)
@_guarded
def serve(trace_path, addr, live, config_path, steps, seed):
    """Expose a trace over the HTTP API for the dashboard."""
    import socket

    import uvicorn

    host, port = _split_addr(addr)
    probe = socket.socket()
    try:
        probe.bind((host, port))  # surfaces a busy port as our runtime-failure exit code
    finally:
        probe.close()
    if live:
        spec = _load_spec(config_path, None, None)
        state = ServingState(Trace(build_trace_meta(spec)))
        worker = threading.Thread(
            target=run_training,
            kwargs=dict(spec=spec, steps=_check_steps(steps), seed=seed,
                        thresholds_fn=state.live_thresholds, record_hook=state.append),
            daemon=True,
        )
        worker.start()
    else:
        if not trace_path:
            raise ConfigError("serve needs --trace or --live")
        if not Path(trace_path).exists():
            raise ConfigError(f"trace file not found: {trace_path}")
        state = ServingState(import_trace(trace_path))
    app = create_app(state)
    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command()
@click.option("--trace", "trace_path", required=True, help="trace file to read")
@click.option("--out", "out_path", required=True, help="trace file to write")
@click.option("--from", "from_t", type=int, default=None, help="window start timestep")
@click.option("--to", "to_t", type=int, default=None, help="window end timestep")
@_guarded
def export(trace_path, out_path, from_t, to_t):
    """Copy a trace or a timestep window of it to a new file."""
    trace = import_trace(trace_path)
    if from_t is not None or to_t is not None:
        lo = from_t if from_t is not None else trace.base_timestep
        hi = to_t if to_t is not None else (trace.records[-1].timestep if trace.records else 0)
        if lo > hi:
            raise ConfigError(f"window start {lo} is after end {hi}")
        window = Trace(trace.meta)
        for r in trace.window(lo, hi):
            window.append(r)
        trace = window
    export_trace(trace, out_path)
    click.echo(f"wrote {len(trace)} records to {out_path}")


@cli.command()
@click.option("--trace", "trace_path", required=True, help="demo trace output file")
@click.option("--steps", default=DEFAULT_STEPS, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_guarded
def demo(trace_path, steps, seed):
    """Run the packaged walkthrough scenario (workload step increase after convergence)."""
    steps = _check_steps(steps)
    workload_path = str(trace_path) + ".workload.txt"
    write_demo_workload(workload_path, seed=seed, total=steps + 100)
    spec = demo_spec(workload_path)
    result = run_training(spec, steps=steps, seed=seed, log_every=max(1, steps // 10))
    export_trace(result.trace, trace_path)
    click.echo(f"wrote {len(result.trace)}-step demo trace to {trace_path}")
    click.echo(f"workload file: {workload_path}")
    click.echo("inspect with: dinelab serve --trace " + str(trace_path))


def main() -> None:
    cli(auto_envvar_prefix="DINELAB")


if __name__ == "__main__":
    main()
