"""Trace (de)serialization: one JSON object per line, header first.

Floats go through json's shortest round-trip repr, so export followed by
import reproduces every number bit-exactly.
"""
from __future__ import annotations

import json
from typing import Union

import numpy as np

from ..dines.types import ExtremumBasis, dine_from_dict
from .store import Trace, TraceMeta, TraceRecord

SCHEMA = "dinelab-trace"
SCHEMA_VERSION = 1


class TraceFormatError(ValueError):
    """Malformed or incompatible trace file; message carries the position."""


def _record_to_dict(r: TraceRecord) -> dict:
    return {
        "t": r.timestep,
        "state": r.raw_state.tolist(),
        "action": r.action,
        "reward": r.reward.tolist(),
        "q": r.q_values.tolist(),
        "epsilon": r.epsilon_at_step,
        "exploratory": r.exploratory,
        "dines": [d.as_dict() for d in r.dines],
        "basis": r.extremum_basis.as_dict() if r.extremum_basis is not None else None,
    }


def _record_from_dict(d: dict) -> TraceRecord:
    return TraceRecord(
        timestep=d["t"],
        raw_state=np.array(d["state"], dtype=float),
        action=d["action"],
        reward=np.array(d["reward"], dtype=float),
        q_values=np.array(d["q"], dtype=float),
        epsilon_at_step=d["epsilon"],
        exploratory=d["exploratory"],
        dines=[dine_from_dict(x) for x in d["dines"]],
        extremum_basis=ExtremumBasis.from_dict(d["basis"]) if d["basis"] is not None else None,
    )


def export_trace(trace: Trace, path: str) -> None:
    header = {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "meta": {
            "channel_names": list(trace.meta.channel_names),
            "action_names": list(trace.meta.action_names),
            "state_var_names": list(trace.meta.state_var_names),
            "weights": list(trace.meta.weights),
            "rho": trace.meta.rho,
            "phi": trace.meta.phi,
            "env_digest": trace.meta.env_digest,
        },
    }
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for r in trace.records:
            fh.write(json.dumps(_record_to_dict(r)) + "\n")


def import_trace(path: Union[str, bytes]) -> Trace:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise TraceFormatError(f"{path}: empty file, missing header line")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise TraceFormatError(f"{path}: line 1: malformed header: {e}") from e
    if not isinstance(header, dict) or header.get("schema") != SCHEMA:
        raise TraceFormatError(f"{path}: line 1: not a {SCHEMA} file")
    if header.get("version") != SCHEMA_VERSION:
        raise TraceFormatError(
            f"{path}: line 1: schema version {header.get('version')!r} unsupported, "
            f"expected {SCHEMA_VERSION}"
        )
    m = header["meta"]
    trace = Trace(TraceMeta(
        channel_names=tuple(m["channel_names"]),
        action_names=tuple(m["action_names"]),
        state_var_names=tuple(m["state_var_names"]),
        weights=tuple(m["weights"]),
        rho=m["rho"],
        phi=m["phi"],
        env_digest=m.get("env_digest", ""),
    ))
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise TraceFormatError(f"{path}: line {lineno}: blank record line")
        try:
            record = _record_from_dict(json.loads(line))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise TraceFormatError(f"{path}: line {lineno}: malformed record: {e}") from e
        try:
            trace.append(record)
        except ValueError as e:
            raise TraceFormatError(f"{path}: line {lineno}: {e}") from e
    return trace


def traces_equal(a: Trace, b: Trace) -> bool:
    """Exact equality, including every float bit."""
    if a.meta != b.meta or len(a) != len(b):
        return False
    for ra, rb in zip(a.records, b.records):
        if (ra.timestep != rb.timestep or ra.action != rb.action
                or ra.epsilon_at_step != rb.epsilon_at_step
                or ra.exploratory != rb.exploratory
                or not np.array_equal(ra.raw_state, rb.raw_state)
                or not np.array_equal(ra.reward, rb.reward)
                or not np.array_equal(ra.q_values, rb.q_values)):
            return False
        if [d.as_dict() for d in ra.dines] != [d.as_dict() for d in rb.dines]:
            return False
        basis_a = ra.extremum_basis.as_dict() if ra.extremum_basis else None
        basis_b = rb.extremum_basis.as_dict() if rb.extremum_basis else None
        if basis_a != basis_b:
            return False
    return True
