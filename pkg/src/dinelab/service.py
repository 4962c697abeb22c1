"""HTTP API over a decision trace, for the dashboard and ad-hoc inspection.

All GET endpoints are read-only and operate on an immutable snapshot of the
records; the one POST endpoint swaps the live thresholds under a lock. The
same app serves a finished trace file or a trace still being written by a
background training loop.
"""
from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dines.detect import detect_uncertain, dominance
from .dines.text import render_counterfactual
from .trace.store import Trace, TraceRecord, refilter, standardize


class ServingState:
    """Shared trace plus runtime-tunable thresholds; one writer, many readers."""

    def __init__(self, trace: Trace):
        self.trace = trace
        self.lock = threading.RLock()
        self.rho = trace.meta.rho
        self.phi = trace.meta.phi

    def live_thresholds(self) -> tuple[float, float]:
        with self.lock:
            return self.rho, self.phi

    def set_thresholds(self, rho: float, phi: float) -> tuple[float, float]:
        with self.lock:
            previous = (self.rho, self.phi)
            self.rho, self.phi = rho, phi
            return previous

    def append(self, record: TraceRecord) -> None:
        with self.lock:
            # record is already validated and fully built by the training loop
            self.trace.records.append(record)

    def snapshot(self, from_t: Optional[int] = None, to_t: Optional[int] = None) -> list[TraceRecord]:
        with self.lock:
            records = list(self.trace.records)
        if not records:
            return []
        base, last = records[0].timestep, records[-1].timestep
        lo = base if from_t is None else max(from_t, base)
        hi = last if to_t is None else min(to_t, last)
        if lo > hi:
            return []
        return records[lo - base:hi - base + 1]

    def record_at(self, t: int) -> Optional[TraceRecord]:
        with self.lock:
            records = self.trace.records
            if records:
                i = t - records[0].timestep
                if 0 <= i < len(records):
                    return records[i]
        return None


class ThresholdsBody(BaseModel):
    rho: float
    phi: float


def _bad_request(fields: list[str], message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message, "fields": fields})


def _not_found(message: str) -> JSONResponse:
    return JSONResponse(status_code=404, content={"error": message})


def create_app(state: ServingState) -> FastAPI:
    app = FastAPI(title="dinelab trace service")
    meta = state.trace.meta

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        fields = [".".join(str(p) for p in err["loc"][1:]) or str(err["loc"][0])
                  for err in exc.errors()]
        return _bad_request(fields, "malformed parameter(s)")

    def check_window(from_t: Optional[int], to_t: Optional[int]) -> Optional[JSONResponse]:
        if from_t is not None and to_t is not None and from_t > to_t:
            return _bad_request(["from", "to"], f"from ({from_t}) is after to ({to_t})")
        return None

    @app.get("/api/meta")
    def get_meta():
        rho, phi = state.live_thresholds()
        with state.lock:
            length = len(state.trace.records)
        return {
            "channel_names": list(meta.channel_names),
            "action_names": list(meta.action_names),
            "state_var_names": list(meta.state_var_names),
            "weights": list(meta.weights),
            "n_channels": meta.n_channels,
            "n_actions": meta.n_actions,
            "trace_length": length,
            "thresholds": {"rho": rho, "phi": phi},
        }

    @app.get("/api/trace")
    def get_trace(from_t: Optional[int] = Query(None, alias="from"),
                  to_t: Optional[int] = Query(None, alias="to")):
        err = check_window(from_t, to_t)
        if err is not None:
            return err
        records = state.snapshot(from_t, to_t)
        view = standardize(records, meta.state_var_names)
        return {
            "timesteps": [r.timestep for r in records],
            "state": {
                "names": list(meta.state_var_names),
                "raw": [[r.raw_state[i] for r in records] for i in range(len(meta.state_var_names))],
                "standardized": [view.z[:, i].tolist() for i in range(len(meta.state_var_names))],
                "means": view.means.tolist(),
                "sigmas": view.sigmas.tolist(),
            },
            "rewards": [[r.reward[c] for r in records] for c in range(meta.n_channels)],
            "actions": [r.action for r in records],
            "exploratory": [r.exploratory for r in records],
            "epsilon": [r.epsilon_at_step for r in records],
        }

    @app.get("/api/dominance/{t}")
    def get_dominance(t: int):
        record = state.record_at(t)
        if record is None:
            return _not_found(f"no record at timestep {t}")
        chart = dominance(record.q_values, record.action, timestep=t)
        return chart.as_dict()

    @app.get("/api/dines")
    def get_dines(rho: Optional[float] = None, phi: Optional[float] = None,
                  from_t: Optional[int] = Query(None, alias="from"),
                  to_t: Optional[int] = Query(None, alias="to")):
        live_rho, live_phi = state.live_thresholds()
        rho = live_rho if rho is None else rho
        phi = live_phi if phi is None else phi
        if not 0.0 <= rho <= 1.0:
            return _bad_request(["rho"], f"rho must be in [0, 1], got {rho}")
        if phi < 0.0:
            return _bad_request(["phi"], f"phi must be >= 0, got {phi}")
        err = check_window(from_t, to_t)
        if err is not None:
            return err
        snapshot = Trace(meta)
        snapshot.records = state.snapshot(from_t, to_t)
        result = refilter(snapshot, rho, phi)
        return {
            "rho": rho,
            "phi": phi,
            "uncertain": [d.as_dict() for d in result.uncertain],
            "extrema": [d.as_dict() for d in result.extrema],
            "counts": {"uncertain": len(result.uncertain), "extrema": len(result.extrema)},
        }

    @app.get("/api/counterfactual/{t}")
    def get_counterfactual(t: int, rho: Optional[float] = None):
        record = state.record_at(t)
        if record is None:
            return _not_found(f"no record at timestep {t}")
        rho = state.live_thresholds()[0] if rho is None else rho
        if not 0.0 <= rho <= 1.0:
            return _bad_request(["rho"], f"rho must be in [0, 1], got {rho}")
        dine = detect_uncertain(record.q_values, record.action, rho, timestep=t)
        if dine is None:
            return {"timestep": t, "text": ""}
        chart = dominance(record.q_values, record.action, timestep=t)
        text = render_counterfactual(dine, chart, meta.channel_names, meta.action_names)
        return {"timestep": t, "text": text}

    @app.post("/api/thresholds")
    def post_thresholds(body: ThresholdsBody):
        if not 0.0 <= body.rho <= 1.0:
            return _bad_request(["rho"], f"rho must be in [0, 1], got {body.rho}")
        if body.phi < 0.0:
            return _bad_request(["phi"], f"phi must be >= 0, got {body.phi}")
        prev_rho, prev_phi = state.set_thresholds(body.rho, body.phi)
        return {"rho": prev_rho, "phi": prev_phi}

    return app
