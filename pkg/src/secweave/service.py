"""HTTP facade: load models, weave policies, drive sessions, generate tests.

State lives in process memory.  Models are immutable once loaded; sessions
are guarded by a per-session lock so two concurrent mutations cannot
interleave (the loser gets 409 instead of blocking).  An optional state
directory gets a write-through copy of every uploaded model source and
weave report, purely for later inspection; nothing is ever read back.
"""

from __future__ import annotations

import threading
import warnings as _warnings
from dataclasses import dataclass
from itertools import count
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import formats
from . import machine as M
from . import simulation, weaving, xacml
from .errors import Exhausted, ParseError, SecweaveError
from .generation import GenParams, generate_objectives, generate_with_report


class ModelIn(BaseModel):
    text: str


class WeaveIn(BaseModel):
    policy: str
    config: str = ""


class StepIn(BaseModel):
    index: int


class ObjectivesIn(BaseModel):
    state: str
    input: str
    param: str


class KnobsIn(BaseModel):
    depth_limit: int = 10
    max_jumps: int = 100
    rng_seed: int = 0
    max_total_steps: int = 10000


class TestgenIn(BaseModel):
    purposes: str
    params: KnobsIn = KnobsIn()


@dataclass
class ModelEntry:
    id: str
    text: str
    model: M.Efsm


@dataclass
class SessionEntry:
    id: str
    model_id: str
    session: simulation.Session
    lock: threading.Lock


_HTTP_CODES = {404: "not_found", 409: "conflict", 422: "invalid_request"}


def create_app(state_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="secweave")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    models: dict[str, ModelEntry] = {}
    sessions: dict[str, SessionEntry] = {}
    model_ids = count(1)
    session_ids = count(1)
    app.state.models = models
    app.state.sessions = sessions

    persist_to = Path(state_dir) if state_dir is not None else None
    if persist_to is not None:
        persist_to.mkdir(parents=True, exist_ok=True)

    def persist(name: str, text: str) -> None:
        if persist_to is not None:
            (persist_to / name).write_text(text, encoding="utf-8")

    # every error leaves through one envelope: {"error": {code, message, ...}}
    @app.exception_handler(SecweaveError)
    def on_domain_error(request, exc: SecweaveError):
        payload: dict = {"code": exc.code, "message": str(exc)}
        span = getattr(exc, "span", None)
        if span is not None:
            payload["location"] = {
                "file": span.file, "line": span.line, "column": span.column}
        if isinstance(exc, Exhausted) and exc.partial is not None:
            payload["partial"] = formats.emit_testcase(exc.partial)
        return JSONResponse(status_code=422, content={"error": payload})

    @app.exception_handler(StarletteHTTPException)
    def on_http_error(request, exc: StarletteHTTPException):
        code = _HTTP_CODES.get(exc.status_code, "error")
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": {"code": code, "message": str(exc.detail)}})

    @app.exception_handler(RequestValidationError)
    def on_validation_error(request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "invalid_request", "message": str(exc)}})

    def model_entry(mid: str) -> ModelEntry:
        entry = models.get(mid)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"no model {mid!r}")
        return entry

    def session_entry(sid: str) -> SessionEntry:
        entry = sessions.get(sid)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"no session {sid!r}")
        return entry

    def register_model(text: str, m: M.Efsm) -> ModelEntry:
        mid = f"m{next(model_ids)}"
        entry = ModelEntry(mid, text, m)
        models[mid] = entry
        persist(f"{mid}.mdl", text)
        return entry

    # -- models -------------------------------------------------------------

    @app.get("/models")
    def list_models():
        return {"models": [
            {"id": e.id, "system": e.model.system, "process": e.model.name,
             "stats": _stats_view(M.model_stats(e.model))}
            for e in models.values()]}

    @app.post("/models", status_code=201)
    def create_model(body: ModelIn):
        m = formats.parse_model(body.text, file="<upload>")
        diagnostics = M.validate_model(m)
        if diagnostics:
            return JSONResponse(status_code=422, content={"error": {
                "code": "invalid_model",
                "message": f"{len(diagnostics)} validation problem(s)",
                "diagnostics": [
                    {"location": d.location, "message": d.message}
                    for d in diagnostics]}})
        return _model_view(register_model(body.text, m))

    @app.get("/models/{mid}")
    def get_model(mid: str):
        return _model_view(model_entry(mid))

    @app.post("/models/{mid}/weave", status_code=201)
    def weave_model(mid: str, body: WeaveIn):
        entry = model_entry(mid)
        policy = xacml.parse_policy(body.policy)
        cfg = (formats.parse_weave_config(body.config, entry.model)
               if body.config.strip() else weaving.WeaveConfig())
        woven, report = weaving.weave(entry.model, policy, cfg)
        new_entry = register_model(formats.serialize_model(woven), woven)
        persist(f"{new_entry.id}.report.txt", report.render(woven))
        return {
            "id": new_entry.id,
            "report": report.render(woven),
            "stats_before": _stats_view(report.stats_before),
            "stats_after": _stats_view(report.stats_after),
            "entries": [
                {"label": en.label, "rules": list(en.rule_ids),
                 "strengthened": en.strengthened,
                 "before": _opt_expr(en.predicate_before),
                 "after": _opt_expr(en.predicate_after)}
                for en in report.entries],
            "synthesized": [woven.transition_label(i) for i in report.synthesized],
            "warnings": list(report.warnings),
            "model": _model_view(new_entry)}

    # -- sessions -----------------------------------------------------------

    @app.post("/models/{mid}/sessions", status_code=201)
    def create_session(mid: str):
        entry = model_entry(mid)
        sid = f"s{next(session_ids)}"
        sessions[sid] = SessionEntry(
            sid, mid, simulation.new_session(entry.model), threading.Lock())
        return _session_view(sessions[sid])

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return _session_view(session_entry(sid))

    def _mutate(sid: str, fn):
        entry = session_entry(sid)
        if not entry.lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail=f"session {sid!r} is busy")
        try:
            entry.session = fn(entry.session)
            return _session_view(entry)
        finally:
            entry.lock.release()

    @app.post("/sessions/{sid}/step")
    def step_session(sid: str, body: StepIn):
        return _mutate(sid, lambda s: simulation.step(s, body.index))

    @app.post("/sessions/{sid}/undo")
    def undo_session(sid: str):
        return _mutate(sid, simulation.undo)

    @app.get("/sessions/{sid}/testcase")
    def session_testcase(sid: str):
        s = session_entry(sid).session
        tc = simulation.trace_to_testcase(s)
        return {"text": formats.emit_testcase(tc), "steps": len(tc.steps)}

    # -- generation ---------------------------------------------------------

    @app.post("/models/{mid}/objectives")
    def model_objectives(mid: str, body: ObjectivesIn):
        entry = model_entry(mid)
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            purposes = generate_objectives(
                entry.model, body.state, body.input, body.param)
        return {
            "purposes": [_purpose_view(p) for p in purposes],
            "text": formats.serialize_purposes(tuple(purposes)),
            "warnings": [str(w.message) for w in caught]}

    @app.post("/models/{mid}/testgen")
    def model_testgen(mid: str, body: TestgenIn):
        entry = model_entry(mid)
        seq = formats.parse_purposes(body.purposes, entry.model)
        gp = GenParams(
            depth_limit=body.params.depth_limit,
            max_jumps=body.params.max_jumps,
            rng_seed=body.params.rng_seed,
            max_total_steps=body.params.max_total_steps)
        result = generate_with_report(entry.model, seq, gp)
        tc = result.testcase
        return {
            "testcase": formats.emit_testcase(tc),
            "hits": list(result.report.hits),
            "jumps": result.report.jumps,
            "explored": result.report.explored,
            "steps": [
                {"input": st.input.render(), "output": st.output.render()}
                for st in tc.steps]}

    return app


def _stats_view(st: M.Stats) -> dict:
    return {"states": st.states, "transitions": st.transitions,
            "signals": st.signals, "text": st.render()}


def _opt_expr(e) -> str | None:
    return None if e is None else formats.expr_to_text(e)


def _pattern_view(p) -> dict | None:
    if p is None:
        return None
    return {"signal": p.signal,
            "args": None if p.args is None else list(p.args)}


def _purpose_view(p) -> dict:
    return {
        "instance": None if p.instance is None else list(p.instance),
        "source": p.source,
        "destination": p.destination,
        "input": _pattern_view(p.input),
        "output": _pattern_view(p.output)}


def _model_view(entry: ModelEntry) -> dict:
    m = entry.model
    return {
        "id": entry.id,
        "system": m.system,
        "process": m.name,
        "initial_state": m.initial_state,
        "states": list(m.states),
        "stats": _stats_view(M.model_stats(m)),
        "signals": [
            {"name": s.name, "param_types": list(s.param_types)}
            for s in m.signals],
        "variables": [
            {"name": v.name, "type": v.type_name, "init": v.init}
            for v in m.variables],
        "transitions": [
            {"index": i,
             "label": m.transition_label(i),
             "source": t.source,
             "target": t.target,
             "input": {"signal": t.input.signal, "params": list(t.input.params)},
             "output": {"signal": t.output.signal,
                        "args": [formats.expr_to_text(a) for a in t.output.args]},
             "predicate": _opt_expr(t.predicate),
             "actions": [
                 {"var": a.var, "expr": formats.expr_to_text(a.expr)}
                 for a in t.actions]}
            for i, t in enumerate(m.transitions)],
        "text": entry.text}


def _session_view(entry: SessionEntry) -> dict:
    s = entry.session
    return {
        "id": entry.id,
        "model_id": entry.model_id,
        "steps": s.step_counter,
        "state": s.current.state,
        "valuation": dict(s.current.valuation),
        "choices": [
            {"index": c.index,
             "label": s.model.transition_label(c.transition_index),
             "input": c.input.render(),
             "output": c.output.render(),
             "target": c.target}
            for c in simulation.list_choices(s)],
        "trace": [
            {"input": st.input.render(), "output": st.output.render(),
             "source": st.pre.state, "target": st.post.state}
            for st in s.trace]}
