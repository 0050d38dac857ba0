"""HTTP layer serving sessions to the workbench UI.

Thin by design: every number comes from the library, every mutation is one
journal record, and every mutating endpoint carries the caller's
expected_version.  A mismatch is rejected with 409 before any side effect,
so concurrent tabs can only interleave cleanly (optimistic concurrency).
What-if and value-of-question are POSTs that never journal.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import journal as jn
from .arguments import Argument, ExceptionStatus
from .errors import (
    ReckonError,
    StorageError,
    UnknownArgument,
    UnknownEvidence,
    UnknownException,
    UnknownRecord,
    UnknownScenario,
    ValidationFailed,
)
from .resolution import ResolutionPolicy
from .session import (
    Session,
    culpability_view,
    fusion_view,
    session_view,
    voi_view,
)

SESSION_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

NOT_FOUND_ERRORS = (UnknownArgument, UnknownEvidence, UnknownException,
                    UnknownRecord, UnknownScenario)


class UnknownSession(ReckonError):
    pass


class VersionConflict(ReckonError):
    pass


class SessionStore:
    """Directory of journal files, one live Session and one lock per id."""

    def __init__(self, directory: Path):
        self.directory = directory
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def _scan_for(self, session_id: str) -> Session | None:
        for path in sorted(self.directory.glob("*.sedj")):
            try:
                candidate = Session.load(path)
            except ReckonError:
                continue
            if candidate.session_id == session_id:
                return candidate
        return None

    def acquire(self, session_id: str) -> tuple[Session, threading.RLock]:
        with self._registry_lock:
            if session_id not in self._sessions:
                found = self._scan_for(session_id)
                if found is None:
                    raise UnknownSession(f"no session {session_id!r}")
                self._sessions[session_id] = found
                self._locks[session_id] = threading.RLock()
            return self._sessions[session_id], self._locks[session_id]

    def create(self, frame: list[str], session_id: str) -> Session:
        if not SESSION_ID_RE.match(session_id):
            raise ValidationFailed(f"bad session id {session_id!r}")
        with self._registry_lock:
            if session_id in self._sessions:
                raise ValidationFailed(f"session {session_id!r} already exists")
            path = self.directory / f"{session_id}.sedj"
            session = Session.create(frame, session_id=session_id, path=path)
            self._sessions[session_id] = session
            self._locks[session_id] = threading.RLock()
            return session

    def evict(self, session_id: str) -> None:
        """Drop the cached session so the next access replays the file."""
        with self._registry_lock:
            self._sessions.pop(session_id, None)


# --- request bodies ---------------------------------------------------------

class CreateSessionBody(BaseModel):
    frame: list[str]
    session_id: str


class Mutation(BaseModel):
    expected_version: int


class EvidenceBody(Mutation):
    description: str
    id: str | None = None


class ArgumentBody(Mutation):
    evidence_id: str
    core: list[str]
    base_support: float
    id: str | None = None
    exceptions: list[dict] = []


class ElicitationStartBody(Mutation):
    max_rounds: int | None = None


class ElicitationResponseBody(Mutation):
    description: str
    probability: float
    impact: dict
    exception_id: str | None = None


class LedgerCommitBody(Mutation):
    kind: str
    source: list[str] | None = None
    committed: list[str] | None = None
    amount: float | None = None
    precise: list[str] | None = None
    fallback: list[str] | None = None
    fraction: float | None = None


class StatusBody(Mutation):
    status: str


class ResolveStepBody(Mutation):
    tau: float = 0.05
    max_steps: int = 100


class WhatIfBody(BaseModel):
    retract: list[str]


class VoiBody(BaseModel):
    answers: list[dict]


# --- app ---------------------------------------------------------------------

def _error_code(err: Exception) -> str:
    name = type(err).__name__
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


def create_app(directory: Path | str) -> FastAPI:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="reckon workbench service")
    store = SessionStore(directory)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def bad_request(_: Request, err: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "bad-request", "detail": str(err.errors())})

    @app.exception_handler(ReckonError)
    async def domain_error(_: Request, err: ReckonError):
        if isinstance(err, UnknownSession) or isinstance(err, NOT_FOUND_ERRORS):
            status = 404
        elif isinstance(err, VersionConflict):
            status = 409
        else:
            status = 422
        return JSONResponse(status_code=status,
                            content={"error": _error_code(err), "detail": str(err)})

    def mutate(session_id: str, expected_version: int, fn):
        session, lock = store.acquire(session_id)
        with lock:
            if session.version != expected_version:
                raise VersionConflict(
                    f"expected version {expected_version}, session is at {session.version}"
                )
            try:
                return session, fn(session)
            except StorageError:
                # a failed journal write can leave memory ahead of disk
                store.evict(session_id)
                raise

    def read(session_id: str, fn):
        session, lock = store.acquire(session_id)
        with lock:
            return session, fn(session)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = store.create(body.frame, body.session_id)
        return {"session_id": session.session_id, "version": session.version}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        _, view = read(session_id, lambda s: session_view(s))
        return view

    @app.post("/sessions/{session_id}/evidence")
    def add_evidence(session_id: str, body: EvidenceBody):
        session, item = mutate(
            session_id, body.expected_version,
            lambda s: s.add_evidence(body.description, evidence_id=body.id),
        )
        return {"evidence_id": item.id, "version": session.version}

    @app.post("/sessions/{session_id}/arguments")
    def add_argument(session_id: str, body: ArgumentBody):
        def op(s: Session):
            excs = tuple(jn.exception_from_payload(s.frame, p) for p in body.exceptions)
            return s.add_argument(body.evidence_id, body.core, body.base_support,
                                  argument_id=body.id, exceptions=excs)
        session, arg = mutate(session_id, body.expected_version, op)
        return {"argument_id": arg.id, "version": session.version}

    @app.post("/sessions/{session_id}/arguments/{argument_id}/elicitation")
    def start_elicitation(session_id: str, argument_id: str, body: ElicitationStartBody):
        session, prompt = mutate(
            session_id, body.expected_version,
            lambda s: s.start_elicitation(argument_id, max_rounds=body.max_rounds),
        )
        return {"prompt": prompt, "version": session.version}

    @app.post("/sessions/{session_id}/arguments/{argument_id}/elicitation/response")
    def elicitation_response(session_id: str, argument_id: str,
                             body: ElicitationResponseBody):
        def op(s: Session):
            impact = jn.impact_from_payload(s.frame, body.impact)
            next_prompt = s.submit_qualification(
                argument_id, body.description, body.probability, impact,
                exception_id=body.exception_id,
            )
            added = s.argument(argument_id).exceptions[-1]
            return next_prompt, added.id
        session, (next_prompt, xid) = mutate(session_id, body.expected_version, op)
        return {"next_prompt": next_prompt, "exception_id": xid,
                "version": session.version}

    @app.post("/sessions/{session_id}/arguments/{argument_id}/elicitation/pass")
    def elicitation_pass(session_id: str, argument_id: str, body: Mutation):
        session, _ = mutate(session_id, body.expected_version,
                            lambda s: s.pass_elicitation(argument_id))
        return {"version": session.version}

    @app.post("/sessions/{session_id}/ledger/commit")
    def ledger_commit(session_id: str, body: LedgerCommitBody):
        def op(s: Session):
            if body.kind == "bottom-up":
                return s.commit_bottom_up(body.source, body.committed, body.amount)
            if body.kind == "top-down":
                return s.declare_fallback(body.precise, body.fallback, body.fraction)
            raise ValidationFailed(f"unknown ledger commitment kind {body.kind!r}")
        session, rid = mutate(session_id, body.expected_version, op)
        return {"record_id": rid, "version": session.version}

    @app.post("/sessions/{session_id}/ledger/{record_id}/retract")
    def ledger_retract(session_id: str, record_id: str, body: Mutation):
        session, _ = mutate(session_id, body.expected_version,
                            lambda s: s.retract_ledger(record_id))
        return {"version": session.version}

    @app.post("/sessions/{session_id}/exceptions/{exception_id}/status")
    def exception_status(session_id: str, exception_id: str, body: StatusBody):
        session, _ = mutate(
            session_id, body.expected_version,
            lambda s: s.set_exception_status(exception_id, ExceptionStatus(body.status)),
        )
        return {"version": session.version}

    @app.get("/sessions/{session_id}/fusion")
    def get_fusion(session_id: str):
        session, result = read(session_id, lambda s: s.fuse())
        view = fusion_view(session.frame, result)
        view["version"] = session.version
        return view

    @app.get("/sessions/{session_id}/culpability")
    def get_culpability(session_id: str):
        session, report = read(session_id, lambda s: s.culpability())
        view = culpability_view(report)
        view["version"] = session.version
        return view

    @app.post("/sessions/{session_id}/resolve/step")
    def resolve_step(session_id: str, body: ResolveStepBody):
        policy = ResolutionPolicy(tau=body.tau, max_steps=body.max_steps)
        session, outcome = mutate(session_id, body.expected_version,
                                  lambda s: s.resolve_step(policy))
        return {
            "done": outcome.done.value if outcome.done else None,
            "step": None if outcome.step is None else {
                "index": outcome.step.index,
                "conflict_before": outcome.step.conflict_before,
                "item": outcome.step.item_id,
                "culpability": outcome.step.culpability,
                "conflict_after": outcome.step.conflict_after,
            },
            "fusion": fusion_view(session.frame, outcome.fusion),
            "version": session.version,
        }

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: WhatIfBody):
        session, result = read(session_id, lambda s: s.whatif(body.retract))
        view = fusion_view(session.frame, result)
        view["retracted"] = body.retract
        view["version"] = session.version  # unchanged: nothing journaled
        return view

    @app.post("/sessions/{session_id}/voi")
    def voi(session_id: str, body: VoiBody):
        def op(s: Session):
            question = []
            for i, answer in enumerate(body.answers):
                spec = answer.get("argument", {})
                excs = tuple(jn.exception_from_payload(s.frame, p)
                             for p in spec.get("exceptions", []))
                question.append((
                    answer["probability"],
                    Argument(
                        id=spec.get("id", f"ANS{i}"),
                        evidence_id=spec.get("evidence_id", "question"),
                        core_position=s.frame.subset(spec["core"]),
                        base_support=spec["base_support"],
                        exceptions=excs,
                    ),
                ))
            return s.value_of_question(question)
        session, result = read(session_id, op)
        view = voi_view(result)
        view["version"] = session.version
        return view

    return app


def run(directory: Path | str, host: str = "127.0.0.1", port: int = 8787) -> None:
    import uvicorn

    uvicorn.run(create_app(directory), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="serve sessions over HTTP")
    parser.add_argument("--dir", required=True)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8787)
    args = parser.parse_args()
    run(directory=args.dir, host=args.host, port=args.port)
