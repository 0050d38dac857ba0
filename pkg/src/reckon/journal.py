"""Append-only session journal and its replayed state.

A session file is UTF-8 text, one JSON object per line, each with fields
"seq" (strictly increasing from 1, no gaps), "kind", "at" (ISO-8601) and
"payload".  The first record is SESSION_CREATED and its payload carries
{"format_version": 1, "frame": [labels, ...]}.  Replaying the records in
order reconstructs the exact session state; the history is the product,
so corrections are new records and nothing is ever rewritten.  Unknown
payload fields are preserved; unknown kinds are corruption.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import elicitation
from .arguments import (
    Argument,
    EvidenceItem,
    ExceptionCondition,
    ExceptionStatus,
    Impact,
    Rebut,
    Undercut,
    set_exception_status,
)
from .belief import Frame, vacuous
from .elicitation import DialogueState, ElicitationSession
from .errors import (
    CorruptRecord,
    MissingHeader,
    NotRetractable,
    ReckonError,
    StorageError,
    ValidationFailed,
    VersionUnsupported,
)
from .ledger import Ledger

FORMAT_VERSION = 1

SESSION_CREATED = "SESSION_CREATED"
EVIDENCE_ADDED = "EVIDENCE_ADDED"
ARGUMENT_ADDED = "ARGUMENT_ADDED"
EXCEPTION_ADDED = "EXCEPTION_ADDED"
STATUS_CHANGED = "STATUS_CHANGED"
LEDGER_COMMITTED = "LEDGER_COMMITTED"
LEDGER_RETRACTED = "LEDGER_RETRACTED"
FUSION_SNAPSHOT = "FUSION_SNAPSHOT"
RESOLUTION_STEP = "RESOLUTION_STEP"
ELICITATION_PROMPT = "ELICITATION_PROMPT"
ELICITATION_RESPONSE = "ELICITATION_RESPONSE"

RECORD_KINDS = frozenset({
    SESSION_CREATED, EVIDENCE_ADDED, ARGUMENT_ADDED, EXCEPTION_ADDED,
    STATUS_CHANGED, LEDGER_COMMITTED, LEDGER_RETRACTED, FUSION_SNAPSHOT,
    RESOLUTION_STEP, ELICITATION_PROMPT, ELICITATION_RESPONSE,
})


@dataclass(frozen=True)
class JournalRecord:
    seq: int
    kind: str
    at: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "kind": self.kind, "at": self.at, "payload": self.payload},
            sort_keys=True,
        )


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


# --- payload codecs -----------------------------------------------------

def impact_to_payload(impact: Impact) -> dict:
    if isinstance(impact, Undercut):
        return {"kind": "undercut"}
    return {"kind": "rebut", "target": list(impact.target.members)}


def impact_from_payload(frame: Frame, payload: dict) -> Impact:
    kind = payload.get("kind")
    if kind == "undercut":
        return Undercut()
    if kind == "rebut":
        return Rebut(target=frame.subset(payload["target"]))
    raise ValidationFailed(f"unknown impact kind {kind!r}")


def exception_to_payload(exc: ExceptionCondition) -> dict:
    return {
        "exception_id": exc.id,
        "description": exc.description,
        "probability": exc.probability,
        "impact": impact_to_payload(exc.impact),
        "status": exc.status.value,
    }


def exception_from_payload(frame: Frame, payload: dict) -> ExceptionCondition:
    return ExceptionCondition(
        id=payload["exception_id"],
        description=payload["description"],
        probability=payload["probability"],
        impact=impact_from_payload(frame, payload["impact"]),
        status=ExceptionStatus(payload.get("status", ExceptionStatus.ASSUMED_FALSE.value)),
    )


# --- replayed session state ---------------------------------------------

@dataclass
class SessionState:
    """Everything a session knows, reconstructed by folding journal records."""

    session_id: str | None = None
    frame: Frame | None = None
    evidence: dict[str, EvidenceItem] = field(default_factory=dict)
    arguments: dict[str, Argument] = field(default_factory=dict)
    exceptions: dict[str, ExceptionCondition] = field(default_factory=dict)
    ledger: Ledger | None = None
    elicitations: dict[str, ElicitationSession] = field(default_factory=dict)
    last_fusion_snapshot: dict | None = None
    applied: int = 0

    # Each handler validates fully before mutating, so a failed apply
    # leaves the state exactly as it was.
    def apply(self, record: JournalRecord) -> None:
        handler = _HANDLERS.get(record.kind)
        if handler is None:
            raise ValidationFailed(f"unknown record kind {record.kind!r}")
        if record.kind != SESSION_CREATED and self.frame is None:
            raise ValidationFailed("session has no SESSION_CREATED header yet")
        try:
            handler(self, record.payload)
        except (ValidationFailed, VersionUnsupported):
            raise
        except ReckonError as err:
            raise ValidationFailed(str(err)) from err
        except (KeyError, TypeError, ValueError) as err:
            raise ValidationFailed(f"malformed {record.kind} payload: {err}") from err
        self.applied += 1

    # -- handlers --

    def _session_created(self, payload: dict) -> None:
        if self.frame is not None:
            raise ValidationFailed("SESSION_CREATED must be the first record, once")
        if payload.get("format_version") != FORMAT_VERSION:
            raise VersionUnsupported(
                f"format_version {payload.get('format_version')!r} not supported"
            )
        frame = Frame(id=payload.get("frame_id", "frame"), hypotheses=tuple(payload["frame"]))
        self.frame = frame
        self.session_id = payload.get("session_id")
        self.ledger = Ledger(base=vacuous(frame))

    def _evidence_added(self, payload: dict) -> None:
        eid = payload["evidence_id"]
        if eid in self.evidence:
            raise ValidationFailed(f"evidence id {eid!r} already exists")
        item = EvidenceItem(
            id=eid,
            description=payload["description"],
            reported_at=int(payload["reported_at"]),
        )
        self.evidence[eid] = item

    def _canonical_exception(self, exc: ExceptionCondition) -> ExceptionCondition:
        prior = self.exceptions.get(exc.id)
        if prior is None:
            return exc
        if not prior.agrees_with(exc):
            raise ValidationFailed(
                f"exception {exc.id!r} disagrees with the shared condition of that id"
            )
        return prior

    def _argument_added(self, payload: dict) -> None:
        aid = payload["argument_id"]
        if aid in self.arguments:
            raise ValidationFailed(f"argument id {aid!r} already exists")
        eid = payload["evidence_id"]
        if eid not in self.evidence:
            raise ValidationFailed(f"argument {aid!r} references unknown evidence {eid!r}")
        assert self.frame is not None
        excs = tuple(
            self._canonical_exception(exception_from_payload(self.frame, p))
            for p in payload.get("exceptions", [])
        )
        argument = Argument(
            id=aid,
            evidence_id=eid,
            core_position=self.frame.subset(payload["core"]),
            base_support=payload["base_support"],
            exceptions=excs,
        )
        self.arguments[aid] = argument
        for exc in excs:
            self.exceptions.setdefault(exc.id, exc)

    def _exception_added(self, payload: dict) -> None:
        aid = payload["argument_id"]
        arg = self.arguments.get(aid)
        if arg is None:
            raise ValidationFailed(f"unknown argument {aid!r}")
        assert self.frame is not None
        exc = self._canonical_exception(exception_from_payload(self.frame, payload))
        if arg.has_exception(exc.id):
            raise ValidationFailed(f"argument {aid!r} already carries exception {exc.id!r}")
        self.arguments[aid] = arg.with_exception(exc)
        self.exceptions.setdefault(exc.id, exc)

    def _status_changed(self, payload: dict) -> None:
        xid = payload["exception_id"]
        if xid not in self.exceptions:
            raise ValidationFailed(f"unknown exception {xid!r}")
        new_status = ExceptionStatus(payload["to"])
        holders = [a for a in self.arguments.values() if a.has_exception(xid)]
        if not holders:
            raise ValidationFailed(f"exception {xid!r} is attached to no argument")
        # Validates the transition once; shared ids agree by invariant.
        updated = [set_exception_status(a, xid, new_status) for a in holders]
        for arg in updated:
            self.arguments[arg.id] = arg
        self.exceptions[xid] = updated[0].exception(xid)

    def _ledger_committed(self, payload: dict) -> None:
        assert self.frame is not None and self.ledger is not None
        rid = payload["record_id"]
        if self.ledger.has_record(rid):
            raise ValidationFailed(f"ledger record id {rid!r} already exists")
        kind = payload["kind"]
        if kind == "bottom-up":
            new_ledger, _ = self.ledger.commit_bottom_up(
                source=self.frame.subset(payload["source"]),
                committed=self.frame.subset(payload["committed"]),
                amount=payload["amount"],
                record_id=rid,
            )
        elif kind == "top-down":
            new_ledger, _ = self.ledger.declare_fallback(
                precise=self.frame.subset(payload["precise"]),
                fallback=self.frame.subset(payload["fallback"]),
                fraction=payload["fraction"],
                record_id=rid,
            )
        else:
            raise ValidationFailed(f"unknown ledger commitment kind {kind!r}")
        self.ledger = new_ledger

    def _ledger_retracted(self, payload: dict) -> None:
        assert self.ledger is not None
        self.ledger = self.ledger.retract(payload["record_id"])

    def _fusion_snapshot(self, payload: dict) -> None:
        self.last_fusion_snapshot = payload

    def retract_item(self, item_id: str) -> None:
        """Retract one assumption in place: exception default or ledger record."""
        exc = self.exceptions.get(item_id)
        if exc is not None:
            if not exc.retractable:
                raise NotRetractable(f"exception {item_id!r} is not assumed false")
            self._status_changed({"exception_id": item_id, "to": ExceptionStatus.ACTIVE.value})
            return
        if self.ledger is not None and self.ledger.has_record(item_id):
            self.ledger = self.ledger.retract(item_id)
            return
        raise NotRetractable(f"no retractable item {item_id!r}")

    def _resolution_step(self, payload: dict) -> None:
        self.retract_item(payload["item_id"])

    def _elicitation_prompt(self, payload: dict) -> None:
        aid = payload["argument_id"]
        arg = self.arguments.get(aid)
        if arg is None:
            raise ValidationFailed(f"unknown argument {aid!r}")
        evidence = self.evidence[arg.evidence_id]
        session, prompt = elicitation.start(
            arg, evidence, max_rounds=payload.get("max_rounds", elicitation.DEFAULT_MAX_ROUNDS)
        )
        if payload["prompt"] != prompt:
            raise ValidationFailed("recorded opening prompt does not match the protocol")
        # Starting anew closes any still-open dialogue on the same argument.
        prior = self.elicitations.get(aid)
        if prior is not None and prior.state is DialogueState.AWAITING_RESPONSE:
            self.elicitations[aid] = elicitation.close(prior, reason="superseded")
        self.elicitations[aid] = session

    def _elicitation_response(self, payload: dict) -> None:
        aid = payload["argument_id"]
        dialogue = self.elicitations.get(aid)
        if dialogue is None:
            raise ValidationFailed(f"no elicitation dialogue open on argument {aid!r}")
        if payload.get("pass"):
            self.elicitations[aid] = elicitation.close(dialogue)
            return
        arg = self.arguments[aid]
        assert self.frame is not None
        exc = ExceptionCondition(
            id=payload["exception_id"],
            description=payload["description"],
            probability=payload["probability"],
            impact=impact_from_payload(self.frame, payload["impact"]),
            status=ExceptionStatus.ASSUMED_FALSE,
        )
        exc = self._canonical_exception(exc)
        if arg.has_exception(exc.id):
            raise ValidationFailed(f"argument {aid!r} already carries exception {exc.id!r}")
        advanced, _ = elicitation.record_qualification(
            dialogue, payload["description"], payload["probability"]
        )
        self.elicitations[aid] = advanced
        self.arguments[aid] = arg.with_exception(exc)
        self.exceptions.setdefault(exc.id, exc)


_HANDLERS = {
    SESSION_CREATED: SessionState._session_created,
    EVIDENCE_ADDED: SessionState._evidence_added,
    ARGUMENT_ADDED: SessionState._argument_added,
    EXCEPTION_ADDED: SessionState._exception_added,
    STATUS_CHANGED: SessionState._status_changed,
    LEDGER_COMMITTED: SessionState._ledger_committed,
    LEDGER_RETRACTED: SessionState._ledger_retracted,
    FUSION_SNAPSHOT: SessionState._fusion_snapshot,
    RESOLUTION_STEP: SessionState._resolution_step,
    ELICITATION_PROMPT: SessionState._elicitation_prompt,
    ELICITATION_RESPONSE: SessionState._elicitation_response,
}


# --- the journal itself --------------------------------------------------

class Journal:
    """Ordered records plus an optional file sink (memory-only when absent)."""

    def __init__(self, path: Path | str | None = None,
                 records: list[JournalRecord] | None = None):
        self.path = Path(path) if path is not None else None
        self.records: list[JournalRecord] = list(records or [])

    @property
    def last_seq(self) -> int:
        return self.records[-1].seq if self.records else 0

    def make_record(self, kind: str, payload: dict, at: str | None = None) -> JournalRecord:
        return JournalRecord(seq=self.last_seq + 1, kind=kind, at=at or now_iso(),
                             payload=payload)

    def write(self, record: JournalRecord) -> None:
        """Durable append; callers validate against state first."""
        self.records.append(record)
        if self.path is None:
            return
        try:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
                fh.flush()
        except OSError as err:
            self.records.pop()
            raise StorageError(f"cannot append to {self.path}: {err}") from err


def append(journal: Journal, state: SessionState, kind: str, payload: dict,
           at: str | None = None) -> JournalRecord:
    """Validate a record against the replayed state, then append it durably."""
    record = journal.make_record(kind, payload, at=at)
    state.apply(record)  # raises ValidationFailed; state unchanged on failure
    journal.write(record)
    return record


def load(path: Path | str) -> tuple[Journal, SessionState]:
    """Read and replay a journal file; write-then-load is identity on state."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as err:
        raise StorageError(f"no session file at {path}") from err
    except OSError as err:
        raise StorageError(f"cannot read {path}: {err}") from err

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or all(not line.strip() for line in lines):
        raise MissingHeader(f"{path} is empty")

    state = SessionState()
    records: list[JournalRecord] = []
    for lineno, line in enumerate(lines, start=1):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise CorruptRecord(f"unparseable record: {err.msg}",
                                line=lineno, seq=lineno) from err
        if not isinstance(obj, dict):
            raise CorruptRecord("record is not a JSON object", line=lineno, seq=lineno)
        missing = {"seq", "kind", "at", "payload"} - obj.keys()
        if missing:
            raise CorruptRecord(f"record missing fields {sorted(missing)}",
                                line=lineno, seq=lineno)
        kind = obj["kind"]
        if lineno == 1 and kind != SESSION_CREATED:
            raise MissingHeader(f"{path} does not start with a session header")
        if kind not in RECORD_KINDS:
            raise CorruptRecord(f"unknown record kind {kind!r}", line=lineno, seq=obj["seq"])
        if obj["seq"] != lineno:
            raise CorruptRecord(
                f"sequence must increase without gaps, got {obj['seq']}",
                line=lineno, seq=obj["seq"],
            )
        record = JournalRecord(seq=obj["seq"], kind=kind, at=obj["at"], payload=obj["payload"])
        try:
            state.apply(record)
        except VersionUnsupported:
            raise
        except ReckonError as err:
            raise CorruptRecord(f"replay failed: {err}", line=lineno, seq=obj["seq"]) from err
        records.append(record)
    return Journal(path=path, records=records), state
