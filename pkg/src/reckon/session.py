"""High-level session facade.

Every mutation goes through exactly one journal record: the op builds the
payload, the record is validated against the replayed state, then written.
Reads (fuse, culpability, what-if, value-of-question) never journal.
"""

from __future__ import annotations

from pathlib import Path

from . import fusion as fusion_ops
from . import journal as jn
from . import resolution as resolution_ops
from .arguments import (
    Argument,
    EvidenceItem,
    ExceptionCondition,
    ExceptionStatus,
    Impact,
)
from .belief import Frame, MassFunction
from .errors import (
    DuplicateId,
    StorageError,
    UnknownArgument,
    UnknownEvidence,
    UnknownException,
)
from .fusion import CulpabilityReport, FusionResult, VoiResult
from .ledger import Ledger
from .resolution import ResolutionPolicy, ResolutionStep, ResolutionTrace, StepOutcome


class Session:
    def __init__(self, state: jn.SessionState, journal: jn.Journal):
        self.state = state
        self.journal = journal

    # --- construction ---

    @classmethod
    def create(
        cls,
        frame_labels,
        *,
        session_id: str,
        frame_id: str = "frame",
        path: Path | str | None = None,
        header_extra: dict | None = None,
    ) -> "Session":
        if path is not None and Path(path).exists():
            raise StorageError(f"refusing to overwrite existing session file {path}")
        session = cls(jn.SessionState(), jn.Journal(path=path))
        payload = {
            "format_version": jn.FORMAT_VERSION,
            "frame": list(frame_labels),
            "frame_id": frame_id,
            "session_id": session_id,
        }
        if header_extra:
            payload.update(header_extra)
        session._append(jn.SESSION_CREATED, payload)
        return session

    @classmethod
    def load(cls, path: Path | str) -> "Session":
        journal, state = jn.load(path)
        return cls(state, journal)

    def _append(self, kind: str, payload: dict) -> jn.JournalRecord:
        return jn.append(self.journal, self.state, kind, payload)

    # --- introspection ---

    @property
    def session_id(self) -> str:
        return self.state.session_id or "session"

    @property
    def frame(self) -> Frame:
        assert self.state.frame is not None
        return self.state.frame

    @property
    def version(self) -> int:
        return self.journal.last_seq

    @property
    def ledger(self) -> Ledger:
        assert self.state.ledger is not None
        return self.state.ledger

    @property
    def arguments(self) -> tuple[Argument, ...]:
        return tuple(self.state.arguments.values())

    def argument_count(self) -> int:
        return len(self.state.arguments)

    def argument(self, argument_id: str) -> Argument:
        arg = self.state.arguments.get(argument_id)
        if arg is None:
            raise UnknownArgument(f"no argument {argument_id!r}")
        return arg

    def evidence_item(self, evidence_id: str) -> EvidenceItem:
        item = self.state.evidence.get(evidence_id)
        if item is None:
            raise UnknownEvidence(f"no evidence {evidence_id!r}")
        return item

    def exception(self, exception_id: str) -> ExceptionCondition:
        exc = self.state.exceptions.get(exception_id)
        if exc is None:
            raise UnknownException(f"no exception {exception_id!r}")
        return exc

    def retractable_items(self) -> tuple[str, ...]:
        return fusion_ops.retractable_items(self.arguments, self.ledger)

    def _fresh_id(self, prefix: str, taken) -> str:
        n = len(taken) + 1
        while f"{prefix}{n}" in taken:
            n += 1
        return f"{prefix}{n}"

    # --- journaled mutations ---

    def add_evidence(self, description: str, evidence_id: str | None = None) -> EvidenceItem:
        eid = evidence_id or self._fresh_id("E", self.state.evidence)
        if eid in self.state.evidence:
            raise DuplicateId(f"evidence id {eid!r} already exists")
        self._append(jn.EVIDENCE_ADDED, {
            "evidence_id": eid,
            "description": description,
            "reported_at": self.journal.last_seq + 1,
        })
        return self.state.evidence[eid]

    def add_argument(
        self,
        evidence_id: str,
        core,
        base_support: float,
        argument_id: str | None = None,
        exceptions: tuple[ExceptionCondition, ...] | list[ExceptionCondition] = (),
    ) -> Argument:
        aid = argument_id or self._fresh_id("A", self.state.arguments)
        core_labels = list(core.members) if hasattr(core, "members") else list(core)
        self._append(jn.ARGUMENT_ADDED, {
            "argument_id": aid,
            "evidence_id": evidence_id,
            "core": core_labels,
            "base_support": base_support,
            "exceptions": [jn.exception_to_payload(e) for e in exceptions],
        })
        return self.state.arguments[aid]

    def add_exception(
        self,
        argument_id: str,
        description: str,
        probability: float,
        impact: Impact,
        exception_id: str | None = None,
        status: ExceptionStatus = ExceptionStatus.ASSUMED_FALSE,
    ) -> ExceptionCondition:
        xid = exception_id or self._fresh_id("X", self.state.exceptions)
        payload = jn.exception_to_payload(ExceptionCondition(
            id=xid, description=description, probability=probability,
            impact=impact, status=status,
        ))
        payload["argument_id"] = argument_id
        self._append(jn.EXCEPTION_ADDED, payload)
        return self.state.exceptions[xid]

    def set_exception_status(self, exception_id: str, new_status: ExceptionStatus) -> None:
        current = self.exception(exception_id)
        self._append(jn.STATUS_CHANGED, {
            "exception_id": exception_id,
            "from": current.status.value,
            "to": new_status.value,
        })

    def commit_bottom_up(self, source, committed, amount: float) -> str:
        rid = self._fresh_id("L", {r.id for r in self.ledger.records})
        self._append(jn.LEDGER_COMMITTED, {
            "record_id": rid,
            "kind": "bottom-up",
            "source": list(self.frame.subset(source).members),
            "committed": list(self.frame.subset(committed).members),
            "amount": amount,
        })
        return rid

    def declare_fallback(self, precise, fallback, fraction: float) -> str:
        rid = self._fresh_id("L", {r.id for r in self.ledger.records})
        self._append(jn.LEDGER_COMMITTED, {
            "record_id": rid,
            "kind": "top-down",
            "precise": list(self.frame.subset(precise).members),
            "fallback": list(self.frame.subset(fallback).members),
            "fraction": fraction,
        })
        return rid

    def retract_ledger(self, record_id: str) -> None:
        self.ledger.record(record_id)  # UnknownRecord before journaling
        self._append(jn.LEDGER_RETRACTED, {"record_id": record_id})

    def retract(self, item_id: str) -> None:
        """Retract one assumption by id: an assumed-false exception goes
        active, an in-force ledger record is dropped."""
        if item_id in self.state.exceptions:
            self.set_exception_status(item_id, ExceptionStatus.ACTIVE)
        else:
            self.retract_ledger(item_id)

    # --- reads (never journaled) ---

    def fuse(self, include_pairwise: bool = True) -> FusionResult:
        return fusion_ops.fuse(self.frame, self.arguments, self.ledger,
                               include_pairwise=include_pairwise)

    def culpability(self, items: list[str] | None = None) -> CulpabilityReport:
        return fusion_ops.culpability(self.frame, self.arguments, self.ledger, items)

    def whatif(self, retract_ids: list[str]) -> FusionResult:
        """Hypothetical fusion with the given items retracted; state untouched."""
        args: tuple[Argument, ...] = self.arguments
        ledger: Ledger | None = self.ledger
        for item in retract_ids:
            args, ledger = fusion_ops.retract_item(args, ledger, item)
        return fusion_ops.fuse(self.frame, args, ledger)

    def value_of_question(self, question: list[tuple[float, Argument]]) -> VoiResult:
        return fusion_ops.value_of_question(self.frame, self.arguments, self.ledger, question)

    # --- journaled composites ---

    def snapshot_fusion(self) -> FusionResult:
        result = self.fuse()
        self._append(jn.FUSION_SNAPSHOT, fusion_view(self.frame, result))
        return result

    def apply_resolution_step(self, step: ResolutionStep) -> None:
        self._append(jn.RESOLUTION_STEP, {
            "step_index": step.index,
            "conflict_before": step.conflict_before,
            "item_id": step.item_id,
            "culpability": step.culpability,
            "conflict_after": step.conflict_after,
        })

    def resolve(self, policy: ResolutionPolicy | None = None) -> ResolutionTrace:
        return resolution_ops.resolve(self, policy)

    def resolve_step(self, policy: ResolutionPolicy | None = None,
                     step_index: int | None = None) -> StepOutcome:
        if step_index is None:
            step_index = sum(1 for r in self.journal.records
                             if r.kind == jn.RESOLUTION_STEP) + 1
        return resolution_ops.step(self, policy, step_index=step_index)

    # --- elicitation ---

    def start_elicitation(self, argument_id: str, max_rounds: int | None = None) -> str:
        arg = self.argument(argument_id)
        evidence = self.evidence_item(arg.evidence_id)
        from . import elicitation as el
        rounds = max_rounds if max_rounds is not None else el.DEFAULT_MAX_ROUNDS
        _, prompt = el.start(arg, evidence, max_rounds=rounds)
        self._append(jn.ELICITATION_PROMPT, {
            "argument_id": argument_id,
            "prompt": prompt,
            "max_rounds": rounds,
        })
        return prompt

    def submit_qualification(
        self,
        argument_id: str,
        description: str,
        probability: float,
        impact: Impact,
        exception_id: str | None = None,
    ) -> str:
        xid = exception_id or self._fresh_id("X", self.state.exceptions)
        self._append(jn.ELICITATION_RESPONSE, {
            "argument_id": argument_id,
            "exception_id": xid,
            "description": description,
            "probability": probability,
            "impact": jn.impact_to_payload(impact),
        })
        return self.state.elicitations[argument_id].current_prompt()

    def pass_elicitation(self, argument_id: str) -> None:
        self._append(jn.ELICITATION_RESPONSE, {"argument_id": argument_id, "pass": True})

    def active_elicitation(self, argument_id: str):
        return self.state.elicitations.get(argument_id)


# --- machine-readable views ----------------------------------------------

def mass_view(mass: MassFunction) -> list[dict]:
    return [
        {"subset": list(mass.frame.members(bits)), "mass": value}
        for bits, value in mass.focal
    ]


def fusion_view(frame: Frame, result: FusionResult) -> dict:
    beliefs = {}
    plausibilities = {}
    for label in frame.hypotheses:
        single = frame.singleton(label)
        beliefs[label] = result.fused.belief(single)
        plausibilities[label] = result.fused.plausibility(single)
    return {
        "conflict": result.conflict,
        "masses": mass_view(result.fused),
        "belief": beliefs,
        "plausibility": plausibilities,
        "pairwise_conflict": [
            {"arguments": list(pair), "conflict": value}
            for pair, value in sorted(result.pairwise_conflict.items())
        ],
        "contributing_arguments": list(result.contributing_arguments),
    }


def culpability_view(report: CulpabilityReport) -> dict:
    return {
        "conflict": report.conflict,
        "entries": [
            {
                "item": e.item_id,
                "culpability": e.culpability,
                "conflict_if_retracted": e.conflict_if_retracted,
            }
            for e in report.entries
        ],
    }


def voi_view(result: VoiResult) -> dict:
    return {
        "favored": result.favored,
        "flip_probability": result.flip_probability,
        "congruence": result.congruence,
        "answers": [
            {"probability": p, "map_after": m, "flips": f}
            for p, m, f in result.per_answer
        ],
    }


def argument_view(arg: Argument) -> dict:
    return {
        "id": arg.id,
        "evidence_id": arg.evidence_id,
        "core": list(arg.core_position.members),
        "base_support": arg.base_support,
        "exceptions": [jn.exception_to_payload(e) for e in arg.exceptions],
    }


def ledger_view(ledger: Ledger) -> list[dict]:
    return [
        {
            "id": r.id,
            "kind": r.kind.value,
            "source": list(r.source_set.members),
            "committed": list(r.committed_set.members),
            "amount": r.amount,
            "state": r.state.value,
        }
        for r in ledger.records
    ]


def session_view(session: Session, include_fusion: bool = True) -> dict:
    view = {
        "session_id": session.session_id,
        "version": session.version,
        "frame": list(session.frame.hypotheses),
        "evidence": [
            {"id": e.id, "description": e.description, "reported_at": e.reported_at}
            for e in session.state.evidence.values()
        ],
        "arguments": [argument_view(a) for a in session.arguments],
        "ledger_records": ledger_view(session.ledger),
        "retractable_items": list(session.retractable_items()),
        "elicitations": {
            aid: {
                "state": es.state.value,
                "round": es.round,
                "prompt": es.current_prompt() if es.state.value == "awaiting-response" else None,
                "transcript": [list(turn) for turn in es.transcript],
            }
            for aid, es in session.state.elicitations.items()
        },
    }
    if include_fusion:
        try:
            view["fusion"] = fusion_view(session.frame, session.fuse())
            view["fusion_error"] = None
        except Exception as err:  # TotalConflict keeps the rest of the view usable
            view["fusion"] = None
            view["fusion_error"] = {"error": type(err).__name__, "detail": str(err)}
    return view


def resolution_trace_view(trace: ResolutionTrace, frame: Frame) -> dict:
    return {
        "terminal": trace.terminal.value,
        "steps": [
            {
                "index": s.index,
                "conflict_before": s.conflict_before,
                "item": s.item_id,
                "culpability": s.culpability,
                "conflict_after": s.conflict_after,
            }
            for s in trace.steps
        ],
        "final": fusion_view(frame, trace.final),
        "culpability_report": (
            culpability_view(trace.culpability_report)
            if trace.culpability_report is not None else None
        ),
    }
