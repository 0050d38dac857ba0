"""Retractable belief commitments beyond firm knowledge.

Two complementary moves over a firm base mass:

* bottom-up: move mass from a set onto a proper subset now (a sharpening
  assumption); retraction returns it.
* top-down: mark a fraction of the mass sitting on a precise set as soft,
  naming the less precise superset it falls back to; nothing moves until
  the record is retracted.

Either way, retraction transfers mass toward a superset, which is exactly
what widens belief intervals when conflict forces a climb-down.

The marked amounts of in-force top-down records are treated as reserved:
later commitments cannot spend them.  That reservation is what guarantees
no retraction order can ever drive a focal mass negative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from . import belief
from .belief import HypothesisSubset, MassFunction
from .errors import (
    AlreadyRetracted,
    BadProbability,
    EmptySubsetAssignment,
    FrameMismatch,
    InsufficientMass,
    NoMassToMark,
    NotProperSubset,
    NotProperSuperset,
    UnknownRecord,
)


class AssumptionKind(str, enum.Enum):
    BOTTOM_UP = "bottom-up"
    TOP_DOWN = "top-down"


class RecordState(str, enum.Enum):
    IN_FORCE = "in-force"
    RETRACTED = "retracted"


@dataclass(frozen=True)
class AssumptionRecord:
    """One retractable transfer.

    committed_set is always the more precise set and source_set its proper
    superset.  Bottom-up: the transfer source -> committed happened at
    commit time and retraction reverses it.  Top-down: committed is the
    precise set the mass sits on, source is the fallback, and the transfer
    committed -> source happens only at retraction.
    """

    id: str
    kind: AssumptionKind
    source_set: HypothesisSubset
    committed_set: HypothesisSubset
    amount: float
    state: RecordState = RecordState.IN_FORCE


@dataclass(frozen=True)
class Ledger:
    base: MassFunction
    records: tuple[AssumptionRecord, ...] = ()

    def record(self, record_id: str) -> AssumptionRecord:
        for rec in self.records:
            if rec.id == record_id:
                return rec
        raise UnknownRecord(f"no ledger record {record_id!r}")

    def has_record(self, record_id: str) -> bool:
        return any(r.id == record_id for r in self.records)

    def in_force_records(self) -> tuple[AssumptionRecord, ...]:
        return tuple(r for r in self.records if r.state is RecordState.IN_FORCE)

    def retractable_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.in_force_records())

    def _effective(self) -> dict[int, float]:
        masses = self.base.masses()

        def move(frm: int, to: int, amount: float) -> None:
            masses[frm] = masses.get(frm, 0.0) - amount
            masses[to] = masses.get(to, 0.0) + amount
            if masses[frm] < 0.0:
                if masses[frm] < -belief.SUM_TOL:
                    raise InsufficientMass("ledger transfers drove a mass negative")
                masses[frm] = 0.0

        for rec in self.records:
            if rec.kind is AssumptionKind.BOTTOM_UP and rec.state is RecordState.IN_FORCE:
                move(rec.source_set.bits, rec.committed_set.bits, rec.amount)
            elif rec.kind is AssumptionKind.TOP_DOWN and rec.state is RecordState.RETRACTED:
                move(rec.committed_set.bits, rec.source_set.bits, rec.amount)
        return masses

    def effective_mass(self) -> MassFunction:
        """Firm base with every in-force commitment applied, in order."""
        return belief._build(self.base.frame, self._effective(), normalized=True)

    def _held(self, bits: int) -> float:
        """Mass on the set that an in-force record will reclaim on retraction.

        Top-down marks on the set, plus bottom-up amounts committed into it.
        Keeping this much untouched is what makes every retraction order safe.
        """
        held = 0.0
        for r in self.records:
            if r.state is not RecordState.IN_FORCE:
                continue
            if r.kind is AssumptionKind.TOP_DOWN and r.committed_set.bits == bits:
                held += r.amount
            elif r.kind is AssumptionKind.BOTTOM_UP and r.committed_set.bits == bits:
                held += r.amount
        return held

    def available_mass(self, subset: HypothesisSubset) -> float:
        """Effective mass on the exact set minus what in-force records hold there."""
        return self._effective().get(subset.bits, 0.0) - self._held(subset.bits)

    def _check_frame(self, subset: HypothesisSubset) -> None:
        if subset.frame != self.base.frame:
            raise FrameMismatch("subset is not on the ledger's frame")

    def _next_id(self) -> str:
        return f"L{len(self.records) + 1}"

    def commit_bottom_up(
        self,
        source: HypothesisSubset,
        committed: HypothesisSubset,
        amount: float,
        record_id: str | None = None,
    ) -> tuple[Ledger, str]:
        """Sharpen: move `amount` from source onto a proper subset of it."""
        self._check_frame(source)
        self._check_frame(committed)
        if committed.is_empty:
            raise EmptySubsetAssignment("cannot commit mass to the empty subset")
        if not committed.is_proper_subset_of(source):
            raise NotProperSubset(f"{committed!r} is not a proper subset of {source!r}")
        if amount <= 0.0:
            raise InsufficientMass(f"amount must be > 0, got {amount}")
        if self.available_mass(source) < amount - 1e-12:
            raise InsufficientMass(
                f"source {source!r} holds {self.available_mass(source):.12g} unreserved, "
                f"needed {amount}"
            )
        rid = record_id or self._next_id()
        rec = AssumptionRecord(
            id=rid,
            kind=AssumptionKind.BOTTOM_UP,
            source_set=source,
            committed_set=committed,
            amount=amount,
        )
        return replace(self, records=self.records + (rec,)), rid

    def declare_fallback(
        self,
        precise: HypothesisSubset,
        fallback: HypothesisSubset,
        fraction: float,
        record_id: str | None = None,
    ) -> tuple[Ledger, str]:
        """Mark a fraction of the mass on `precise` as soft toward `fallback`."""
        self._check_frame(precise)
        self._check_frame(fallback)
        if not precise.is_proper_subset_of(fallback):
            raise NotProperSuperset(f"{fallback!r} is not a proper superset of {precise!r}")
        if not 0.0 < fraction <= 1.0:
            raise BadProbability(f"fraction must be in (0, 1], got {fraction}")
        current = self._effective().get(precise.bits, 0.0)
        if current <= 0.0:
            raise NoMassToMark(f"no mass sits on {precise!r}")
        amount = fraction * current
        if amount > self.available_mass(precise) + 1e-12:
            raise NoMassToMark(
                f"{precise!r} holds {current:.12g} but only "
                f"{self.available_mass(precise):.12g} of it is unheld; "
                "declare smaller records for granularity"
            )
        rid = record_id or self._next_id()
        rec = AssumptionRecord(
            id=rid,
            kind=AssumptionKind.TOP_DOWN,
            source_set=fallback,
            committed_set=precise,
            amount=amount,
        )
        return replace(self, records=self.records + (rec,)), rid

    def retract(self, record_id: str) -> Ledger:
        """Drop one assumption; bottom-up transfers return, top-down marks fall back."""
        rec = self.record(record_id)
        if rec.state is RecordState.RETRACTED:
            raise AlreadyRetracted(f"ledger record {record_id!r} was already retracted")
        out = tuple(
            replace(r, state=RecordState.RETRACTED) if r.id == record_id else r
            for r in self.records
        )
        return replace(self, records=out)
