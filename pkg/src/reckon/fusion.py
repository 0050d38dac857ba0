"""Fusing arguments, quantifying conflict, attributing culpability.

Fusion combines the compiled arguments (and, when present, the assumption
ledger's effective mass) by the product-intersection rule, but conditions
exactly on every exception condition shared between arguments: for each
joint truth assignment of the shared live exceptions, the arguments are
compiled with those values pinned and combined unnormalized, and the
resulting masses are averaged under the assignment's Bernoulli weight.
Private exceptions are marginalized inside compilation; because the
unnormalized product is bilinear, that is exactly equivalent to
enumerating them jointly, so independence is never silently assumed where
a shared condition correlates two lines of reasoning.

The conflict K is the joint mass landing on the empty set before the one
final renormalization: the probability weight of outcomes in which the
arguments contradict each other outright.  Culpability of a retractable
item is the share of K that disappears when that single item is
hypothetically retracted, (K - K_item) / K: a diagnosis of which
assumption most likely produced the contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import belief
from .arguments import Argument, ExceptionCondition, ExceptionStatus, compile_argument
from .belief import CONFLICT_CEILING, Frame, MassFunction
from .errors import (
    BadAnswerDistribution,
    FrameMismatch,
    NoConflict,
    NotRetractable,
    TooManySharedExceptions,
    TotalConflict,
    ValidationFailed,
)
from .ledger import Ledger

MAX_SHARED_EXCEPTIONS = 16  # 65,536 joint assignments, still exact


@dataclass(frozen=True)
class FusionResult:
    fused: MassFunction
    conflict: float
    pairwise_conflict: dict[tuple[str, str], float]
    contributing_arguments: tuple[str, ...]


@dataclass(frozen=True)
class CulpabilityEntry:
    item_id: str
    culpability: float
    conflict_if_retracted: float


@dataclass(frozen=True)
class CulpabilityReport:
    """Per-assumption share of the current conflict, most culpable first."""

    conflict: float
    entries: tuple[CulpabilityEntry, ...]


@dataclass(frozen=True)
class VoiResult:
    """Value of asking a question, under the change-of-mind reading.

    flip_probability is the chance some answer would dethrone the current
    best hypothesis; congruence is merely the probability of the designated
    positive answer.  Reporting both side by side makes it visible when a
    comfortably congruent question cannot change anyone's mind.
    """

    favored: str
    flip_probability: float
    congruence: float
    per_answer: tuple[tuple[float, str | None, bool], ...]


def _check_shared_agreement(arguments: list[Argument] | tuple[Argument, ...]) -> None:
    seen: dict[str, ExceptionCondition] = {}
    for arg in arguments:
        for exc in arg.exceptions:
            prior = seen.get(exc.id)
            if prior is None:
                seen[exc.id] = exc
            elif not prior.agrees_with(exc):
                raise ValidationFailed(
                    f"exception {exc.id!r} disagrees across arguments sharing it"
                )


def _shared_free_exceptions(arguments) -> list[ExceptionCondition]:
    counts: dict[str, int] = {}
    first: dict[str, ExceptionCondition] = {}
    order: list[str] = []
    for arg in arguments:
        for exc in arg.exceptions:
            counts[exc.id] = counts.get(exc.id, 0) + 1
            if exc.id not in first:
                first[exc.id] = exc
                order.append(exc.id)
    return [
        first[i]
        for i in order
        if counts[i] >= 2 and 0.0 < first[i].effective_probability() < 1.0
    ]


def _raw_product(operands: list[MassFunction], frame: Frame) -> dict[int, float]:
    acc = {frame.full_bits: 1.0}
    for m in operands:
        nxt: dict[int, float] = {}
        for b1, v1 in acc.items():
            for b2, v2 in m.focal:
                inter = b1 & b2
                nxt[inter] = nxt.get(inter, 0.0) + v1 * v2
        acc = nxt
    return acc


def _joint_unnormalized(
    frame: Frame,
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None,
) -> dict[int, float]:
    for arg in arguments:
        if arg.frame != frame:
            raise FrameMismatch(f"argument {arg.id!r} is not on the session frame")
    if ledger is not None and ledger.base.frame != frame:
        raise FrameMismatch("ledger is not on the session frame")
    _check_shared_agreement(arguments)

    shared = _shared_free_exceptions(arguments)
    if len(shared) > MAX_SHARED_EXCEPTIONS:
        raise TooManySharedExceptions(
            f"{len(shared)} shared live exceptions, cap is {MAX_SHARED_EXCEPTIONS}"
        )

    ledger_mass = ledger.effective_mass() if ledger is not None else None
    acc: dict[int, float] = {}
    for assignment in range(1 << len(shared)):
        weight = 1.0
        pinned: dict[str, bool] = {}
        for i, exc in enumerate(shared):
            true = bool(assignment >> i & 1)
            p = exc.effective_probability()
            weight *= p if true else 1.0 - p
            pinned[exc.id] = true
        if weight == 0.0:
            continue
        operands = [
            compile_argument(arg, {k: v for k, v in pinned.items() if arg.has_exception(k)})
            for arg in arguments
        ]
        if ledger_mass is not None:
            operands.append(ledger_mass)
        for bits, mass in _raw_product(operands, frame).items():
            acc[bits] = acc.get(bits, 0.0) + weight * mass
    return acc


def _conflict_of(acc: dict[int, float]) -> float:
    empty = acc.get(0, 0.0)
    total = sum(acc.values())
    return empty / total if total > 0.0 else 1.0


def fuse(
    frame: Frame,
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None = None,
    *,
    include_pairwise: bool = True,
) -> FusionResult:
    """Combine all arguments (plus the ledger mass) into one fused belief."""
    acc = _joint_unnormalized(frame, arguments, ledger)
    conflict = _conflict_of(acc)
    if conflict >= CONFLICT_CEILING:
        raise TotalConflict(f"joint conflict {conflict} leaves nothing to renormalize")
    surviving = {b: v for b, v in acc.items() if b != 0}
    denom = sum(surviving.values())
    fused = belief._build(frame, {b: v / denom for b, v in surviving.items()}, normalized=True)

    pairwise: dict[tuple[str, str], float] = {}
    if include_pairwise:
        args = list(arguments)
        for i in range(len(args)):
            for j in range(i + 1, len(args)):
                pair_acc = _joint_unnormalized(frame, [args[i], args[j]], None)
                pairwise[(args[i].id, args[j].id)] = _conflict_of(pair_acc)
    return FusionResult(
        fused=fused,
        conflict=conflict,
        pairwise_conflict=pairwise,
        contributing_arguments=tuple(a.id for a in arguments),
    )


def conflict_only(
    frame: Frame,
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None = None,
) -> float:
    """The joint conflict K without normalizing, so it is defined even at K ~ 1."""
    return _conflict_of(_joint_unnormalized(frame, arguments, ledger))


# --- retractable items -------------------------------------------------

def retractable_items(
    arguments: tuple[Argument, ...] | list[Argument], ledger: Ledger | None
) -> tuple[str, ...]:
    """Assumed-false exceptions (deduplicated) plus in-force ledger records."""
    out: list[str] = []
    seen: set[str] = set()
    for arg in arguments:
        for exc in arg.exceptions:
            if exc.retractable and exc.id not in seen:
                seen.add(exc.id)
                out.append(exc.id)
    if ledger is not None:
        out.extend(ledger.retractable_ids())
    return tuple(out)


def retract_item(
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None,
    item_id: str,
) -> tuple[tuple[Argument, ...], Ledger | None]:
    """Hypothetically retract one item: exception defaults become active,
    ledger records are dropped.  Inputs are values; originals are untouched."""
    touched = False
    new_args: list[Argument] = []
    for arg in arguments:
        if arg.has_exception(item_id):
            exc = arg.exception(item_id)
            if not exc.retractable:
                raise NotRetractable(f"exception {item_id!r} is not assumed false")
            new_args.append(
                arg.replace_exception(replace(exc, status=ExceptionStatus.ACTIVE))
            )
            touched = True
        else:
            new_args.append(arg)
    if touched:
        return tuple(new_args), ledger
    if ledger is not None and ledger.has_record(item_id):
        return tuple(arguments), ledger.retract(item_id)
    raise NotRetractable(f"no retractable item {item_id!r}")


def culpability(
    frame: Frame,
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None = None,
    items: list[str] | None = None,
) -> CulpabilityReport:
    """Rank retractable items by the share of conflict their retraction removes.

    Negative culpability is possible when rebutting exceptions are present
    (a retraction can create conflict); the sign is preserved and reported.
    """
    base_k = conflict_only(frame, arguments, ledger)
    if base_k <= 0.0:
        raise NoConflict("culpability is undefined with zero conflict")
    if items is None:
        items = list(retractable_items(arguments, ledger))
    entries = []
    for item in items:
        args_r, ledger_r = retract_item(arguments, ledger, item)
        k_item = conflict_only(frame, args_r, ledger_r)
        entries.append(
            CulpabilityEntry(
                item_id=item,
                culpability=(base_k - k_item) / base_k,
                conflict_if_retracted=k_item,
            )
        )
    entries.sort(key=lambda e: (-e.culpability, e.item_id))
    return CulpabilityReport(conflict=base_k, entries=tuple(entries))


# --- value of information ---------------------------------------------

def _map_hypothesis(frame: Frame, fused: MassFunction) -> str:
    beliefs = {label: fused.belief(frame.singleton(label)) for label in frame.hypotheses}
    best = max(beliefs.values())
    # exact ties break toward the lexicographically smallest label
    return min(label for label, b in beliefs.items() if b == best)


def value_of_question(
    frame: Frame,
    arguments: tuple[Argument, ...] | list[Argument],
    ledger: Ledger | None,
    question: list[tuple[float, Argument]],
) -> VoiResult:
    """Score a candidate question by its chance of changing the best hypothesis.

    The question is a distribution over answers, each carrying the argument
    that answer would add.  Answer index 0 is, by convention, the question's
    designated positive answer; its probability is reported as congruence.
    """
    if not question:
        raise BadAnswerDistribution("a question needs at least one answer")
    probs = [p for p, _ in question]
    if any(p < 0.0 for p in probs):
        raise BadAnswerDistribution("answer probabilities must be nonnegative")
    if abs(sum(probs) - 1.0) > belief.SUM_TOL:
        raise BadAnswerDistribution(f"answer probabilities sum to {sum(probs)}")
    for _, ans in question:
        if ans.frame != frame:
            raise FrameMismatch(f"answer argument {ans.id!r} is not on the session frame")

    current = fuse(frame, arguments, ledger, include_pairwise=False)
    favored = _map_hypothesis(frame, current.fused)

    flip = 0.0
    per_answer: list[tuple[float, str | None, bool]] = []
    for p, ans in question:
        try:
            after = fuse(frame, list(arguments) + [ans], ledger, include_pairwise=False)
            map_after: str | None = _map_hypothesis(frame, after.fused)
            flips = map_after != favored
        except TotalConflict:
            # An answer that annihilates the current view certainly changes it.
            map_after = None
            flips = True
        if flips:
            flip += p
        per_answer.append((p, map_after, flips))
    return VoiResult(
        favored=favored,
        flip_probability=flip,
        congruence=question[0][0],
        per_answer=tuple(per_answer),
    )
