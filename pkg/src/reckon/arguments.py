"""Evidence, core positions, and exception conditions.

An argument records an analyst's first-blush reading of one evidence item:
a core position (the subset the evidence points at), a base support, and a
list of exception conditions, the disrupting factors under which the core
reading fails.  Undercutting exceptions void the argument back to total
ignorance; rebutting exceptions redirect its support to a target subset.

Compilation turns one argument into a mass function by exact enumeration
over the truth assignments of its live exceptions, treating exceptions as
independent.  Assumed-false exceptions contribute probability zero until
they are retracted (made active), which is what makes the compiled belief
a default, revisable reading rather than a fixed assessment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from . import belief
from .belief import Frame, HypothesisSubset, MassFunction
from .errors import (
    BadProbability,
    DuplicateId,
    EmptySubsetAssignment,
    FrameMismatch,
    IllegalTransition,
    TooManyFreeExceptions,
    UnknownException,
    UnknownPinnedId,
)

MAX_FREE_EXCEPTIONS = 20  # 2**20 assignments; exactness over scale


class ExceptionStatus(str, enum.Enum):
    ASSUMED_FALSE = "assumed-false"
    ACTIVE = "active"
    CONFIRMED_TRUE = "confirmed-true"


# Allowed lifecycle moves. Assumed-false is the default; making one active
# is the retraction of a default assumption. Confirmed-true is terminal.
_LEGAL_TRANSITIONS = {
    (ExceptionStatus.ASSUMED_FALSE, ExceptionStatus.ACTIVE),
    (ExceptionStatus.ASSUMED_FALSE, ExceptionStatus.CONFIRMED_TRUE),
    (ExceptionStatus.ACTIVE, ExceptionStatus.CONFIRMED_TRUE),
    (ExceptionStatus.ACTIVE, ExceptionStatus.ASSUMED_FALSE),
}


@dataclass(frozen=True)
class Undercut:
    """When true, the whole argument is void: conclusion falls to the full frame."""

    kind = "undercut"


@dataclass(frozen=True)
class Rebut:
    """When true, support is redirected to the target subset."""

    target: HypothesisSubset
    kind = "rebut"

    def __post_init__(self) -> None:
        if self.target.is_empty:
            raise EmptySubsetAssignment("rebut target must be nonempty")


Impact = Undercut | Rebut


@dataclass(frozen=True)
class EvidenceItem:
    id: str
    description: str
    reported_at: int


@dataclass(frozen=True)
class ExceptionCondition:
    """A disrupting factor: its chance of holding, its impact, its status."""

    id: str
    description: str
    probability: float
    impact: Impact
    status: ExceptionStatus = ExceptionStatus.ASSUMED_FALSE

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise BadProbability(f"exception probability {self.probability} outside [0, 1]")

    @property
    def retractable(self) -> bool:
        # Retraction means moving to ACTIVE, so only the default state qualifies.
        return self.status is ExceptionStatus.ASSUMED_FALSE

    def effective_probability(self) -> float:
        if self.status is ExceptionStatus.ASSUMED_FALSE:
            return 0.0
        if self.status is ExceptionStatus.CONFIRMED_TRUE:
            return 1.0
        return self.probability

    def agrees_with(self, other: ExceptionCondition) -> bool:
        """Shared ids must denote one underlying condition."""
        return (
            self.id == other.id
            and self.probability == other.probability
            and self.impact == other.impact
            and self.status == other.status
        )


@dataclass(frozen=True)
class Argument:
    id: str
    evidence_id: str
    core_position: HypothesisSubset
    base_support: float
    exceptions: tuple[ExceptionCondition, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "exceptions", tuple(self.exceptions))
        if self.core_position.is_empty:
            raise EmptySubsetAssignment("core position must be nonempty")
        if not 0.0 <= self.base_support <= 1.0:
            raise BadProbability(f"base support {self.base_support} outside [0, 1]")
        ids = [e.id for e in self.exceptions]
        if len(set(ids)) != len(ids):
            raise DuplicateId(f"argument {self.id!r} repeats an exception id")
        for exc in self.exceptions:
            if isinstance(exc.impact, Rebut) and exc.impact.target.frame != self.frame:
                raise FrameMismatch(
                    f"rebut target of {exc.id!r} is not on the argument's frame"
                )

    @property
    def frame(self) -> Frame:
        return self.core_position.frame

    def exception(self, exception_id: str) -> ExceptionCondition:
        for exc in self.exceptions:
            if exc.id == exception_id:
                return exc
        raise UnknownException(f"argument {self.id!r} has no exception {exception_id!r}")

    def has_exception(self, exception_id: str) -> bool:
        return any(e.id == exception_id for e in self.exceptions)

    def with_exception(self, exc: ExceptionCondition) -> Argument:
        return replace(self, exceptions=self.exceptions + (exc,))

    def replace_exception(self, exc: ExceptionCondition) -> Argument:
        out = tuple(exc if e.id == exc.id else e for e in self.exceptions)
        return replace(self, exceptions=out)


def set_exception_status(
    arg: Argument, exception_id: str, new_status: ExceptionStatus
) -> Argument:
    """Move one exception along its lifecycle; no-op moves are rejected.

    Sessions propagate the change to every argument sharing the id; this
    function handles a single argument value.
    """
    exc = arg.exception(exception_id)
    if (exc.status, new_status) not in _LEGAL_TRANSITIONS:
        raise IllegalTransition(
            f"exception {exception_id!r}: {exc.status.value} -> {new_status.value}"
        )
    return arg.replace_exception(replace(exc, status=new_status))


def _conclusion_bits(
    arg: Argument, undercut_true: bool, rebut_bits: int, rebut_any: bool
) -> int:
    full = arg.frame.full_bits
    if undercut_true:
        return full
    if rebut_any:
        # Simultaneous rebutters intersect their targets; an empty
        # intersection degrades to ignorance, never to contradiction.
        return rebut_bits if rebut_bits else full
    return arg.core_position.bits


def compile_argument(
    arg: Argument, pinned: dict[str, bool] | None = None
) -> MassFunction:
    """Compile an argument into a normalized mass function.

    Each exception's effective truth probability is 0 when assumed false,
    its assessed probability when active, and 1 when confirmed true; a
    pinned value overrides all of that.  Exceptions are independent, so the
    compiled mass is the base support spread over the conclusions of every
    truth assignment, weighted by its Bernoulli probability, with the
    remaining 1 - base_support going to the full frame.
    """
    pinned = pinned or {}
    for pid in pinned:
        if not arg.has_exception(pid):
            raise UnknownPinnedId(f"argument {arg.id!r} has no exception {pid!r} to pin")

    certain_undercut = False
    certain_rebut_bits = arg.frame.full_bits
    certain_rebut_any = False
    free: list[ExceptionCondition] = []
    for exc in arg.exceptions:
        if exc.id in pinned:
            p = 1.0 if pinned[exc.id] else 0.0
        else:
            p = exc.effective_probability()
        if p == 0.0:
            continue
        if p == 1.0:
            if isinstance(exc.impact, Undercut):
                certain_undercut = True
            else:
                certain_rebut_any = True
                certain_rebut_bits &= exc.impact.target.bits
            continue
        free.append(exc)

    if len(free) > MAX_FREE_EXCEPTIONS:
        raise TooManyFreeExceptions(
            f"{len(free)} free exceptions on {arg.id!r}, cap is {MAX_FREE_EXCEPTIONS}"
        )

    acc: dict[int, float] = {}

    def walk(i: int, prob: float, undercut_true: bool, rebut_bits: int, rebut_any: bool) -> None:
        if i == len(free):
            bits = _conclusion_bits(arg, undercut_true, rebut_bits, rebut_any)
            acc[bits] = acc.get(bits, 0.0) + prob
            return
        exc = free[i]
        p = exc.effective_probability()  # free implies unpinned, 0 < p < 1
        # exception true
        if isinstance(exc.impact, Undercut):
            walk(i + 1, prob * p, True, rebut_bits, rebut_any)
        else:
            walk(i + 1, prob * p, undercut_true, rebut_bits & exc.impact.target.bits, True)
        # exception false
        walk(i + 1, prob * (1.0 - p), undercut_true, rebut_bits, rebut_any)

    walk(0, 1.0, certain_undercut, certain_rebut_bits, certain_rebut_any)

    full = arg.frame.full_bits
    masses = {bits: arg.base_support * p for bits, p in acc.items()}
    residual = 1.0 - arg.base_support
    if residual > 0.0:
        masses[full] = masses.get(full, 0.0) + residual
    return belief._build(arg.frame, masses, normalized=True)
