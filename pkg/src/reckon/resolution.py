"""The conflict-resolution control loop.

Conflict above the policy threshold is treated as a symptom that some
assumption is wrong.  Each step fuses, ranks every retractable item by
culpability, and retracts the single most culpable one (ties toward the
lexicographically smallest id), until conflict falls under the threshold,
no positively culpable item remains, or the step cap is hit.  Items with
culpability <= 0 are never auto-retracted: dropping them cannot reduce the
conflict, and with rebutting exceptions it can create more.  Firm belief
is never revised automatically; a firm conflict is a terminal report for
the human analyst.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Protocol

from .errors import BadProbability, EmptySession
from .fusion import CulpabilityReport, FusionResult


class Terminal(str, enum.Enum):
    RESOLVED = "resolved"
    FIRM_CONFLICT = "firm-conflict"
    STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class ResolutionPolicy:
    """Threshold below which residual conflict is accepted as chance."""

    tau: float = 0.05
    max_steps: int = 100

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise BadProbability(f"tau must be in [0, 1], got {self.tau}")
        if self.max_steps < 1:
            raise BadProbability(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class ResolutionStep:
    index: int
    conflict_before: float
    item_id: str
    culpability: float
    conflict_after: float


@dataclass(frozen=True)
class ResolutionTrace:
    steps: tuple[ResolutionStep, ...]
    terminal: Terminal
    final: FusionResult
    culpability_report: CulpabilityReport | None = None


@dataclass(frozen=True)
class StepOutcome:
    """One loop iteration: either a retraction step or the terminal verdict."""

    done: Terminal | None
    step: ResolutionStep | None
    fusion: FusionResult
    culpability_report: CulpabilityReport | None = None


class ResolvableSession(Protocol):
    """What the controller needs from a session; keeps this module loop-only."""

    def argument_count(self) -> int: ...
    def fuse(self, include_pairwise: bool = ...) -> FusionResult: ...
    def culpability(self) -> CulpabilityReport: ...
    def apply_resolution_step(self, step: ResolutionStep) -> None: ...


def step(session: ResolvableSession, policy: ResolutionPolicy | None = None,
         step_index: int = 1) -> StepOutcome:
    """Perform exactly one loop iteration against the live session state.

    Re-evaluates from scratch every time, so a manual retraction between
    steps is simply taken into account; there is no stale plan.
    """
    policy = policy or ResolutionPolicy()
    if session.argument_count() == 0:
        raise EmptySession("resolution needs at least one argument")

    result = session.fuse(include_pairwise=False)
    if result.conflict <= policy.tau:
        return StepOutcome(done=Terminal.RESOLVED, step=None, fusion=result)

    report = session.culpability()
    candidates = [e for e in report.entries if e.culpability > 0.0]
    if not candidates:
        return StepOutcome(
            done=Terminal.FIRM_CONFLICT, step=None, fusion=result,
            culpability_report=report,
        )
    best = candidates[0]  # entries are sorted by (-culpability, id)
    chosen = ResolutionStep(
        index=step_index,
        conflict_before=result.conflict,
        item_id=best.item_id,
        culpability=best.culpability,
        conflict_after=best.conflict_if_retracted,
    )
    session.apply_resolution_step(chosen)
    return StepOutcome(done=None, step=chosen, fusion=result, culpability_report=report)


def resolve(session: ResolvableSession, policy: ResolutionPolicy | None = None) -> ResolutionTrace:
    """Run the loop to a terminal state, applying every retraction to the session."""
    policy = policy or ResolutionPolicy()
    steps: list[ResolutionStep] = []
    while True:
        outcome = step(session, policy, step_index=len(steps) + 1)
        if outcome.done is not None:
            return ResolutionTrace(
                steps=tuple(steps),
                terminal=outcome.done,
                final=outcome.fusion,
                culpability_report=outcome.culpability_report,
            )
        assert outcome.step is not None
        steps.append(outcome.step)
        if len(steps) >= policy.max_steps:
            final = session.fuse(include_pairwise=False)
            if final.conflict <= policy.tau:
                return ResolutionTrace(steps=tuple(steps), terminal=Terminal.RESOLVED, final=final)
            return ResolutionTrace(steps=tuple(steps), terminal=Terminal.STEP_LIMIT, final=final)
