"""Dialogue that grows an argument's exception list.

The analyst is told that an infallible crystal ball declares the core
position false even though the evidence is true, and is asked what could
explain that.  Each explanation becomes a new exception condition (born
assumed false), and the next prompt adds it to the stack of things the
ball also declares false, pushing the analyst past the easy answers.

Prompts are a pure function of the argument and the transcript so far, so
recorded dialogues replay byte for byte.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .arguments import Argument, EvidenceItem
from .errors import BadProbability, RoundLimit, SessionClosed

DEFAULT_MAX_ROUNDS = 12  # guards against never settling down to a conclusion


class DialogueState(str, enum.Enum):
    AWAITING_RESPONSE = "awaiting-response"
    CLOSED = "closed"


@dataclass(frozen=True)
class ElicitationSession:
    argument_id: str
    core_text: str
    evidence_text: str
    negations: tuple[str, ...]          # qualification descriptions the ball denies
    transcript: tuple[tuple[str, str], ...] = ()
    state: DialogueState = DialogueState.AWAITING_RESPONSE
    max_rounds: int = DEFAULT_MAX_ROUNDS

    @property
    def round(self) -> int:
        return len(self.negations)

    def current_prompt(self) -> str:
        return render_prompt(self.core_text, self.evidence_text, self.negations)


def core_text_of(argument: Argument) -> str:
    return " or ".join(argument.core_position.members)


def render_prompt(core_text: str, evidence_text: str, negations: tuple[str, ...]) -> str:
    """Deterministic prompt for the given negation stack."""
    head = (
        f'An infallible crystal ball declares: the evidence "{evidence_text}" is true, '
        f'and yet the core position "{core_text}" is false'
    )
    if not negations:
        return head + ". What could explain this?"
    if len(negations) == 1:
        listing = f'qualification 1 ("{negations[0]}") is'
    else:
        numbered = ", ".join(f'{i + 1} ("{q}")' for i, q in enumerate(negations))
        listing = f"qualifications {numbered} are"
    return f"{head}, and {listing} also false. What else could explain this?"


def start(argument: Argument, evidence: EvidenceItem,
          max_rounds: int = DEFAULT_MAX_ROUNDS) -> tuple[ElicitationSession, str]:
    """Open a dialogue on the argument.

    Pre-existing exceptions seed the negation stack: the ball has, in
    effect, already denied them, and they count toward the round cap.
    """
    session = ElicitationSession(
        argument_id=argument.id,
        core_text=core_text_of(argument),
        evidence_text=evidence.description,
        negations=tuple(exc.description for exc in argument.exceptions),
        max_rounds=max_rounds,
    )
    prompt = session.current_prompt()
    session = replace(session, transcript=((prompt, ""),))
    return session, prompt


def record_qualification(
    session: ElicitationSession, description: str, probability: float
) -> tuple[ElicitationSession, str]:
    """Accept one explanation and produce the next prompt.

    The caller appends the matching exception condition to the argument;
    this function only advances the dialogue.
    """
    if session.state is not DialogueState.AWAITING_RESPONSE:
        raise SessionClosed("the dialogue is closed")
    if session.round >= session.max_rounds:
        raise RoundLimit(f"dialogue hit its cap of {session.max_rounds} qualifications")
    if not 0.0 <= probability <= 1.0:
        raise BadProbability(f"qualification probability {probability} outside [0, 1]")

    answered = session.transcript[:-1] + ((session.transcript[-1][0], description),)
    negations = session.negations + (description,)
    next_prompt = render_prompt(session.core_text, session.evidence_text, negations)
    session = replace(
        session,
        negations=negations,
        transcript=answered + ((next_prompt, ""),),
    )
    return session, next_prompt


def close(session: ElicitationSession, reason: str = "pass") -> ElicitationSession:
    """The analyst runs dry; the transcript is preserved, nothing is changed."""
    if session.state is not DialogueState.AWAITING_RESPONSE:
        raise SessionClosed("the dialogue is already closed")
    answered = session.transcript[:-1] + ((session.transcript[-1][0], reason),)
    return replace(session, state=DialogueState.CLOSED, transcript=answered)
