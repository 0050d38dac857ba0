"""Domain error taxonomy.

Every contract violation raised by this package derives from ReckonError,
so callers (CLI, service) can map the whole family to one exit path while
tests pin the precise class.
"""

from __future__ import annotations


class ReckonError(Exception):
    """Base class for all domain errors raised by this package."""


# --- frames and mass functions ---

class BadFrame(ReckonError):
    """Frame construction violated a structural invariant."""


class UnknownHypothesis(ReckonError):
    """A label does not belong to the frame."""


class FrameMismatch(ReckonError):
    """Operands built over different frames."""


class NegativeMass(ReckonError):
    """A mass assignment below zero."""


class MassExceedsOne(ReckonError):
    """A single mass above one, or assignments summing above one."""


class EmptySubsetAssignment(ReckonError):
    """A nonempty subset was required."""


class ForeignSubset(ReckonError):
    """A subset from another frame was passed in."""


class TotalConflict(ReckonError):
    """Combination left (almost) no surviving mass to renormalize."""


class ZeroDenominator(ReckonError):
    """Posterior undefined: prior and likelihoods annihilate."""


# --- arguments and exception conditions ---

class BadProbability(ReckonError):
    """Probability outside [0, 1]."""


class TooManyFreeExceptions(ReckonError):
    """Exact enumeration cap exceeded for one argument."""


class UnknownPinnedId(ReckonError):
    """Pinned an exception id the argument does not carry."""


class UnknownException(ReckonError):
    """No exception condition with that id."""


class UnknownEvidence(ReckonError):
    """No evidence item with that id."""


class UnknownArgument(ReckonError):
    """No argument with that id."""


class IllegalTransition(ReckonError):
    """Exception status transition not in the allowed lifecycle."""


class DuplicateId(ReckonError):
    """Identifier already in use within the session."""


# --- assumption ledger ---

class NotProperSubset(ReckonError):
    """Bottom-up commitment target must be a proper subset of its source."""


class NotProperSuperset(ReckonError):
    """Fallback must be a proper superset of the precise set."""


class InsufficientMass(ReckonError):
    """Not enough unreserved mass on the source set."""


class NoMassToMark(ReckonError):
    """Nothing (left) to mark retractable on the precise set."""


class UnknownRecord(ReckonError):
    """No ledger record with that id."""


class AlreadyRetracted(ReckonError):
    """The ledger record was retracted before."""


# --- fusion, culpability, value of information ---

class TooManySharedExceptions(ReckonError):
    """Joint conditioning cap exceeded across arguments."""


class NoConflict(ReckonError):
    """Culpability is undefined when the conflict mass is zero."""


class NotRetractable(ReckonError):
    """Item is not an assumed-false exception or an in-force ledger record."""


class BadAnswerDistribution(ReckonError):
    """Answer probabilities are negative or do not sum to one."""


# --- resolution and elicitation ---

class EmptySession(ReckonError):
    """Resolution needs at least one argument."""


class SessionClosed(ReckonError):
    """The elicitation dialogue is no longer accepting responses."""


class RoundLimit(ReckonError):
    """The elicitation dialogue hit its round cap."""


# --- journal and storage ---

class ValidationFailed(ReckonError):
    """A journal record does not validate against the replayed state."""


class StorageError(ReckonError):
    """The journal sink failed at the OS level."""


class MissingHeader(ReckonError):
    """Journal file empty or not starting with a session header."""


class VersionUnsupported(ReckonError):
    """Journal format version not understood."""


class CorruptRecord(ReckonError):
    """A journal line failed to parse or replay; carries line and seq."""

    def __init__(self, message: str, *, line: int | None = None, seq: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if seq is not None:
            where.append(f"seq {seq}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.seq = seq


class UnknownScenario(ReckonError):
    """No shipped scenario with that name."""


class LockHeld(ReckonError):
    """Another process holds the session file lock."""
