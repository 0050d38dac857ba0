"""Frames of discernment and graded belief over their subsets.

A frame is a finite ordered set of mutually exclusive hypotheses.  Belief
is allocated as mass over *subsets* of the frame; mass on a non-singleton
subset expresses ignorance among its members, and mass on the full frame
is total ignorance.  The two standard readings of a mass function m:

    Bel(A) = sum of m(B) over nonempty B with B a subset of A
    Pl(A)  = sum of m(B) over B intersecting A

so Bel(A) <= Pl(A) and Pl(A) = 1 - Bel(complement of A).

Subsets are encoded as bitmasks over the frame's fixed hypothesis order.
A frame therefore holds at most 24 hypotheses, which keeps every subset
operation exact and cheap for the exhaustive enumeration the rest of the
engine is built on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadFrame,
    BadProbability,
    EmptySubsetAssignment,
    ForeignSubset,
    FrameMismatch,
    MassExceedsOne,
    NegativeMass,
    TotalConflict,
    UnknownHypothesis,
    ZeroDenominator,
)

MAX_HYPOTHESES = 24

# Invariant tolerance for mass sums; arithmetic identities are held to 1e-12.
SUM_TOL = 1e-9
CONFLICT_CEILING = 1.0 - 1e-12


@dataclass(frozen=True)
class Frame:
    """Ordered set of mutually exclusive, exhaustive hypotheses.

    The order is fixed at creation and never changes: subset encodings
    depend on it.
    """

    id: str
    hypotheses: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        n = len(self.hypotheses)
        if not 1 <= n <= MAX_HYPOTHESES:
            raise BadFrame(f"frame needs 1..{MAX_HYPOTHESES} hypotheses, got {n}")
        if any(not isinstance(h, str) or not h for h in self.hypotheses):
            raise BadFrame("hypothesis labels must be nonempty strings")
        if len(set(self.hypotheses)) != n:
            raise BadFrame("hypothesis labels must be unique")

    @property
    def size(self) -> int:
        return len(self.hypotheses)

    @property
    def full_bits(self) -> int:
        return (1 << len(self.hypotheses)) - 1

    def full(self) -> HypothesisSubset:
        return HypothesisSubset(self, self.full_bits)

    def empty(self) -> HypothesisSubset:
        return HypothesisSubset(self, 0)

    def singleton(self, label: str) -> HypothesisSubset:
        return self.subset((label,))

    def subset(self, labels) -> HypothesisSubset:
        bits = 0
        for label in labels:
            try:
                bits |= 1 << self.hypotheses.index(label)
            except ValueError:
                raise UnknownHypothesis(
                    f"{label!r} is not a hypothesis of frame {self.id!r}"
                ) from None
        return HypothesisSubset(self, bits)

    def members(self, bits: int) -> tuple[str, ...]:
        return tuple(h for i, h in enumerate(self.hypotheses) if bits >> i & 1)

    def singletons(self) -> tuple[HypothesisSubset, ...]:
        return tuple(HypothesisSubset(self, 1 << i) for i in range(len(self.hypotheses)))


@dataclass(frozen=True)
class HypothesisSubset:
    """A subset of one frame's hypotheses, with set equality semantics."""

    frame: Frame
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.frame.full_bits:
            raise BadFrame(f"subset bits {self.bits:#x} outside frame {self.frame.id!r}")

    @property
    def members(self) -> tuple[str, ...]:
        return self.frame.members(self.bits)

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.frame.full_bits

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, label: str) -> bool:
        return label in self.members

    def _check(self, other: HypothesisSubset) -> None:
        if self.frame != other.frame:
            raise FrameMismatch("subsets live on different frames")

    def complement(self) -> HypothesisSubset:
        return HypothesisSubset(self.frame, self.frame.full_bits & ~self.bits)

    def intersection(self, other: HypothesisSubset) -> HypothesisSubset:
        self._check(other)
        return HypothesisSubset(self.frame, self.bits & other.bits)

    def union(self, other: HypothesisSubset) -> HypothesisSubset:
        self._check(other)
        return HypothesisSubset(self.frame, self.bits | other.bits)

    def issubset(self, other: HypothesisSubset) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def is_proper_subset_of(self, other: HypothesisSubset) -> bool:
        return self.issubset(other) and self.bits != other.bits

    def __repr__(self) -> str:
        return "{" + ", ".join(self.members) + "}"


@dataclass(frozen=True)
class MassFunction:
    """Graded belief: positive masses over subsets, summing to one.

    ``focal`` is canonical: sorted by subset bits, every mass > 0.  When
    ``normalized`` no mass sits on the empty subset; an unnormalized mass
    function may carry empty-set mass (the conflict left by combination).
    """

    frame: Frame
    focal: tuple[tuple[int, float], ...]
    normalized: bool = True

    def mass(self, a: HypothesisSubset | int) -> float:
        bits = a.bits if isinstance(a, HypothesisSubset) else a
        for b, v in self.focal:
            if b == bits:
                return v
        return 0.0

    def masses(self) -> dict[int, float]:
        return dict(self.focal)

    def focal_subsets(self) -> tuple[tuple[HypothesisSubset, float], ...]:
        return tuple((HypothesisSubset(self.frame, b), v) for b, v in self.focal)

    @property
    def is_vacuous(self) -> bool:
        return self.focal == ((self.frame.full_bits, 1.0),)

    def _require_normalized(self) -> None:
        if not self.normalized:
            raise ValueError("operation requires a normalized mass function")

    def _require_on_frame(self, a: HypothesisSubset) -> None:
        if a.frame != self.frame:
            raise FrameMismatch("subset belongs to a different frame")

    def belief(self, a: HypothesisSubset) -> float:
        """Bel(a): mass provably inside a."""
        self._require_normalized()
        self._require_on_frame(a)
        if a.is_empty:
            raise EmptySubsetAssignment("belief of the empty subset is not queried")
        return sum((v for b, v in self.focal if b and b & ~a.bits == 0), 0.0)

    def plausibility(self, a: HypothesisSubset) -> float:
        """Pl(a): mass not provably outside a."""
        self._require_normalized()
        self._require_on_frame(a)
        if a.is_empty:
            raise EmptySubsetAssignment("plausibility of the empty subset is not queried")
        return sum((v for b, v in self.focal if b & a.bits), 0.0)

    def approx_eq(self, other: MassFunction, tol: float = SUM_TOL) -> bool:
        if self.frame != other.frame:
            return False
        keys = {b for b, _ in self.focal} | {b for b, _ in other.focal}
        return all(abs(self.mass(b) - other.mass(b)) <= tol for b in keys)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{{{', '.join(self.frame.members(b)) or ''}}}: {v:.6g}" for b, v in self.focal
        )
        return f"m[{inner}]"


def _build(frame: Frame, masses: dict[int, float], normalized: bool) -> MassFunction:
    focal = tuple(sorted((b, v) for b, v in masses.items() if v > 0.0))
    return MassFunction(frame=frame, focal=focal, normalized=normalized)


def vacuous(frame: Frame) -> MassFunction:
    """Total ignorance: all mass on the full frame."""
    return _build(frame, {frame.full_bits: 1.0}, normalized=True)


def mass_new(
    frame: Frame,
    assignments: list[tuple[HypothesisSubset, float]] | tuple[tuple[HypothesisSubset, float], ...],
) -> MassFunction:
    """Construct a normalized mass function from explicit assignments.

    Residual mass (one minus the assigned total) goes to the full frame as
    ignorance rather than being an error: elicited inputs rarely sum to one.
    """
    acc: dict[int, float] = {}
    total = 0.0
    for subset, m in assignments:
        if subset.frame != frame:
            raise ForeignSubset(f"subset {subset!r} belongs to frame {subset.frame.id!r}")
        if subset.is_empty:
            raise EmptySubsetAssignment("cannot assign mass to the empty subset")
        if m < 0.0:
            raise NegativeMass(f"mass {m} is negative")
        if m > 1.0:
            raise MassExceedsOne(f"mass {m} exceeds one")
        acc[subset.bits] = acc.get(subset.bits, 0.0) + m
        total += m
    if total > 1.0 + SUM_TOL:
        raise MassExceedsOne(f"assigned masses sum to {total}")
    residual = 1.0 - total
    if residual > 0.0:
        acc[frame.full_bits] = acc.get(frame.full_bits, 0.0) + residual
    return _build(frame, acc, normalized=True)


def combine_dempster(
    m1: MassFunction, m2: MassFunction, normalize: bool = True
) -> tuple[MassFunction, float]:
    """Combine two mass functions by product of masses on intersections.

    The conflict K is the mass landing on empty intersections before any
    renormalization.  With ``normalize`` the surviving masses are rescaled
    to sum to one (division by the surviving total, the numerically stable
    form of dividing by 1 - K); otherwise the empty subset keeps K.
    """
    if m1.frame != m2.frame:
        raise FrameMismatch("cannot combine masses over different frames")
    m1._require_normalized()
    m2._require_normalized()

    acc: dict[int, float] = {}
    for b1, v1 in m1.focal:
        for b2, v2 in m2.focal:
            inter = b1 & b2
            acc[inter] = acc.get(inter, 0.0) + v1 * v2

    conflict_raw = acc.pop(0, 0.0)
    surviving = sum(acc.values())
    total = conflict_raw + surviving
    conflict = conflict_raw / total if total > 0.0 else 1.0

    if not normalize:
        if conflict_raw > 0.0:
            acc[0] = conflict_raw
        return _build(m1.frame, acc, normalized=False), conflict

    if conflict >= CONFLICT_CEILING:
        raise TotalConflict(f"conflict {conflict} leaves nothing to renormalize")
    normalized = {b: v / surviving for b, v in acc.items()}
    return _build(m1.frame, normalized, normalized=True), conflict


def bayes_posterior(prior: float, like_given_h: float, like_given_not_h: float) -> float:
    """Posterior of h from a prior and the two conditional likelihoods.

    Plain consistency arithmetic: p*L / (p*L + (1-p)*L').  Exposed because
    the engine's reports contrast it with belief revision by assumption
    retraction, where these inputs are themselves up for reassessment.
    """
    for name, v in (("prior", prior), ("like_given_h", like_given_h),
                    ("like_given_not_h", like_given_not_h)):
        if not 0.0 <= v <= 1.0:
            raise BadProbability(f"{name} must be in [0, 1], got {v}")
    num = prior * like_given_h
    den = num + (1.0 - prior) * like_given_not_h
    if den <= 0.0:
        raise ZeroDenominator("prior and likelihoods leave a zero denominator")
    return num / den
