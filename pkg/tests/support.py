"""Shared test helpers: generators and independent oracles.

The oracles here deliberately avoid the library's compile/fuse code paths.
Fusion is checked against exhaustive enumeration over the truth assignments
of every exception condition in play (shared or private): conditioned on a
full assignment, each argument contributes a two-focal mass (conclusion at
base support, rest on the full frame), and those are multiplied out with
the raw intersection rule.  The enumeration is the definition; the library
is the optimization under test.
"""

from __future__ import annotations

import itertools
import random

from reckon.arguments import (
    Argument,
    ExceptionCondition,
    ExceptionStatus,
    Rebut,
    Undercut,
)
from reckon.belief import Frame, MassFunction
from reckon.ledger import Ledger


# --- independent fusion oracle -------------------------------------------

def oracle_conclusion_bits(arg: Argument, true_ids: set[str]) -> int:
    full = arg.frame.full_bits
    rebut_bits = full
    rebut_any = False
    for exc in arg.exceptions:
        if exc.id not in true_ids:
            continue
        if isinstance(exc.impact, Undercut):
            return full
        rebut_any = True
        rebut_bits &= exc.impact.target.bits
    if rebut_any:
        return rebut_bits if rebut_bits else full
    return arg.core_position.bits


def oracle_fuse(
    frame: Frame,
    arguments: list[Argument],
    ledger: Ledger | None = None,
    pinned: dict[str, bool] | None = None,
) -> dict[int, float]:
    """Unnormalized joint mass by brute force over all exception assignments."""
    pinned = pinned or {}
    unique: dict[str, ExceptionCondition] = {}
    for arg in arguments:
        for exc in arg.exceptions:
            unique.setdefault(exc.id, exc)
    ids = list(unique)

    ledger_focal = ledger.effective_mass().focal if ledger is not None else None

    acc: dict[int, float] = {}
    for values in itertools.product([False, True], repeat=len(ids)):
        weight = 1.0
        true_ids = set()
        for xid, val in zip(ids, values):
            if xid in pinned:
                p = 1.0 if pinned[xid] else 0.0
            else:
                exc = unique[xid]
                if exc.status is ExceptionStatus.ASSUMED_FALSE:
                    p = 0.0
                elif exc.status is ExceptionStatus.CONFIRMED_TRUE:
                    p = 1.0
                else:
                    p = exc.probability
            weight *= p if val else 1.0 - p
            if val:
                true_ids.add(xid)
        if weight == 0.0:
            continue
        joint = {frame.full_bits: 1.0}
        operands = []
        for arg in arguments:
            op = {oracle_conclusion_bits(arg, true_ids): arg.base_support}
            # conclusion may itself be the full frame; add, never overwrite
            op[frame.full_bits] = op.get(frame.full_bits, 0.0) + (1.0 - arg.base_support)
            operands.append(op)
        if ledger_focal is not None:
            operands.append(dict(ledger_focal))
        for op in operands:
            nxt: dict[int, float] = {}
            for b1, v1 in joint.items():
                for b2, v2 in op.items():
                    if v2 == 0.0:
                        continue
                    nxt[b1 & b2] = nxt.get(b1 & b2, 0.0) + v1 * v2
            joint = nxt
        for bits, value in joint.items():
            acc[bits] = acc.get(bits, 0.0) + weight * value
    return acc


def oracle_conflict(acc: dict[int, float]) -> float:
    empty = acc.get(0, 0.0)
    total = sum(acc.values())
    return empty / total if total else 1.0


def oracle_normalized(acc: dict[int, float]) -> dict[int, float]:
    surviving = {b: v for b, v in acc.items() if b != 0 and v > 0.0}
    denom = sum(surviving.values())
    return {b: v / denom for b, v in surviving.items()}


# --- random instance generators ------------------------------------------

LABEL_POOL = ["S1", "S2", "S3", "S4", "S5"]


def random_frame(rng: random.Random, max_size: int = 4) -> Frame:
    n = rng.randint(2, max_size)
    return Frame(id=f"frame{n}", hypotheses=tuple(LABEL_POOL[:n]))


def random_subset_bits(rng: random.Random, frame: Frame, nonempty: bool = True) -> int:
    while True:
        bits = rng.randrange(0, frame.full_bits + 1)
        if bits or not nonempty:
            return bits


def random_mass(rng: random.Random, frame: Frame, max_focal: int = 4) -> MassFunction:
    from reckon.belief import mass_new, HypothesisSubset

    k = rng.randint(1, max_focal)
    weights = [rng.random() for _ in range(k)]
    total = sum(weights)
    scale = rng.uniform(0.3, 1.0)  # leave some ignorance at times
    assignments = []
    for w in weights:
        bits = random_subset_bits(rng, frame)
        assignments.append((HypothesisSubset(frame, bits), scale * w / total))
    return mass_new(frame, assignments)


def random_exception(
    rng: random.Random,
    frame: Frame,
    xid: str,
    statuses=(ExceptionStatus.ASSUMED_FALSE, ExceptionStatus.ACTIVE,
              ExceptionStatus.CONFIRMED_TRUE),
    undercut_only: bool = False,
) -> ExceptionCondition:
    if undercut_only or rng.random() < 0.6:
        impact = Undercut()
    else:
        from reckon.belief import HypothesisSubset
        impact = Rebut(target=HypothesisSubset(frame, random_subset_bits(rng, frame)))
    return ExceptionCondition(
        id=xid,
        description=f"disruptor {xid}",
        probability=rng.choice([0.0, 1.0, rng.random(), rng.random()]),
        impact=impact,
        status=rng.choice(statuses),
    )


def random_arguments(
    rng: random.Random,
    frame: Frame,
    n_args: int,
    max_shared: int = 3,
    max_private: int = 3,
    undercut_only: bool = False,
    statuses=(ExceptionStatus.ASSUMED_FALSE, ExceptionStatus.ACTIVE,
              ExceptionStatus.CONFIRMED_TRUE),
) -> list[Argument]:
    from reckon.belief import HypothesisSubset

    shared: list[ExceptionCondition] = []
    if n_args >= 2:
        shared = [
            random_exception(rng, frame, f"shared{i}", statuses, undercut_only)
            for i in range(rng.randint(0, max_shared))
        ]
    args = []
    for a in range(n_args):
        excs: list[ExceptionCondition] = []
        if shared:
            take = rng.sample(shared, rng.randint(0, len(shared)))
            excs.extend(take)
        for p in range(rng.randint(0, max_private)):
            excs.append(
                random_exception(rng, frame, f"a{a}p{p}", statuses, undercut_only)
            )
        args.append(Argument(
            id=f"A{a + 1}",
            evidence_id=f"E{a + 1}",
            core_position=HypothesisSubset(frame, random_subset_bits(rng, frame)),
            base_support=rng.choice([1.0, rng.random(), rng.uniform(0.4, 0.99)]),
            exceptions=tuple(excs),
        ))
    # every shared exception should really be shared; attach strays to two args
    if n_args >= 2:
        for exc in shared:
            holders = [a for a in args if a.has_exception(exc.id)]
            if len(holders) == 1:
                others = [a for a in args if not a.has_exception(exc.id)]
                victim = rng.choice(others)
                args[args.index(victim)] = victim.with_exception(exc)
    return args
