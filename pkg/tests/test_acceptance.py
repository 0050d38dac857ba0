"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run as:  pytest tests/test_acceptance.py -v -s
"""

import functools
import json
import random
import time
from pathlib import Path

import pytest

from reckon.arguments import ExceptionCondition, ExceptionStatus, Undercut, compile_argument
from reckon.belief import Frame, bayes_posterior, combine_dempster, vacuous
from reckon.errors import CorruptRecord, TotalConflict
from reckon.fusion import conflict_only, fuse
from reckon.resolution import Terminal
from reckon.session import Session
from reckon.scenarios import load_scenario

from support import (
    oracle_conflict,
    oracle_fuse,
    oracle_normalized,
    random_arguments,
    random_frame,
    random_mass,
)

GOLDEN = Path(__file__).parent / "golden"


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {name}")
                raise
            print(f"[PASS] {name}")
        return wrapper
    return decorate


@criterion("zadeh pathology: K = .9999 and 100% belief in the shared longshot")
def test_zadeh_pathology():
    start = time.perf_counter()
    s = load_scenario("zadeh-pathology")
    result = s.fuse()
    elapsed = time.perf_counter() - start
    assert result.conflict == pytest.approx(0.9999, abs=1e-9)
    assert result.fused.belief(s.frame.singleton("S2")) == pytest.approx(1.0, abs=1e-9)
    assert elapsed < 1.0


@criterion("extreme odds: certainty against 10^10:1 yields belief exactly 1.0")
def test_extreme_odds_pathology():
    start = time.perf_counter()
    s = load_scenario("extreme-odds")
    result = s.fuse()
    elapsed = time.perf_counter() - start
    assert result.fused.belief(s.frame.singleton("S")) == pytest.approx(1.0, abs=1e-12)
    assert elapsed < 1.0


@criterion("posterior demonstrations: .6923 and .9851, closed form to 1e-12")
def test_bayes_demonstration():
    first = bayes_posterior(0.9, 0.2, 0.8)
    assert first == pytest.approx(0.6923, abs=0.0005)
    assert first == pytest.approx((0.9 * 0.2) / (0.9 * 0.2 + 0.1 * 0.8), abs=1e-12)
    second = bayes_posterior(0.99, 0.4, 0.6)
    assert second == pytest.approx(0.9851, abs=0.0005)
    assert second == pytest.approx((0.99 * 0.4) / (0.99 * 0.4 + 0.01 * 0.6), abs=1e-12)


@criterion("crystal-ball fixture: 8 active .31 undercuts leave m(core) = .69^8")
def test_crystal_ball_fixture():
    frame = Frame(id="f", hypotheses=("core", "alt"))
    exceptions = tuple(
        ExceptionCondition(id=f"X{i}", description=f"q{i}", probability=0.31,
                           impact=Undercut(), status=ExceptionStatus.ACTIVE)
        for i in range(8)
    )
    from reckon.arguments import Argument
    a = Argument(id="A1", evidence_id="E1", core_position=frame.singleton("core"),
                 base_support=1.0, exceptions=exceptions)
    m = compile_argument(a)
    assert m.mass(frame.singleton("core")) == pytest.approx(0.051380, abs=1e-6)
    assert m.mass(frame.singleton("core")) == pytest.approx(0.69 ** 8, abs=1e-12)
    # the shipped scenario agrees
    s = load_scenario("crystal-ball-8")
    assert s.fuse().fused.mass(s.frame.singleton("attack")) == pytest.approx(
        0.69 ** 8, abs=1e-9)


@criterion("fusion equals exhaustive joint enumeration on 200+ random instances")
def test_fusion_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(20240101)
    checked = 0
    while checked < 200:
        frame = random_frame(rng)
        args = random_arguments(rng, frame, rng.randint(1, 3),
                                max_shared=3, max_private=3)
        acc = oracle_fuse(frame, args)
        expected_k = oracle_conflict(acc)
        assert conflict_only(frame, args) == pytest.approx(expected_k, abs=1e-9)
        if expected_k < 1.0 - 1e-9:
            result = fuse(frame, args, include_pairwise=False)
            expected = oracle_normalized(acc)
            seen = dict(result.fused.focal)
            for bits in set(expected) | set(seen):
                assert seen.get(bits, 0.0) == pytest.approx(
                    expected.get(bits, 0.0), abs=1e-9)
        checked += 1
    elapsed = time.perf_counter() - start
    assert checked >= 200
    assert elapsed < 60.0


@criterion("combination algebra: commutative, associative, vacuous identity")
def test_dempster_algebra_suite():
    rng = random.Random(777)
    pairs = triples = 0
    while pairs < 500 or triples < 500:
        frame = random_frame(rng)
        m1 = random_mass(rng, frame)
        m2 = random_mass(rng, frame)
        m3 = random_mass(rng, frame)
        ab, k_ab = combine_dempster(m1, m2)
        ba, k_ba = combine_dempster(m2, m1)
        assert k_ab == pytest.approx(k_ba, abs=1e-12)
        assert ab.approx_eq(ba, tol=1e-12)
        ident, k_i = combine_dempster(m1, vacuous(frame))
        assert k_i == 0.0
        assert ident.approx_eq(m1, tol=1e-12)
        pairs += 1
        try:
            left, _ = combine_dempster(ab, m3)
            inner, _ = combine_dempster(m2, m3)
            right, _ = combine_dempster(m1, inner)
        except TotalConflict:
            continue
        assert left.approx_eq(right, tol=1e-9)
        triples += 1


@criterion("resolution: monotone conflict, bounded steps, one-culprit in one step")
def test_resolution_behavior():
    # randomized undercut-only sessions
    rng = random.Random(4321)
    ran = 0
    while ran < 60:
        labels = ["S1", "S2", "S3"][: rng.randint(2, 3)]
        s = Session.create(labels, session_id="accept")
        xid = 0
        for i in range(rng.randint(1, 3)):
            ev = s.add_evidence(f"report {i}", evidence_id=f"E{i}")
            s.add_argument(ev.id, [labels[i % len(labels)]], rng.uniform(0.4, 0.98),
                           argument_id=f"A{i}")
            for _ in range(rng.randint(0, 3)):
                xid += 1
                s.add_exception(f"A{i}", f"cond {xid}", rng.uniform(0.05, 0.95),
                                Undercut(), exception_id=f"X{xid}")
                if rng.random() < 0.4:
                    s.set_exception_status(f"X{xid}", ExceptionStatus.ACTIVE)
        retractables = len(s.retractable_items())
        try:
            trace = s.resolve()
        except TotalConflict:
            continue
        assert len(trace.steps) <= retractables
        for step in trace.steps:
            assert step.conflict_after <= step.conflict_before + 1e-12
        assert trace.terminal in (Terminal.RESOLVED, Terminal.FIRM_CONFLICT)
        ran += 1

    # the one-culprit fixture
    s = Session.create(["S", "not-S"], session_id="one-culprit")
    e1 = s.add_evidence("supporting report", evidence_id="E1")
    s.add_argument(e1.id, ["S"], 0.9, argument_id="A1")
    e2 = s.add_evidence("opposing report", evidence_id="E2")
    s.add_argument(e2.id, ["not-S"], 1.0, argument_id="A2")
    s.add_exception("A2", "the opposing sensor was inoperative", 1.0, Undercut(),
                    exception_id="X-dead-sensor")
    report = s.culpability()
    assert report.entries[0].item_id == "X-dead-sensor"
    assert report.entries[0].culpability == pytest.approx(1.0, abs=1e-9)
    trace = s.resolve()
    assert trace.terminal is Terminal.RESOLVED
    assert len(trace.steps) == 1
    assert trace.steps[0].item_id == "X-dead-sensor"
    assert trace.steps[0].culpability == pytest.approx(1.0, abs=1e-9)


@criterion("journal round-trip: identical fusion after save/load; corruption is located")
def test_journal_round_trip(tmp_path):
    rng = random.Random(1212)
    for i in range(25):
        path = tmp_path / f"acc{i}.sedj"
        labels = ["S1", "S2", "S3"]
        s = Session.create(labels, session_id=f"acc{i}", path=path)
        xid = 0
        for a in range(rng.randint(1, 3)):
            ev = s.add_evidence(f"report {a}", evidence_id=f"E{a}")
            s.add_argument(ev.id, [rng.choice(labels)], rng.uniform(0.3, 0.95),
                           argument_id=f"A{a}")
            for _ in range(rng.randint(0, 2)):
                xid += 1
                s.add_exception(f"A{a}", f"cond {xid}", rng.uniform(0.1, 0.9),
                                Undercut(), exception_id=f"X{xid}")
                if rng.random() < 0.5:
                    s.set_exception_status(f"X{xid}", ExceptionStatus.ACTIVE)
        if rng.random() < 0.5:
            s.commit_bottom_up(labels, labels[:2], rng.uniform(0.05, 0.4))
        original = s.fuse()
        loaded = Session.load(path)
        replayed = loaded.fuse()
        assert replayed.conflict == pytest.approx(original.conflict, abs=1e-12)
        assert replayed.fused.approx_eq(original.fused, tol=1e-12)

    # corrupted line is named
    victim = tmp_path / "victim.sedj"
    s = Session.create(["a", "b"], session_id="victim", path=victim)
    s.add_evidence("fine record", evidence_id="E1")
    lines = victim.read_text().rstrip("\n").split("\n")
    lines[1] = lines[1][:10]
    victim.write_text("\n".join(lines) + "\n")
    with pytest.raises(CorruptRecord) as err:
        Session.load(victim)
    assert err.value.line == 2


@criterion("CLI golden transcripts: four scenarios byte-stable modulo timestamps")
def test_cli_golden_transcripts(run_cli, tmp_path):
    for name in ["zadeh-pathology", "extreme-odds", "crystal-ball-8", "attack-schema"]:
        path = str(tmp_path / f"{name}.sedj")
        assert run_cli("scenario", "load", name, path)[0] == 0
        for cmd in ["fuse", "status", "culpability"]:
            golden = GOLDEN / f"{name}.{cmd}.json"
            code, out, _ = run_cli(cmd, path, "--json")
            if not golden.exists():
                assert code != 0
                continue
            assert code == 0
            assert out == golden.read_text(), f"{name} {cmd} drifted from golden"
        code, out, _ = run_cli("export", path)
        assert code == 0
        normalized = []
        for line in out.strip().split("\n"):
            obj = json.loads(line)
            obj["at"] = "T"
            normalized.append(json.dumps(obj, sort_keys=True))
        assert "\n".join(normalized) + "\n" == (GOLDEN / f"{name}.export.jsonl").read_text()


@criterion("value of question: zero flip probability can coexist with high congruence")
def test_voi_contrast():
    frame = Frame(id="f", hypotheses=("S", "not-S"))
    from reckon.arguments import Argument
    settled = Argument(id="A1", evidence_id="E1",
                       core_position=frame.singleton("S"), base_support=0.99)
    confirming = Argument(id="ANS-yes", evidence_id="q",
                          core_position=frame.singleton("S"), base_support=0.5)
    weak_denial = Argument(id="ANS-no", evidence_id="q",
                           core_position=frame.singleton("not-S"), base_support=0.01)
    result = fuse(frame, [settled], include_pairwise=False)
    assert result.fused.belief(frame.singleton("S")) > 0.9

    from reckon.fusion import value_of_question
    voi = value_of_question(frame, [settled], None,
                            [(0.95, confirming), (0.05, weak_denial)])
    assert voi.flip_probability == 0.0
    assert voi.congruence == pytest.approx(0.95)
    # and congruence can be pushed arbitrarily high without changing the flip
    voi_hi = value_of_question(frame, [settled], None,
                               [(0.999, confirming), (0.001, weak_denial)])
    assert voi_hi.flip_probability == 0.0
    assert voi_hi.congruence == pytest.approx(0.999)
