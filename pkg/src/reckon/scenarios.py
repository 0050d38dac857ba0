"""Shipped demo scenarios.

Each builder assembles a fresh in-memory session through the ordinary
journaled ops, so a scenario is also a worked example of the API.  The
numeric choices are fixture instantiations: the qualitative setups are
classic, the exact probabilities are picked to reproduce the headline
behaviors (see each builder's docstring).
"""

from __future__ import annotations

from .arguments import ExceptionCondition, ExceptionStatus, Rebut, Undercut
from .belief import Frame
from .errors import UnknownScenario
from .session import Session

EXTREME_ODDS = 1e10  # second source: ten billion to one against S


def zadeh_pathology() -> Session:
    """Two sources, each nearly certain of a different hypothesis.

    Both compiled masses put .99 on their favorite and .01 on the shared
    long shot S2.  Product-intersection combination leaves conflict .9999
    and hands the long shot 100% of the normalized belief: the classic
    aggregation pathology this engine exists to diagnose instead of accept.

    A shared assumed-false exception (one compromised channel feeding both
    sources) ships with the fixture: it changes nothing while assumed
    false, but it is the retractable assumption an analyst can test in the
    what-if sandbox, where it removes 90% of the conflict at a stroke.
    """
    s = Session.create(["S1", "S2", "S3"], session_id="zadeh-pathology",
                       frame_id="candidates")
    shared_channel = _undercut(
        "X3", "Both reports trace back to a single compromised collection channel", 0.9)
    e1 = s.add_evidence("Report from source one: strongly favors S1, "
                        "with a very small chance of S2.", evidence_id="E1")
    s.add_argument(
        e1.id, ["S1"], 1.0, argument_id="A1",
        exceptions=[_rebut(s.frame, "X1", "Source one's residual doubt: the truth is S2",
                           0.01, ["S2"]),
                    shared_channel],
    )
    e2 = s.add_evidence("Report from source two: strongly favors S3, "
                        "with a very small chance of S2.", evidence_id="E2")
    s.add_argument(
        e2.id, ["S3"], 1.0, argument_id="A2",
        exceptions=[_rebut(s.frame, "X2", "Source two's residual doubt: the truth is S2",
                           0.01, ["S2"]),
                    shared_channel],
    )
    return s


def extreme_odds() -> Session:
    """One source certain of S, another at ten billion to one against.

    Combination keeps only the sliver where both agree on S, so normalized
    belief in S is exactly 1.0 while nearly all probability weight sat on
    the contradiction.  Again: a conclusion most people would call premature.
    """
    s = Session.create(["S", "not-S"], session_id="extreme-odds", frame_id="claim")
    e1 = s.add_evidence("Source one treats S as certain.", evidence_id="E1")
    s.add_argument(e1.id, ["S"], 1.0, argument_id="A1")
    e2 = s.add_evidence("Source two puts the odds at ten billion to one against S.",
                        evidence_id="E2")
    p_s = 1.0 / (EXTREME_ODDS + 1.0)
    s.add_argument(
        e2.id, ["not-S"], 1.0, argument_id="A2",
        exceptions=[_rebut(s.frame, "X1", "Source two's sliver of doubt: S after all",
                           p_s, ["S"])],
    )
    return s


def crystal_ball_8() -> Session:
    """A conclusion first assessed as certain, then qualified eight times.

    Crystal-ball questioning of an initially 1.0-confident analyst yields
    eight undercutting exception conditions averaging probability .31.
    With all eight active, support for the core falls to .69^8, about .05:
    the headline demonstration that hidden assumptions carry real mass.
    """
    s = Session.create(["attack", "no-attack"], session_id="crystal-ball-8",
                       frame_id="course-of-action")
    ev = s.add_evidence("Field report the analyst initially read as conclusive "
                        "evidence of an impending attack.", evidence_id="E1")
    qualifications = [
        ("X1", "The source passed on second-hand information"),
        ("X2", "The report was stale before it reached the analyst"),
        ("X3", "The activity is a scheduled exercise, not preparation"),
        ("X4", "A deception operation staged the observed activity"),
        ("X5", "The sensor was miscalibrated for the reported sector"),
        ("X6", "The translation garbled a key qualifier"),
        ("X7", "The unit observed is not the unit believed"),
        ("X8", "The observed pattern also precedes a withdrawal"),
    ]
    s.add_argument(
        ev.id, ["attack"], 1.0, argument_id="A1",
        exceptions=[
            _undercut(xid, desc, 0.31, status=ExceptionStatus.ACTIVE)
            for xid, desc in qualifications
        ],
    )
    return s


def attack_schema() -> Session:
    """Indicator-based reading of an attack plan, with its hidden assumptions.

    Increased logistical activity in a sector reads, at first blush, as an
    attack in preparation (support .9).  The expected follow-on indicator,
    artillery moving up, fails to appear, which at first blush argues
    against the attack (support .5).  Each reading carries the exception
    conditions under which it would be wrong, all assumed false until the
    conflict between the two lines of reasoning forces a review.

    The session header also documents two internally coherent posterior
    readings of the same no-artillery observation: one that erodes the
    attack hypothesis (prior .9, likelihoods .2/.8, posterior .69) and a
    reassessed one that strengthens it (prior .99, likelihoods .4/.6,
    posterior .99).  Coherence alone does not pick between them; that is
    the point.
    """
    s = Session.create(
        ["attack", "no-attack"], session_id="attack-schema", frame_id="enemy-plan",
        header_extra={"bayes_readings": [
            {"prior": 0.9, "likelihood_given_attack": 0.2,
             "likelihood_given_no_attack": 0.8,
             "posterior": 0.9 * 0.2 / (0.9 * 0.2 + 0.1 * 0.8)},
            {"prior": 0.99, "likelihood_given_attack": 0.4,
             "likelihood_given_no_attack": 0.6,
             "posterior": 0.99 * 0.4 / (0.99 * 0.4 + 0.01 * 0.6)},
        ]},
    )

    e_activity = s.add_evidence(
        "Radar reports of trucks moving toward front-line areas: increased "
        "logistical activity in a particular sector.", evidence_id="E1")
    s.add_argument(
        e_activity.id, ["attack"], 0.9, argument_id="A1",
        exceptions=[
            _undercut("X1", "Could the radar blips represent civilian traffic?", 0.2),
            _undercut("X2", "Is the apparent increase in activity a statistical accident?", 0.1),
            _undercut("X3", "Could increased logistical activity be intended to "
                            "replenish a degraded defensive unit?", 0.15),
        ],
    )
    e_no_artillery = s.add_evidence(
        "No sign of artillery moving up in the sector despite active search.",
        evidence_id="E2")
    s.add_argument(
        e_no_artillery.id, ["no-attack"], 0.5, argument_id="A2",
        exceptions=[
            _undercut("X4", "Could weather, foliage, or camouflage have masked "
                            "the location of artillery?", 0.3),
            _undercut("X5", "Does the enemy plan to omit the initial artillery "
                            "barrage for purposes of surprise?", 0.25),
            _undercut("X6", "Is required artillery equipment unavailable or "
                            "not in working order?", 0.2),
        ],
    )
    return s


def _undercut(xid: str, description: str, probability: float,
              status: ExceptionStatus = ExceptionStatus.ASSUMED_FALSE) -> ExceptionCondition:
    return ExceptionCondition(id=xid, description=description,
                              probability=probability, impact=Undercut(), status=status)


def _rebut(frame: Frame, xid: str, description: str, probability: float,
           target_labels, status: ExceptionStatus = ExceptionStatus.ACTIVE) -> ExceptionCondition:
    return ExceptionCondition(
        id=xid, description=description, probability=probability,
        impact=Rebut(target=frame.subset(target_labels)), status=status,
    )


SCENARIOS = {
    "zadeh-pathology": zadeh_pathology,
    "extreme-odds": extreme_odds,
    "crystal-ball-8": crystal_ball_8,
    "attack-schema": attack_schema,
}


def load_scenario(name: str) -> Session:
    builder = SCENARIOS.get(name)
    if builder is None:
        known = ", ".join(sorted(SCENARIOS))
        raise UnknownScenario(f"unknown scenario {name!r}; shipped scenarios: {known}")
    return builder()
