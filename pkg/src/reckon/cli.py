"""Command-line surface for the analyst workflow.

Exit codes: 0 success, 1 usage error, 2 domain/state error (including a
firm conflict under --strict), 3 storage, corruption, or lock contention.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import filelock

from . import journal as jn
from .arguments import Argument, ExceptionStatus, Rebut, Undercut
from .errors import (
    CorruptRecord,
    LockHeld,
    MissingHeader,
    ReckonError,
    StorageError,
    VersionUnsupported,
)
from .resolution import ResolutionPolicy, Terminal
from .scenarios import load_scenario
from .session import (
    Session,
    culpability_view,
    fusion_view,
    resolution_trace_view,
    session_view,
    voi_view,
)

STORAGE_ERRORS = (StorageError, CorruptRecord, MissingHeader, VersionUnsupported, LockHeld)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map usage to 1
        raise UsageError(message)


def emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def fmt(x: float) -> str:
    return f"{x:.6f}"


@contextmanager
def locked(path: str):
    lock = filelock.FileLock(str(path) + ".lock")
    try:
        lock.acquire(timeout=0)
    except filelock.Timeout as err:
        raise LockHeld(f"another process holds the lock on {path}") from err
    try:
        yield
    finally:
        lock.release()


def open_session(path: str) -> Session:
    return Session.load(path)


def parse_labels(text: str) -> list[str]:
    labels = [part.strip() for part in text.split(",")]
    if any(not lab for lab in labels):
        raise UsageError(f"bad label list {text!r}")
    return labels


def print_fusion(view: dict) -> None:
    print(f"conflict K = {fmt(view['conflict'])}")
    print("hypothesis          belief      plausibility")
    for label in view["belief"]:
        print(f"  {label:<17} {fmt(view['belief'][label])}    {fmt(view['plausibility'][label])}")
    print("focal masses:")
    for entry in view["masses"]:
        subset = "{" + ", ".join(entry["subset"]) + "}"
        print(f"  {subset:<24} {fmt(entry['mass'])}")
    for pair in view["pairwise_conflict"]:
        a, b = pair["arguments"]
        print(f"pairwise conflict {a} x {b}: {fmt(pair['conflict'])}")


# --- subcommand handlers --------------------------------------------------

def cmd_init(args) -> int:
    session_id = args.session_id or Path(args.session).stem
    Session.create(parse_labels(args.frame), session_id=session_id,
                   frame_id=args.frame_id, path=args.session)
    print(f"initialized session {session_id!r} at {args.session}")
    return 0


def cmd_evidence_add(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        item = s.add_evidence(args.description, evidence_id=args.id)
    if args.json:
        emit({"evidence_id": item.id, "version": s.version})
    else:
        print(f"added evidence {item.id}")
    return 0


def cmd_argument_add(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        arg = s.add_argument(args.evidence, parse_labels(args.core), args.support,
                             argument_id=args.id)
    if args.json:
        emit({"argument_id": arg.id, "version": s.version})
    else:
        print(f"added argument {arg.id}: core {{{', '.join(arg.core_position.members)}}} "
              f"support {fmt(arg.base_support)}")
    return 0


def cmd_exception_add(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        impact = Rebut(target=s.frame.subset(parse_labels(args.rebut))) \
            if args.rebut else Undercut()
        exc = s.add_exception(
            args.argument, args.description, args.probability, impact,
            exception_id=args.id, status=ExceptionStatus(args.status),
        )
    if args.json:
        emit({"exception_id": exc.id, "version": s.version})
    else:
        print(f"added exception {exc.id} ({exc.status.value}) to {args.argument}")
    return 0


def cmd_exception_set_status(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        s.set_exception_status(args.exception, ExceptionStatus(args.status))
    if args.json:
        emit({"exception_id": args.exception, "status": args.status, "version": s.version})
    else:
        print(f"exception {args.exception} -> {args.status}")
    return 0


def cmd_ledger_commit(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        rid = s.commit_bottom_up(parse_labels(args.source), parse_labels(args.committed),
                                 args.amount)
    if args.json:
        emit({"record_id": rid, "version": s.version})
    else:
        print(f"committed {rid}: {fmt(args.amount)} from "
              f"{{{args.source}}} to {{{args.committed}}}")
    return 0


def cmd_ledger_declare(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        rid = s.declare_fallback(parse_labels(args.precise), parse_labels(args.fallback),
                                 args.fraction)
    if args.json:
        emit({"record_id": rid, "version": s.version})
    else:
        print(f"declared {rid}: fraction {fmt(args.fraction)} of {{{args.precise}}} "
              f"falls back to {{{args.fallback}}}")
    return 0


def cmd_ledger_retract(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        s.retract_ledger(args.record)
    if args.json:
        emit({"record_id": args.record, "version": s.version})
    else:
        print(f"retracted ledger record {args.record}")
    return 0


def cmd_status(args) -> int:
    s = open_session(args.session)
    view = session_view(s)
    if args.json:
        emit(view)
        return 0
    print(f"session {view['session_id']} (version {view['version']})")
    print(f"frame: {', '.join(view['frame'])}")
    print(f"evidence: {len(view['evidence'])}  arguments: {len(view['arguments'])}  "
          f"ledger records: {len(view['ledger_records'])}")
    for arg in view["arguments"]:
        print(f"  {arg['id']}: core {{{', '.join(arg['core'])}}} "
              f"support {fmt(arg['base_support'])} from {arg['evidence_id']}")
        for exc in arg["exceptions"]:
            impact = exc["impact"]["kind"]
            if impact == "rebut":
                impact += " -> {" + ", ".join(exc["impact"]["target"]) + "}"
            print(f"    {exc['exception_id']} [{exc['status']}] p={fmt(exc['probability'])} "
                  f"{impact}: {exc['description']}")
    if view["fusion"] is not None:
        print_fusion(view["fusion"])
    else:
        print(f"fusion unavailable: {view['fusion_error']['detail']}")
    print(f"retractable items: {', '.join(view['retractable_items']) or '(none)'}")
    return 0


def cmd_fuse(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        result = s.snapshot_fusion()
    view = fusion_view(s.frame, result)
    if args.json:
        emit(view)
    else:
        print_fusion(view)
    return 0


def cmd_culpability(args) -> int:
    s = open_session(args.session)
    report = s.culpability()
    view = culpability_view(report)
    if args.json:
        emit(view)
        return 0
    print(f"conflict K = {fmt(report.conflict)}")
    print("item                 culpability   K if retracted")
    for e in report.entries:
        print(f"  {e.item_id:<18} {fmt(e.culpability)}      {fmt(e.conflict_if_retracted)}")
    return 0


def cmd_resolve(args) -> int:
    policy = ResolutionPolicy(tau=args.tau, max_steps=args.max_steps)
    with locked(args.session):
        s = open_session(args.session)
        if args.step:
            outcome = s.resolve_step(policy)
            view = {
                "done": outcome.done.value if outcome.done else None,
                "step": None if outcome.step is None else {
                    "index": outcome.step.index,
                    "conflict_before": outcome.step.conflict_before,
                    "item": outcome.step.item_id,
                    "culpability": outcome.step.culpability,
                    "conflict_after": outcome.step.conflict_after,
                },
                "fusion": fusion_view(s.frame, outcome.fusion),
            }
            terminal = outcome.done
        else:
            trace = s.resolve(policy)
            view = resolution_trace_view(trace, s.frame)
            terminal = trace.terminal
    if args.json:
        emit(view)
    elif args.step:
        if view["step"] is not None:
            st = view["step"]
            print(f"step {st['index']}: retract {st['item']} "
                  f"(culpability {fmt(st['culpability'])}), "
                  f"K {fmt(st['conflict_before'])} -> {fmt(st['conflict_after'])}")
        else:
            print(f"done: {view['done']}")
    else:
        for st in view["steps"]:
            print(f"step {st['index']}: retract {st['item']} "
                  f"(culpability {fmt(st['culpability'])}), "
                  f"K {fmt(st['conflict_before'])} -> {fmt(st['conflict_after'])}")
        print(f"terminal: {view['terminal']}")
        print_fusion(view["final"])
    if args.strict and terminal is Terminal.FIRM_CONFLICT:
        print("firm conflict: only human judgment can proceed", file=sys.stderr)
        return 2
    return 0


def cmd_whatif(args) -> int:
    s = open_session(args.session)
    result = s.whatif(args.retract)
    view = fusion_view(s.frame, result)
    view["retracted"] = list(args.retract)
    if args.json:
        emit(view)
    else:
        print(f"what-if retraction of: {', '.join(args.retract)} (nothing journaled)")
        print_fusion(view)
    return 0


def question_from_file(s: Session, path: str) -> list[tuple[float, Argument]]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as err:
        raise StorageError(f"no question file at {path}") from err
    except json.JSONDecodeError as err:
        raise UsageError(f"question file {path} is not valid JSON: {err.msg}") from err
    answers = payload.get("answers")
    if not isinstance(answers, list):
        raise UsageError("question file needs an 'answers' list")
    out = []
    for i, answer in enumerate(answers):
        spec = answer.get("argument", {})
        exceptions = tuple(
            jn.exception_from_payload(s.frame, p) for p in spec.get("exceptions", [])
        )
        arg = Argument(
            id=spec.get("id", f"ANS{i}"),
            evidence_id=spec.get("evidence_id", "question"),
            core_position=s.frame.subset(spec["core"]),
            base_support=spec["base_support"],
            exceptions=exceptions,
        )
        out.append((answer["probability"], arg))
    return out


def cmd_voi(args) -> int:
    s = open_session(args.session)
    question = question_from_file(s, args.question)
    result = s.value_of_question(question)
    view = voi_view(result)
    if args.json:
        emit(view)
        return 0
    print(f"favored hypothesis: {result.favored}")
    print(f"flip probability:   {fmt(result.flip_probability)}")
    print(f"congruence:         {fmt(result.congruence)}")
    for i, (p, map_after, flips) in enumerate(result.per_answer):
        tag = "flips" if flips else "keeps"
        print(f"  answer {i}: p={fmt(p)} -> {map_after or 'total conflict'} ({tag})")
    return 0


def cmd_elicit(args) -> int:
    with locked(args.session):
        s = open_session(args.session)
        prompt = s.start_elicitation(args.argument, max_rounds=args.max_rounds)
        print(prompt)
        stream = sys.stdin
        while True:
            dialogue = s.active_elicitation(args.argument)
            if dialogue is None or dialogue.state.value != "awaiting-response":
                break
            line = stream.readline()
            if not line:
                s.pass_elicitation(args.argument)
                print("(pass)")
                break
            line = line.strip()
            if not line:
                continue
            if line.lower() == "pass":
                s.pass_elicitation(args.argument)
                print("(pass)")
                break
            parts = [part.strip() for part in line.split("::")]
            if len(parts) < 3:
                print("expected: DESCRIPTION :: PROBABILITY :: undercut|rebut LABELS")
                continue
            description, prob_text, impact_text = parts[0], parts[1], parts[2]
            try:
                probability = float(prob_text)
            except ValueError:
                print(f"bad probability {prob_text!r}")
                continue
            if impact_text.startswith("rebut"):
                labels = parse_labels(impact_text[len("rebut"):].strip())
                impact = Rebut(target=s.frame.subset(labels))
            elif impact_text == "undercut":
                impact = Undercut()
            else:
                print(f"bad impact {impact_text!r}")
                continue
            next_prompt = s.submit_qualification(args.argument, description,
                                                 probability, impact)
            print(next_prompt)
    arg = s.argument(args.argument)
    print(f"argument {arg.id} now carries {len(arg.exceptions)} exception(s)")
    return 0


def cmd_scenario_load(args) -> int:
    if Path(args.session).exists():
        raise StorageError(f"refusing to overwrite existing session file {args.session}")
    built = load_scenario(args.name)
    target = jn.Journal(path=Path(args.session))
    state = jn.SessionState()
    for rec in built.journal.records:
        jn.append(target, state, rec.kind, rec.payload)
    print(f"loaded scenario {args.name!r} into {args.session}")
    return 0


def cmd_export(args) -> int:
    s = open_session(args.session)
    for rec in s.journal.records:
        print(rec.to_json())
    return 0


def cmd_report(args) -> int:
    from . import report as report_mod  # matplotlib import only when needed

    s = open_session(args.session)
    question = question_from_file(s, args.question) if args.question else None
    written = report_mod.render_session_report(s, Path(args.out), question=question)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_serve(args) -> int:
    from . import service

    service.run(directory=Path(args.dir), host=args.host, port=args.port)
    return 0


# --- parser wiring ---------------------------------------------------------

def build_parser() -> Parser:
    parser = Parser(prog="reckon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_session(p, json_flag=True):
        p.add_argument("session", help="session journal file")
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = sub.add_parser("init", help="create a fresh session")
    p.add_argument("session")
    p.add_argument("--frame", required=True, help="comma-separated hypothesis labels")
    p.add_argument("--session-id", default=None)
    p.add_argument("--frame-id", default="frame")
    p.set_defaults(func=cmd_init)

    evidence = sub.add_parser("evidence", help="evidence items").add_subparsers(
        dest="subcommand", required=True)
    p = with_session(evidence.add_parser("add"))
    p.add_argument("--description", required=True)
    p.add_argument("--id", default=None)
    p.set_defaults(func=cmd_evidence_add)

    argument = sub.add_parser("argument", help="arguments").add_subparsers(
        dest="subcommand", required=True)
    p = with_session(argument.add_parser("add"))
    p.add_argument("--evidence", required=True)
    p.add_argument("--core", required=True, help="comma-separated labels")
    p.add_argument("--support", required=True, type=float)
    p.add_argument("--id", default=None)
    p.set_defaults(func=cmd_argument_add)

    exception = sub.add_parser("exception", help="exception conditions").add_subparsers(
        dest="subcommand", required=True)
    p = with_session(exception.add_parser("add"))
    p.add_argument("--argument", required=True)
    p.add_argument("--description", required=True)
    p.add_argument("--probability", required=True, type=float)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--undercut", action="store_true")
    group.add_argument("--rebut", default=None, help="comma-separated target labels")
    p.add_argument("--id", default=None)
    p.add_argument("--status", default="assumed-false",
                   choices=[s.value for s in ExceptionStatus])
    p.set_defaults(func=cmd_exception_add)
    p = with_session(exception.add_parser("set-status"))
    p.add_argument("--exception", required=True)
    p.add_argument("--status", required=True, choices=[s.value for s in ExceptionStatus])
    p.set_defaults(func=cmd_exception_set_status)

    ledger = sub.add_parser("ledger", help="assumption ledger").add_subparsers(
        dest="subcommand", required=True)
    p = with_session(ledger.add_parser("commit"))
    p.add_argument("--source", required=True)
    p.add_argument("--committed", required=True)
    p.add_argument("--amount", required=True, type=float)
    p.set_defaults(func=cmd_ledger_commit)
    p = with_session(ledger.add_parser("declare-fallback"))
    p.add_argument("--precise", required=True)
    p.add_argument("--fallback", required=True)
    p.add_argument("--fraction", required=True, type=float)
    p.set_defaults(func=cmd_ledger_declare)
    p = with_session(ledger.add_parser("retract"))
    p.add_argument("--record", required=True)
    p.set_defaults(func=cmd_ledger_retract)

    p = with_session(sub.add_parser("elicit", help="crystal-ball dialogue"), json_flag=False)
    p.add_argument("--argument", required=True)
    p.add_argument("--max-rounds", type=int, default=None)
    p.set_defaults(func=cmd_elicit)

    p = with_session(sub.add_parser("status", help="session overview"))
    p.set_defaults(func=cmd_status)

    p = with_session(sub.add_parser("fuse", help="fuse all arguments, journal a snapshot"))
    p.set_defaults(func=cmd_fuse)

    p = with_session(sub.add_parser("culpability", help="rank retractable assumptions"))
    p.set_defaults(func=cmd_culpability)

    p = with_session(sub.add_parser("resolve", help="run the retraction loop"))
    p.add_argument("--step", action="store_true", help="perform a single step")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--strict", action="store_true",
                   help="exit 2 when the terminal state is a firm conflict")
    p.set_defaults(func=cmd_resolve)

    p = with_session(sub.add_parser("whatif", help="preview retractions without journaling"))
    p.add_argument("--retract", action="append", required=True, metavar="ITEM")
    p.set_defaults(func=cmd_whatif)

    p = with_session(sub.add_parser("voi", help="value of a candidate question"))
    p.add_argument("--question", required=True, help="JSON question file")
    p.set_defaults(func=cmd_voi)

    scenario = sub.add_parser("scenario", help="shipped demo scenarios").add_subparsers(
        dest="subcommand", required=True)
    p = scenario.add_parser("load")
    p.add_argument("name")
    p.add_argument("session")
    p.set_defaults(func=cmd_scenario_load)

    p = sub.add_parser("export", help="dump the journal as JSON lines")
    p.add_argument("session")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", help="render figures and CSV tables")
    p.add_argument("session")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--question", default=None, help="optional question file for a VOI panel")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve sessions over HTTP")
    p.add_argument("--dir", required=True, help="directory of session files")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except STORAGE_ERRORS as err:
        print(f"storage error: {err}", file=sys.stderr)
        return 3
    except ReckonError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
