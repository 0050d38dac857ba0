"""Render a session's fused picture to figures and CSV tables.

Writes, into the output directory:

  beliefs.csv / fusion.png    belief-plausibility intervals and conflict gauge
  masses.csv                  focal masses of the fused belief
  culpability.csv / culpability.png   when there is conflict to attribute
  voi.csv / voi.png           when a candidate question is supplied
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import NoConflict, TotalConflict
from .session import Session

INTERVAL_COLOR = "#4878a8"
GAUGE_COLOR = "#b0413e"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fusion_figure(path: Path, labels, beliefs, plausibilities, conflict: float) -> None:
    fig, (ax, gauge) = plt.subplots(
        2, 1, figsize=(7, 1.2 + 0.5 * len(labels)),
        gridspec_kw={"height_ratios": [len(labels), 1]},
    )
    ys = range(len(labels))
    for y, label in zip(ys, labels):
        bel, pl = beliefs[label], plausibilities[label]
        ax.barh(y, max(pl - bel, 0.004), left=bel, height=0.5,
                color=INTERVAL_COLOR, alpha=0.7)
        ax.plot([bel], [y], marker="|", markersize=14, color="black")
        ax.plot([pl], [y], marker="|", markersize=14, color="black")
        ax.text(1.02, y, f"[{bel:.3f}, {pl:.3f}]", va="center", fontsize=8)
    ax.set_yticks(list(ys), labels)
    ax.set_xlim(0, 1)
    ax.invert_yaxis()
    ax.set_xlabel("belief interval [Bel, Pl]")

    gauge.barh(0, conflict, color=GAUGE_COLOR, height=0.5)
    gauge.set_xlim(0, 1)
    gauge.set_yticks([0], ["conflict K"])
    gauge.text(min(conflict + 0.01, 0.88), 0, f"{conflict:.4f}", va="center", fontsize=9)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _culpability_figure(path: Path, entries) -> None:
    fig, ax = plt.subplots(figsize=(7, 1.0 + 0.45 * len(entries)))
    ys = range(len(entries))
    values = [e.culpability for e in entries]
    colors = [INTERVAL_COLOR if v >= 0 else GAUGE_COLOR for v in values]
    ax.barh(list(ys), values, color=colors, height=0.55)
    ax.set_yticks(list(ys), [e.item_id for e in entries])
    ax.invert_yaxis()
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("culpability (share of conflict removed if retracted)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _voi_figure(path: Path, flip: float, congruence: float) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter([flip], [congruence], s=120, color=INTERVAL_COLOR, zorder=3)
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("flip probability (chance the answer changes the leading hypothesis)")
    ax.set_ylabel("congruence (probability of the designated positive answer)")
    ax.axhline(0.5, color="gray", linewidth=0.5)
    ax.axvline(0.5, color="gray", linewidth=0.5)
    ax.annotate(f"({flip:.3f}, {congruence:.3f})", (flip, congruence),
                textcoords="offset points", xytext=(8, 8), fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_session_report(session: Session, out_dir: Path,
                          question=None) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    frame = session.frame

    try:
        result = session.fuse()
    except TotalConflict:
        # still give the analyst the conflict number they cannot normalize past
        from .fusion import conflict_only
        k = conflict_only(frame, session.arguments, session.ledger)
        path = out_dir / "beliefs.csv"
        _write_csv(path, ["hypothesis", "belief", "plausibility"],
                   [[label, "", ""] for label in frame.hypotheses])
        written.append(path)
        fig_path = out_dir / "fusion.png"
        _fusion_figure(fig_path, list(frame.hypotheses),
                       {h: 0.0 for h in frame.hypotheses},
                       {h: 0.0 for h in frame.hypotheses}, k)
        written.append(fig_path)
        return written

    labels = list(frame.hypotheses)
    beliefs = {h: result.fused.belief(frame.singleton(h)) for h in labels}
    plausibilities = {h: result.fused.plausibility(frame.singleton(h)) for h in labels}

    path = out_dir / "beliefs.csv"
    _write_csv(path, ["hypothesis", "belief", "plausibility"],
               [[h, repr(beliefs[h]), repr(plausibilities[h])] for h in labels])
    written.append(path)

    path = out_dir / "masses.csv"
    _write_csv(path, ["subset", "mass"],
               [[" ".join(frame.members(bits)), repr(value)]
                for bits, value in result.fused.focal])
    written.append(path)

    path = out_dir / "fusion.png"
    _fusion_figure(path, labels, beliefs, plausibilities, result.conflict)
    written.append(path)

    try:
        report = session.culpability()
    except NoConflict:
        report = None
    if report is not None and report.entries:
        path = out_dir / "culpability.csv"
        _write_csv(path, ["item", "culpability", "conflict_if_retracted"],
                   [[e.item_id, repr(e.culpability), repr(e.conflict_if_retracted)]
                    for e in report.entries])
        written.append(path)
        path = out_dir / "culpability.png"
        _culpability_figure(path, report.entries)
        written.append(path)

    if question is not None:
        voi = session.value_of_question(question)
        path = out_dir / "voi.csv"
        _write_csv(path, ["answer", "probability", "map_after", "flips"],
                   [[i, repr(p), m or "total-conflict", f]
                    for i, (p, m, f) in enumerate(voi.per_answer)])
        written.append(path)
        path = out_dir / "voi.png"
        _voi_figure(path, voi.flip_probability, voi.congruence)
        written.append(path)

    return written
