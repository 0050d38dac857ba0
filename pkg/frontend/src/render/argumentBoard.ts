import { escapeHtml, fmt } from "../format.js";
import type { ArgumentView, EvidenceView } from "../types.js";

function impactText(exc: ArgumentView["exceptions"][number]): string {
  if (exc.impact.kind === "rebut") {
    return `rebut -> {${(exc.impact.target ?? []).join(", ")}}`;
  }
  return "undercut";
}

export function renderArgumentCard(arg: ArgumentView, evidence?: EvidenceView): string {
  const exceptions = arg.exceptions
    .map(
      (exc) => `
    <li class="exception" data-exception="${escapeHtml(exc.exception_id)}" data-status="${exc.status}">
      <span class="exception-id">${escapeHtml(exc.exception_id)}</span>
      <span class="exception-status ${exc.status}">${exc.status}</span>
      <span class="exception-prob">p=${fmt(exc.probability)}</span>
      <span class="exception-impact">${escapeHtml(impactText(exc))}</span>
      <span class="exception-desc">${escapeHtml(exc.description)}</span>
    </li>`,
    )
    .join("");
  return `<article class="argument-card" data-argument="${escapeHtml(arg.id)}">
  <header>
    <span class="argument-id">${escapeHtml(arg.id)}</span>
    <span class="core-position">core: {${arg.core.map(escapeHtml).join(", ")}}</span>
    <span class="base-support">support ${fmt(arg.base_support)}</span>
  </header>
  <p class="evidence-ref">${escapeHtml(evidence ? evidence.description : arg.evidence_id)}</p>
  <ul class="exceptions">${exceptions}
  </ul>
  <button class="elicit-button" data-argument="${escapeHtml(arg.id)}">crystal ball</button>
</article>`;
}

export function renderArgumentBoard(
  args: ArgumentView[],
  evidence: EvidenceView[],
): string {
  const byId = new Map(evidence.map((item) => [item.id, item]));
  return `<div class="argument-board">${args
    .map((arg) => renderArgumentCard(arg, byId.get(arg.evidence_id)))
    .join("\n")}</div>`;
}
