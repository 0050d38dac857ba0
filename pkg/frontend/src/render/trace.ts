import { escapeHtml, fmt } from "../format.js";
import type { StepView } from "../types.js";

/** Growing timeline of the resolver's retractions. */
export function renderTraceTimeline(steps: StepView[], terminal: string | null): string {
  const items = steps
    .map(
      (step) => `
  <li class="trace-step" data-item="${escapeHtml(step.item)}">
    <span class="step-index">${step.index}</span>
    retract <strong>${escapeHtml(step.item)}</strong>
    (culpability ${fmt(step.culpability)}),
    K ${fmt(step.conflict_before)} &rarr; ${fmt(step.conflict_after)}
  </li>`,
    )
    .join("");
  const tail = terminal === null
    ? ""
    : `\n  <li class="trace-terminal" data-terminal="${escapeHtml(terminal)}">${escapeHtml(terminal)}</li>`;
  return `<ol class="resolution-trace">${items}${tail}\n</ol>`;
}
