import { escapeHtml, fmt } from "../format.js";
import type { FusionView } from "../types.js";
import { renderBeliefBars } from "./bars.js";
import { renderConflictGauge } from "./gauge.js";

/** The sandbox: toggle retractions, preview the fused picture.  Nothing
 * here journals; the preview pane renders a what-if response only. */
export function renderWhatIfPanel(retractables: string[], checked: string[]): string {
  const boxes = retractables
    .map(
      (item) => `
  <label class="whatif-item">
    <input type="checkbox" class="whatif-toggle" value="${escapeHtml(item)}"${
      checked.includes(item) ? " checked" : ""}/>
    ${escapeHtml(item)}
  </label>`,
    )
    .join("");
  return `<div class="whatif-panel">
  <p class="whatif-note">preview only: the journal is untouched</p>
  ${boxes || '<p class="whatif-empty">no retractable assumptions</p>'}
  <div class="whatif-preview"></div>
</div>`;
}

export function renderWhatIfPreview(view: FusionView): string {
  const retracted = (view.retracted ?? []).map(escapeHtml).join(", ");
  return `<div class="whatif-result" data-retracted="${retracted}">
  <p>if retracted: ${retracted || "(nothing)"} &rarr; K = ${fmt(view.conflict)}</p>
  ${renderConflictGauge(view.conflict)}
  ${renderBeliefBars(view)}
</div>`;
}
