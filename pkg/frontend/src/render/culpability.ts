import { escapeHtml, fmt } from "../format.js";
import type { CulpabilityView } from "../types.js";

/** Ranked table, order exactly as served; each row carries a retract button. */
export function renderCulpabilityTable(view: CulpabilityView): string {
  if (view.entries.length === 0) {
    return `<p class="culpability-empty">conflict ${fmt(view.conflict)}, but no retractable assumptions remain: firm conflict is a human decision.</p>`;
  }
  const rows = view.entries
    .map(
      (entry) => `
  <tr data-item="${escapeHtml(entry.item)}">
    <td>${escapeHtml(entry.item)}</td>
    <td class="num">${fmt(entry.culpability)}</td>
    <td class="num">${fmt(entry.conflict_if_retracted)}</td>
    <td><button class="retract-button" data-item="${escapeHtml(entry.item)}">retract</button></td>
  </tr>`,
    )
    .join("");
  return `<table class="culpability-table" data-conflict="${fmt(view.conflict)}">
  <thead><tr><th>assumption</th><th>culpability</th><th>K if retracted</th><th></th></tr></thead>
  <tbody>${rows}
  </tbody>
</table>`;
}
