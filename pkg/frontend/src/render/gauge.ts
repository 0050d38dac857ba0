import { fmt } from "../format.js";

/** The conflict gauge: the share of joint weight sitting on contradiction. */
export function renderConflictGauge(conflict: number): string {
  const width = (conflict * 100).toFixed(2);
  const level = conflict > 0.5 ? "high" : conflict > 0.05 ? "raised" : "low";
  return `<div class="conflict-gauge" data-conflict="${fmt(conflict)}" data-level="${level}">
  <span class="gauge-track"><span class="gauge-fill" style="width:${width}%"></span></span>
  <span class="gauge-value">K = ${fmt(conflict)}</span>
</div>`;
}
