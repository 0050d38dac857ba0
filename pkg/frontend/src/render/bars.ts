import { escapeHtml, fmt } from "../format.js";
import type { FusionView } from "../types.js";

export interface BeliefBar {
  label: string;
  belief: number;
  plausibility: number;
  lo: number;
  hi: number;
}

/** One bar per hypothesis. lo/hi are what gets drawn; the guard keeps
 * lo <= hi even if a payload ever arrived swapped, so the rendered
 * interval can never show Bel above Pl. */
export function beliefBars(fusion: FusionView): BeliefBar[] {
  return Object.keys(fusion.belief).map((label) => {
    const belief = fusion.belief[label];
    const plausibility = fusion.plausibility[label];
    return {
      label,
      belief,
      plausibility,
      lo: Math.min(belief, plausibility),
      hi: Math.max(belief, plausibility),
    };
  });
}

export function renderBeliefBars(fusion: FusionView): string {
  const rows = beliefBars(fusion)
    .map((bar) => {
      const left = (bar.lo * 100).toFixed(2);
      const width = Math.max((bar.hi - bar.lo) * 100, 0.4).toFixed(2);
      return `
  <div class="belief-row" data-label="${escapeHtml(bar.label)}" data-belief="${fmt(bar.belief)}" data-plausibility="${fmt(bar.plausibility)}">
    <span class="belief-label">${escapeHtml(bar.label)}</span>
    <span class="belief-track"><span class="belief-interval" style="left:${left}%;width:${width}%"></span></span>
    <span class="belief-numbers">[${fmt(bar.lo)}, ${fmt(bar.hi)}]</span>
  </div>`;
    })
    .join("");
  return `<div class="belief-bars">${rows}\n</div>`;
}
