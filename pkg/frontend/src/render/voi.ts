import { escapeHtml, fmt } from "../format.js";
import type { VoiView } from "../types.js";

const SIZE = 240;
const PAD = 24;

function coord(x: number): number {
  return PAD + x * (SIZE - 2 * PAD);
}

/** Scatter one question as (flip probability, congruence).  Points near the
 * top-left are the trap: comfortable questions that cannot change a mind. */
export function renderVoiPanel(view: VoiView): string {
  const x = coord(view.flip_probability);
  const y = SIZE - coord(view.congruence);
  const answers = view.answers
    .map(
      (a, i) => `
  <li data-answer="${i}" data-flips="${a.flips}">
    answer ${i}: p=${fmt(a.probability)} &rarr; ${escapeHtml(a.map_after ?? "total conflict")}
    ${a.flips ? "(flips)" : "(keeps)"}
  </li>`,
    )
    .join("");
  return `<div class="voi-panel" data-favored="${escapeHtml(view.favored)}"
     data-flip="${fmt(view.flip_probability)}" data-congruence="${fmt(view.congruence)}">
  <p>favored: <strong>${escapeHtml(view.favored)}</strong>,
     flip probability ${fmt(view.flip_probability)},
     congruence ${fmt(view.congruence)}</p>
  <svg viewBox="0 0 ${SIZE} ${SIZE}" class="voi-scatter" role="img">
    <line x1="${PAD}" y1="${SIZE - PAD}" x2="${SIZE - PAD}" y2="${SIZE - PAD}" stroke="#888"/>
    <line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${SIZE - PAD}" stroke="#888"/>
    <text x="${SIZE / 2}" y="${SIZE - 4}" text-anchor="middle" font-size="9">flip probability</text>
    <text x="8" y="${SIZE / 2}" font-size="9" transform="rotate(-90 8 ${SIZE / 2})" text-anchor="middle">congruence</text>
    <circle cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="5" class="voi-point"/>
  </svg>
  <ul class="voi-answers">${answers}
  </ul>
</div>`;
}
