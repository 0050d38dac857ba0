// Snapshot-replay tests: renderers fed captured service JSON must display
// exactly the numbers the service reported.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { fmt } from "../src/format.js";
import { beliefBars, renderBeliefBars } from "../src/render/bars.js";
import { renderConflictGauge } from "../src/render/gauge.js";
import { renderCulpabilityTable } from "../src/render/culpability.js";
import { renderArgumentBoard } from "../src/render/argumentBoard.js";
import { renderTraceTimeline } from "../src/render/trace.js";
import { renderDialogue } from "../src/render/dialogue.js";
import { renderVoiPanel } from "../src/render/voi.js";
import { renderWhatIfPreview } from "../src/render/whatif.js";
import type {
  CulpabilityView,
  FusionView,
  ResolveStepResponse,
  SessionSnapshot,
  VoiView,
} from "../src/types.js";

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8")) as T;
}

const zadehFusion = fixture<FusionView>("zadeh.fusion.json");
const zadehSession = fixture<SessionSnapshot>("zadeh.session.json");
const zadehCulpability = fixture<CulpabilityView>("zadeh.culpability.json");
const zadehWhatIf = fixture<FusionView>("zadeh.whatif.json");
const attackSession = fixture<SessionSnapshot>("attack.session.json");
const attackCulpability = fixture<CulpabilityView>("attack.culpability.json");
const attackStep = fixture<ResolveStepResponse>("attack.step.json");
const attackVoi = fixture<VoiView>("attack.voi.json");

describe("conflict gauge", () => {
  it("shows the served conflict, .9999 for the two-source pathology", () => {
    const html = renderConflictGauge(zadehFusion.conflict);
    expect(html).toContain('data-conflict="0.9999"');
    expect(html).toContain("K = 0.9999");
  });

  it("marks low conflict as low", () => {
    expect(renderConflictGauge(0.01)).toContain('data-level="low"');
    expect(renderConflictGauge(0.9999)).toContain('data-level="high"');
  });
});

describe("belief bars", () => {
  it("renders S2 at exactly 1.0 from the fixture", () => {
    const html = renderBeliefBars(zadehFusion);
    expect(html).toContain('data-label="S2" data-belief="1.0" data-plausibility="1.0"');
    expect(html).toContain('data-label="S1" data-belief="0.0"');
  });

  it("renders every number exactly as served, nothing recomputed", () => {
    for (const bar of beliefBars(zadehFusion)) {
      expect(bar.belief).toBe(zadehFusion.belief[bar.label]);
      expect(bar.plausibility).toBe(zadehFusion.plausibility[bar.label]);
    }
  });

  it("keeps Bel <= Pl as rendered even for a swapped payload", () => {
    const swapped: FusionView = {
      ...zadehFusion,
      belief: { S1: 0.9 },
      plausibility: { S1: 0.2 },
    };
    const [bar] = beliefBars(swapped);
    expect(bar.lo).toBeLessThanOrEqual(bar.hi);
    expect(bar.lo).toBe(0.2);
    expect(bar.hi).toBe(0.9);
  });

  it("holds Bel <= Pl across all fixture sessions", () => {
    for (const snapshot of [zadehSession, attackSession]) {
      const fusion = snapshot.fusion;
      expect(fusion).not.toBeNull();
      for (const bar of beliefBars(fusion!)) {
        expect(bar.lo).toBeLessThanOrEqual(bar.hi);
      }
    }
  });
});

describe("culpability ranking", () => {
  it("renders rows in served order with retract buttons", () => {
    const html = renderCulpabilityTable(attackCulpability);
    const order = [...html.matchAll(/<tr data-item="([^"]+)">/g)].map((m) => m[1]);
    expect(order).toEqual(attackCulpability.entries.map((e) => e.item));
    expect(html).toContain('class="retract-button" data-item="X4"');
  });

  it("shows the zadeh shared-channel assumption with culpability 0.9", () => {
    const html = renderCulpabilityTable(zadehCulpability);
    expect(html).toContain('data-item="X3"');
    expect(html).toContain(fmt(0.9));
  });
});

describe("argument board", () => {
  it("shows core, support, and exception statuses from the snapshot", () => {
    const html = renderArgumentBoard(zadehSession.arguments, zadehSession.evidence);
    expect(html).toContain('data-argument="A1"');
    expect(html).toContain("core: {S1}");
    expect(html).toContain('data-exception="X3" data-status="assumed-false"');
    expect(html).toContain("Both reports trace back to a single compromised collection channel");
  });
});

describe("resolution stepper", () => {
  it("renders a step from the service response verbatim", () => {
    const step = attackStep.step!;
    const html = renderTraceTimeline([step], attackStep.done);
    expect(html).toContain(`retract <strong>${step.item}</strong>`);
    expect(html).toContain(fmt(step.conflict_before));
    expect(html).toContain(fmt(step.conflict_after));
  });
});

describe("crystal-ball dialogue", () => {
  it("renders the prompt verbatim", () => {
    const prompt =
      'An infallible crystal ball declares: the evidence "r" is true, and yet the core position "S1" is false. What could explain this?';
    const html = renderDialogue("A1", prompt);
    expect(html).toContain(prompt.replace(/"/g, "&quot;"));
  });
});

describe("what-if preview", () => {
  it("shows the hypothetical conflict from the service", () => {
    const html = renderWhatIfPreview(zadehWhatIf);
    expect(html).toContain(`K = ${fmt(zadehWhatIf.conflict)}`);
    expect(html).toContain('data-retracted="X3"');
  });
});

describe("voi panel", () => {
  it("plots flip probability against congruence from the service", () => {
    const html = renderVoiPanel(attackVoi);
    expect(html).toContain(`data-flip="${fmt(attackVoi.flip_probability)}"`);
    expect(html).toContain(`data-congruence="${fmt(attackVoi.congruence)}"`);
    expect(html).toContain(`favored: <strong>${attackVoi.favored}</strong>`);
  });
});

describe("number formatting", () => {
  it("trims without losing the headline values", () => {
    expect(fmt(0.9999)).toBe("0.9999");
    expect(fmt(1)).toBe("1.0");
    expect(fmt(0)).toBe("0.0");
    expect(fmt(0.45)).toBe("0.45");
  });
});
