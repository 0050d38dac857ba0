// Browser wiring: mounts the views, polls by version, routes button clicks
// to the service.  All inference numbers come from the service; this file
// only moves JSON into renderers and clicks into requests.

import { ApiError, WorkbenchApi } from "./api.js";
import { SessionStore } from "./state.js";
import { renderArgumentBoard } from "./render/argumentBoard.js";
import { renderBeliefBars } from "./render/bars.js";
import { renderConflictGauge } from "./render/gauge.js";
import { renderCulpabilityTable } from "./render/culpability.js";
import { renderDialogue } from "./render/dialogue.js";
import { renderTraceTimeline } from "./render/trace.js";
import { renderVoiPanel } from "./render/voi.js";
import { renderWhatIfPanel, renderWhatIfPreview } from "./render/whatif.js";
import type { StepView } from "./types.js";

const POLL_MS = 2000;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing container #${id}`);
  return node;
}

function params(): { base: string; session: string } {
  const search = new URLSearchParams(window.location.search);
  return {
    base: search.get("service") ?? "http://127.0.0.1:8787",
    session: search.get("session") ?? "zadeh-pathology",
  };
}

export function boot(): void {
  const { base, session } = params();
  const api = new WorkbenchApi(base);
  const store = new SessionStore(api, session);
  const traceSteps: StepView[] = [];
  let terminal: string | null = null;
  const checkedRetractions: string[] = [];

  store.subscribe((state) => {
    const snapshot = state.snapshot;
    if (!snapshot) return;
    el("session-meta").textContent =
      `${snapshot.session_id} - version ${snapshot.version}` +
      (state.lastError ? ` - ${state.lastError}` : "");
    el("argument-board").innerHTML = renderArgumentBoard(
      snapshot.arguments, snapshot.evidence);
    if (snapshot.fusion) {
      el("fusion-dashboard").innerHTML =
        renderConflictGauge(snapshot.fusion.conflict) + renderBeliefBars(snapshot.fusion);
    } else {
      el("fusion-dashboard").textContent =
        `fusion unavailable: ${snapshot.fusion_error?.detail ?? "unknown"}`;
    }
    el("whatif-panel").innerHTML = renderWhatIfPanel(
      snapshot.retractable_items, checkedRetractions);
    void refreshCulpability();
  });

  async function refreshCulpability(): Promise<void> {
    try {
      const view = await api.getCulpability(session);
      el("culpability-panel").innerHTML = renderCulpabilityTable(view);
    } catch (err) {
      if (err instanceof ApiError && err.code === "no-conflict") {
        el("culpability-panel").innerHTML =
          '<p class="culpability-empty">no conflict to attribute</p>';
      }
    }
  }

  el("step-button").addEventListener("click", () => {
    void store.mutate(async (version) => {
      const outcome = await api.resolveStep(session, version);
      if (outcome.step) traceSteps.push(outcome.step);
      terminal = outcome.done;
      el("trace-panel").innerHTML = renderTraceTimeline(traceSteps, terminal);
      return outcome;
    });
  });

  el("culpability-panel").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (!target.classList.contains("retract-button")) return;
    const item = target.dataset.item;
    if (!item) return;
    void store.mutate((version) =>
      api.setExceptionStatus(session, item, "active", version));
  });

  el("whatif-panel").addEventListener("change", () => {
    const boxes = el("whatif-panel").querySelectorAll<HTMLInputElement>(".whatif-toggle");
    checkedRetractions.length = 0;
    for (const box of boxes) if (box.checked) checkedRetractions.push(box.value);
    const preview = el("whatif-panel").querySelector(".whatif-preview");
    if (!preview) return;
    if (checkedRetractions.length === 0) {
      preview.innerHTML = "";
      return;
    }
    void api.whatIf(session, [...checkedRetractions]).then((view) => {
      preview.innerHTML = renderWhatIfPreview(view);
    });
  });

  el("argument-board").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (!target.classList.contains("elicit-button")) return;
    const argumentId = target.dataset.argument;
    if (!argumentId) return;
    void store.mutate(async (version) => {
      const started = await api.startElicitation(session, argumentId, version);
      el("dialogue-panel").innerHTML = renderDialogue(argumentId, started.prompt);
      wireDialogue(argumentId);
      return started;
    });
  });

  function wireDialogue(argumentId: string): void {
    const form = el("dialogue-panel").querySelector<HTMLFormElement>(".qualification-form");
    if (!form) return;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      const impactKind = String(data.get("impact"));
      const impact =
        impactKind === "rebut"
          ? { kind: "rebut", target: String(data.get("target")).split(",").map((s) => s.trim()) }
          : { kind: "undercut" };
      void store.mutate(async (version) => {
        const reply = await api.respondElicitation(session, argumentId, {
          description: String(data.get("description")),
          probability: Number(data.get("probability")),
          impact,
        }, version);
        el("dialogue-panel").innerHTML = renderDialogue(argumentId, reply.next_prompt);
        wireDialogue(argumentId);
        return reply;
      });
    });
    form.querySelector(".pass-button")?.addEventListener("click", () => {
      void store.mutate(async (version) => {
        const done = await api.passElicitation(session, argumentId, version);
        el("dialogue-panel").innerHTML = "";
        return done;
      });
    });
  }

  el("voi-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const textarea = el("voi-form").querySelector("textarea");
    if (!textarea) return;
    const answers = JSON.parse((textarea as HTMLTextAreaElement).value);
    void api.voi(session, answers).then((view) => {
      el("voi-panel").innerHTML = renderVoiPanel(view);
    });
  });

  void store.refresh();
  store.startPolling(POLL_MS);
}

if (typeof document !== "undefined" && document.getElementById("argument-board")) {
  boot();
}
