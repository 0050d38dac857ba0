// Mirrors of the service's JSON shapes. The UI computes nothing itself:
// every number rendered arrives in one of these payloads.

export interface ImpactView {
  kind: "undercut" | "rebut";
  target?: string[];
}

export interface ExceptionView {
  exception_id: string;
  description: string;
  probability: number;
  impact: ImpactView;
  status: "assumed-false" | "active" | "confirmed-true";
}

export interface ArgumentView {
  id: string;
  evidence_id: string;
  core: string[];
  base_support: number;
  exceptions: ExceptionView[];
}

export interface EvidenceView {
  id: string;
  description: string;
  reported_at: number;
}

export interface MassEntry {
  subset: string[];
  mass: number;
}

export interface PairwiseConflict {
  arguments: string[];
  conflict: number;
}

export interface FusionView {
  conflict: number;
  masses: MassEntry[];
  belief: Record<string, number>;
  plausibility: Record<string, number>;
  pairwise_conflict: PairwiseConflict[];
  contributing_arguments: string[];
  version?: number;
  retracted?: string[];
}

export interface LedgerRecordView {
  id: string;
  kind: "bottom-up" | "top-down";
  source: string[];
  committed: string[];
  amount: number;
  state: "in-force" | "retracted";
}

export interface ElicitationView {
  state: "awaiting-response" | "closed";
  round: number;
  prompt: string | null;
  transcript: [string, string][];
}

export interface SessionSnapshot {
  session_id: string;
  version: number;
  frame: string[];
  evidence: EvidenceView[];
  arguments: ArgumentView[];
  ledger_records: LedgerRecordView[];
  retractable_items: string[];
  elicitations: Record<string, ElicitationView>;
  fusion: FusionView | null;
  fusion_error: { error: string; detail: string } | null;
}

export interface CulpabilityEntryView {
  item: string;
  culpability: number;
  conflict_if_retracted: number;
}

export interface CulpabilityView {
  conflict: number;
  entries: CulpabilityEntryView[];
  version?: number;
}

export interface StepView {
  index: number;
  conflict_before: number;
  item: string;
  culpability: number;
  conflict_after: number;
}

export interface ResolveStepResponse {
  done: string | null;
  step: StepView | null;
  fusion: FusionView;
  version: number;
}

export interface VoiAnswerView {
  probability: number;
  map_after: string | null;
  flips: boolean;
}

export interface VoiView {
  favored: string;
  flip_probability: number;
  congruence: number;
  answers: VoiAnswerView[];
  version?: number;
}
