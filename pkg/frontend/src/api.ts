import type {
  CulpabilityView,
  FusionView,
  ResolveStepResponse,
  SessionSnapshot,
  VoiView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export class VersionConflictError extends ApiError {
  constructor(detail: string) {
    super(409, "version-conflict", detail);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "error";
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    code = body.error ?? code;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (resp.status === 409) return new VersionConflictError(detail);
  return new ApiError(resp.status, code, detail);
}

export class WorkbenchApi {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${id}`);
  }

  getFusion(id: string): Promise<FusionView> {
    return this.request("GET", `/sessions/${id}/fusion`);
  }

  getCulpability(id: string): Promise<CulpabilityView> {
    return this.request("GET", `/sessions/${id}/culpability`);
  }

  whatIf(id: string, retract: string[]): Promise<FusionView> {
    return this.request("POST", `/sessions/${id}/whatif`, { retract });
  }

  resolveStep(id: string, expectedVersion: number): Promise<ResolveStepResponse> {
    return this.request("POST", `/sessions/${id}/resolve/step`, {
      expected_version: expectedVersion,
    });
  }

  setExceptionStatus(
    id: string,
    exceptionId: string,
    status: string,
    expectedVersion: number,
  ): Promise<{ version: number }> {
    return this.request("POST", `/sessions/${id}/exceptions/${exceptionId}/status`, {
      expected_version: expectedVersion,
      status,
    });
  }

  addEvidence(
    id: string,
    description: string,
    expectedVersion: number,
  ): Promise<{ evidence_id: string; version: number }> {
    return this.request("POST", `/sessions/${id}/evidence`, {
      expected_version: expectedVersion,
      description,
    });
  }

  addArgument(
    id: string,
    spec: { evidence_id: string; core: string[]; base_support: number },
    expectedVersion: number,
  ): Promise<{ argument_id: string; version: number }> {
    return this.request("POST", `/sessions/${id}/arguments`, {
      expected_version: expectedVersion,
      ...spec,
    });
  }

  startElicitation(
    id: string,
    argumentId: string,
    expectedVersion: number,
  ): Promise<{ prompt: string; version: number }> {
    return this.request("POST", `/sessions/${id}/arguments/${argumentId}/elicitation`, {
      expected_version: expectedVersion,
    });
  }

  respondElicitation(
    id: string,
    argumentId: string,
    body: { description: string; probability: number; impact: { kind: string; target?: string[] } },
    expectedVersion: number,
  ): Promise<{ next_prompt: string; exception_id: string; version: number }> {
    return this.request(
      "POST",
      `/sessions/${id}/arguments/${argumentId}/elicitation/response`,
      { expected_version: expectedVersion, ...body },
    );
  }

  passElicitation(
    id: string,
    argumentId: string,
    expectedVersion: number,
  ): Promise<{ version: number }> {
    return this.request("POST", `/sessions/${id}/arguments/${argumentId}/elicitation/pass`, {
      expected_version: expectedVersion,
    });
  }

  voi(
    id: string,
    answers: { probability: number; argument: { core: string[]; base_support: number } }[],
  ): Promise<VoiView> {
    return this.request("POST", `/sessions/${id}/voi`, { answers });
  }
}
