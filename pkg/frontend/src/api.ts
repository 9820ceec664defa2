// Typed client for the secweave HTTP API. One method per endpoint, no
// state of its own; the fetch implementation is injectable for tests.

export interface Stats {
  states: number;
  transitions: number;
  signals: number;
  text: string;
}

export interface SignalView {
  name: string;
  param_types: string[];
}

export interface VariableView {
  name: string;
  type: string;
  init: string | number | boolean | null;
}

export interface TransitionView {
  index: number;
  label: string;
  source: string;
  target: string;
  input: { signal: string; params: string[] };
  output: { signal: string; args: string[] };
  predicate: string | null;
  actions: { var: string; expr: string }[];
}

export interface ModelView {
  id: string;
  system: string;
  process: string;
  initial_state: string;
  states: string[];
  stats: Stats;
  signals: SignalView[];
  variables: VariableView[];
  transitions: TransitionView[];
  text: string;
}

export interface ModelSummary {
  id: string;
  system: string;
  process: string;
  stats: Stats;
}

export interface WeaveEntry {
  label: string;
  rules: string[];
  strengthened: boolean;
  before: string | null;
  after: string | null;
}

export interface WeaveResult {
  id: string;
  report: string;
  stats_before: Stats;
  stats_after: Stats;
  entries: WeaveEntry[];
  synthesized: string[];
  warnings: string[];
  model: ModelView;
}

export interface ChoiceView {
  index: number;
  label: string;
  input: string;
  output: string;
  target: string;
}

export interface TraceStepView {
  input: string;
  output: string;
  source: string;
  target: string;
}

export interface SessionView {
  id: string;
  model_id: string;
  steps: number;
  state: string;
  valuation: Record<string, string | number | boolean>;
  choices: ChoiceView[];
  trace: TraceStepView[];
}

export interface PatternView {
  signal: string;
  args: string[] | null;
}

export interface PurposeView {
  instance: [string, number] | null;
  source: string | null;
  destination: string | null;
  input: PatternView | null;
  output: PatternView | null;
}

export interface ObjectivesResult {
  purposes: PurposeView[];
  text: string;
  warnings: string[];
}

export interface GenKnobs {
  depth_limit?: number;
  max_jumps?: number;
  rng_seed?: number;
  max_total_steps?: number;
}

export interface TestgenResult {
  testcase: string;
  hits: number[];
  jumps: number;
  explored: number;
  steps: { input: string; output: string }[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  location?: { file: string; line: number; column: number };
  partial?: string;
  diagnostics?: { location: string; message: string }[];
}

/** Thrown for any non-2xx answer; carries the server's error envelope. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const data = await resp.json();
    if (!resp.ok) {
      const envelope = (data as { error?: ApiErrorBody }).error;
      throw new ApiError(resp.status, envelope ?? { code: "error", message: resp.statusText });
    }
    return data as T;
  }

  listModels(): Promise<{ models: ModelSummary[] }> {
    return this.request("GET", "/models");
  }

  loadModel(text: string): Promise<ModelView> {
    return this.request("POST", "/models", { text });
  }

  getModel(id: string): Promise<ModelView> {
    return this.request("GET", `/models/${id}`);
  }

  weave(modelId: string, policy: string, config: string): Promise<WeaveResult> {
    return this.request("POST", `/models/${modelId}/weave`, { policy, config });
  }

  objectives(modelId: string, state: string, input: string, param: string): Promise<ObjectivesResult> {
    return this.request("POST", `/models/${modelId}/objectives`, { state, input, param });
  }

  testgen(modelId: string, purposes: string, params: GenKnobs = {}): Promise<TestgenResult> {
    return this.request("POST", `/models/${modelId}/testgen`, { purposes, params });
  }

  newSession(modelId: string): Promise<SessionView> {
    return this.request("POST", `/models/${modelId}/sessions`);
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  step(sessionId: string, index: number): Promise<SessionView> {
    return this.request("POST", `/sessions/${sessionId}/step`, { index });
  }

  undo(sessionId: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${sessionId}/undo`);
  }

  sessionTestcase(sessionId: string): Promise<{ text: string; steps: number }> {
    return this.request("GET", `/sessions/${sessionId}/testcase`);
  }
}
