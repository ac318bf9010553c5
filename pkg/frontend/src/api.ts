// Typed client for the engine's HTTP API. The UI performs no direct LLM or
// task calls; everything flows through these endpoints.

export interface RespondResponse {
  session_id: string;
  answer: string;
  turn_id: number;
  tasks_used: string[];
  language: string;
  error: string | null;
}

export interface TraceRecord {
  task_name: string;
  rendered_inputs: string[];
  rendered_output: string;
  step_index: number;
  duration: number;
  failed: boolean;
}

export interface TraceResponse {
  records: TraceRecord[];
  tasks_used: string[];
  language: string;
  query: string;
  answer: string;
}

export interface HistoryTurn {
  turn_id: number;
  query: string;
  answer: string;
  tasks_used: string[];
  language: string;
}

export interface ConfigResponse {
  languages: string[];
  strategy: string;
  lang_mode: string;
  max_iterations: number;
}

export interface MetadataUpload {
  filename: string;
  content_b64: string;
  kind: string;
  caption: string;
}

export interface MetadataRef {
  reference: string;
  kind: string;
  caption: string;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
    private apiToken: string | null = null,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.apiToken) headers["X-API-Token"] = this.apiToken;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const parsed = (await response.json()) as { detail?: string };
        if (parsed.detail) detail = parsed.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  config(): Promise<ConfigResponse> {
    return this.request("GET", "/api/config");
  }

  async createSession(language?: string): Promise<string> {
    const body = language ? { language } : {};
    const result = await this.request<{ session_id: string }>("POST", "/api/sessions", body);
    return result.session_id;
  }

  respond(
    sessionId: string,
    query: string,
    metadata: MetadataRef[] = [],
    language?: string,
  ): Promise<RespondResponse> {
    const body: Record<string, unknown> = { session_id: sessionId, query, metadata };
    if (language) body.language = language;
    return this.request("POST", "/api/respond", body);
  }

  async history(sessionId: string): Promise<HistoryTurn[]> {
    const result = await this.request<{ turns: HistoryTurn[] }>(
      "GET",
      `/api/sessions/${sessionId}/history`,
    );
    return result.turns;
  }

  /** Full turn trace, or null when the turn does not exist. */
  async trace(sessionId: string, turnId: number): Promise<TraceResponse | null> {
    try {
      return await this.request("GET", `/api/sessions/${sessionId}/trace/${turnId}`);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) return null;
      throw error;
    }
  }

  async uploadMetadata(upload: MetadataUpload): Promise<string> {
    const result = await this.request<{ reference: string }>("POST", "/api/metadata", upload);
    return result.reference;
  }
}
