/**
 * Typed client for the studio HTTP API.
 *
 * All errors surface as ApiError carrying the server's structured
 * {code, message} payload; the caller decides whether to roll back.
 */

export type LineCard = {
  id: string;
  text: string;
  tokens: string[];
  log_probs: number[];
  overlap: number;
  selected: boolean;
  in_poem: boolean;
};

export type SessionView = {
  id: string;
  created_at: string;
  updated_at: string;
  offered_count: number;
  selected: string[];
  gen: {
    temperature: number;
    seed: number;
    max_ngram_overlap: number;
    max_tokens: number;
    allow_unk: boolean;
  };
};

export type WireEntry = {
  kind: "line" | "break";
  line_id: string | null;
  display_text: string | null;
};

export type PoemView = {
  id: string;
  session_id: string;
  title: string;
  status: "draft" | "final";
  entries: WireEntry[];
};

export type EditCheck = {
  accepted: boolean;
  summary: string;
  changes: string[];
};

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<never> {
  let code = "http_error";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(resp.status, code, message);
}

export class StudioClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  createSession(overrides: { seed?: number; temperature?: number } = {}): Promise<SessionView> {
    return this.request("POST", "/sessions", overrides);
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  requestLines(sessionId: string, count: number): Promise<{ lines: LineCard[] }> {
    return this.request("POST", `/sessions/${sessionId}/lines`, { count });
  }

  getLines(sessionId: string): Promise<{ lines: LineCard[] }> {
    return this.request("GET", `/sessions/${sessionId}/lines`);
  }

  updateSelection(sessionId: string, add: string[], remove: string[]): Promise<SessionView> {
    return this.request("POST", `/sessions/${sessionId}/selection`, { add, remove });
  }

  validateEdit(original: string, edited: string): Promise<EditCheck> {
    return this.request("POST", "/validate-edit", { original, edited });
  }

  createPoem(sessionId: string, title: string, entries: WireEntry[]): Promise<PoemView> {
    return this.request("POST", `/sessions/${sessionId}/poems`, { title, entries });
  }

  listPoems(sessionId: string): Promise<{ poems: PoemView[] }> {
    return this.request("GET", `/sessions/${sessionId}/poems`);
  }

  getPoem(poemId: string): Promise<PoemView> {
    return this.request("GET", `/poems/${poemId}`);
  }

  updateEntries(poemId: string, entries: WireEntry[], title?: string): Promise<PoemView> {
    return this.request("PUT", `/poems/${poemId}/entries`, { entries, title: title ?? null });
  }

  finalizePoem(poemId: string): Promise<PoemView> {
    return this.request("POST", `/poems/${poemId}/finalize`);
  }

  async exportText(poemId: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/poems/${poemId}/export?format=text`);
    if (!resp.ok) await parseError(resp);
    return await resp.text();
  }
}
