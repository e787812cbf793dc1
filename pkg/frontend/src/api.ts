// Thin typed client for the weighwright session service.  All strategy
// logic lives server-side; this file only shapes requests and responses.

export interface PanDoc {
  coins: number[];
  refs: number;
}

export interface NextDoc {
  done: boolean;
  weighing_index?: number;
  left?: PanDoc;
  right?: PanDoc;
  result?: ResultDoc | null;
}

export interface ResultDoc {
  uniform: boolean;
  fakes: number[];
}

export interface HistoryEntry {
  left: PanDoc;
  right: PanDoc;
  outcome: OutcomeSymbol;
}

export interface StateDoc {
  id: string;
  n: number;
  semantics: string;
  status: "awaiting-outcome" | "finished";
  history: HistoryEntry[];
  result: ResultDoc | null;
}

export type OutcomeSymbol = "<" | "=" | ">";

export class Contradiction extends Error {}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async createSession(n: number, semantics = "sort"): Promise<string> {
    const doc = await this.request("POST", "/sessions", { n, semantics });
    return doc.id as string;
  }

  async next(sessionId: string): Promise<NextDoc> {
    return (await this.request("GET", `/sessions/${sessionId}/next`)) as NextDoc;
  }

  async submitOutcome(sessionId: string, outcome: OutcomeSymbol): Promise<StateDoc> {
    return (await this.request("POST", `/sessions/${sessionId}/outcome`, {
      outcome,
    })) as StateDoc;
  }

  async state(sessionId: string): Promise<StateDoc> {
    return (await this.request("GET", `/sessions/${sessionId}`)) as StateDoc;
  }

  private async request(method: string, path: string, body?: unknown) {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 409) {
      const doc = await response.json().catch(() => ({ detail: "conflict" }));
      throw new Contradiction(String(doc.detail ?? "conflict"));
    }
    if (!response.ok) {
      throw new ApiError(`${method} ${path} failed`, response.status);
    }
    return response.json();
  }
}
