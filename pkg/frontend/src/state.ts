// Session view-model: a pure mirror of the server's session state.
//
// The client never second-guesses the strategy: every transition round-trips
// through the service, optimistic updates are deliberately absent, and undo
// works by starting a fresh session and replaying a prefix of the recorded
// outcomes.

import {
  Contradiction,
  HistoryEntry,
  NextDoc,
  OutcomeSymbol,
  ResultDoc,
  SessionApi,
} from "./api.js";

export interface SessionView {
  sessionId: string;
  n: number;
  next: NextDoc | null;
  history: HistoryEntry[];
  result: ResultDoc | null;
  banner: string | null; // "re-check that weighing" style warnings
  busy: boolean;
  error: string | null; // network trouble; retry affordance
}

export function describeResult(result: ResultDoc): string {
  if (result.uniform) {
    return "all coins have the same weight";
  }
  if (result.fakes.length === 1) {
    return `coin ${result.fakes[0]} is fake`;
  }
  return `fake coins: ${result.fakes.join(", ")}`;
}

export class SessionController {
  view: SessionView | null = null;
  private listeners: Array<(view: SessionView) => void> = [];

  constructor(private readonly api: SessionApi) {}

  onChange(listener: (view: SessionView) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    if (this.view) {
      for (const listener of this.listeners) {
        listener(this.view);
      }
    }
  }

  async start(n: number): Promise<SessionView> {
    const sessionId = await this.api.createSession(n);
    const next = await this.api.next(sessionId);
    this.view = {
      sessionId,
      n,
      next,
      history: [],
      result: next.done ? next.result ?? null : null,
      banner: null,
      busy: false,
      error: null,
    };
    this.emit();
    return this.view;
  }

  async submitOutcome(symbol: OutcomeSymbol): Promise<SessionView> {
    const view = this.mustHaveView();
    if (view.busy || (view.next && view.next.done)) {
      return view;
    }
    this.view = { ...view, busy: true, banner: null, error: null };
    this.emit();
    try {
      const state = await this.api.submitOutcome(view.sessionId, symbol);
      const next = await this.api.next(view.sessionId);
      this.view = {
        ...this.view,
        busy: false,
        next,
        history: state.history,
        result: state.result,
      };
    } catch (err) {
      if (err instanceof Contradiction) {
        // server refused: state is unchanged there, so only show the banner
        this.view = { ...view, busy: false, banner: "re-check that weighing" };
      } else {
        this.view = { ...view, busy: false, error: describeError(err) };
      }
    }
    this.emit();
    return this.view!;
  }

  /** Restart from scratch and replay the first `index` outcomes. */
  async undoTo(index: number): Promise<SessionView> {
    const view = this.mustHaveView();
    const replay = view.history.slice(0, index).map((h) => h.outcome);
    const sessionId = await this.api.createSession(view.n);
    for (const outcome of replay) {
      await this.api.submitOutcome(sessionId, outcome);
    }
    const [next, state] = [await this.api.next(sessionId), await this.api.state(sessionId)];
    this.view = {
      sessionId,
      n: view.n,
      next,
      history: state.history,
      result: state.result,
      banner: null,
      busy: false,
      error: null,
    };
    this.emit();
    return this.view;
  }

  private mustHaveView(): SessionView {
    if (!this.view) {
      throw new Error("no active session");
    }
    return this.view;
  }
}

function describeError(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
