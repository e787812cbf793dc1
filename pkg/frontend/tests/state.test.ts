// SessionController behaviour against a protocol-faithful mock service.
//
// The mock replays scripted weighing sequences recorded from the real
// service (11 coins, sorting semantics) and speaks the same wire shapes,
// including 409-with-detail on contradictory outcomes.

import { describe, expect, it } from "vitest";

import { Contradiction, HistoryEntry, OutcomeSymbol, PanDoc, SessionApi } from "../src/api.js";
import { SessionController, describeResult } from "../src/state.js";
import { describePan } from "../src/ui.js";

type Script = {
  weighing?: { left: number[]; right: number[] };
  children?: Partial<Record<OutcomeSymbol, Script | "contradiction">>;
  result?: { uniform: boolean; fakes: number[] };
};

// Weighing sequence toward fake coin 1 (outcomes >,>,=,=,=,=,=) and the
// all-balanced path to the uniform verdict, as the service presents them.
function fakeCoinOneScript(): Script {
  const steps: Array<[number[], number[], OutcomeSymbol]> = [
    [[1, 2, 3], [4, 5, 6], ">"],
    [[1, 7, 8], [2, 9, 10], ">"],
    [[5, 7, 9], [6, 8, 10], "="],
    [[2, 9, 11], [3, 4, 5], "="],
    [[2, 6, 8], [3, 5, 11], "="],
    [[4], [9], "="],
    [[10], [11], "="],
  ];
  const leaf: Script = { result: { uniform: false, fakes: [1] } };
  let node = leaf;
  for (let i = steps.length - 1; i >= 0; i--) {
    const [left, right, outcome] = steps[i];
    node = { weighing: { left, right }, children: { [outcome]: node } };
  }
  // the final comparison of {10}:{11} cannot come out "<" for any remaining
  // hypothesis: scripted as a contradiction
  let probe: Script = node;
  for (let i = 0; i < steps.length - 1; i++) {
    probe = probe.children![steps[i][2]] as Script;
  }
  probe.children!["<"] = "contradiction";
  return node;
}

function uniformScript(): Script {
  const steps: Array<[number[], number[]]> = [
    [[1, 2, 3], [4, 5, 6]],
    [[1, 7, 8], [4, 9, 10]],
    [[1, 2, 7], [3, 4, 8]],
    [[1, 3], [2, 4]],
    [[1, 2], [10, 11]],
    [[1], [2]],
  ];
  let node: Script = { result: { uniform: true, fakes: [] } };
  for (let i = steps.length - 1; i >= 0; i--) {
    const [left, right] = steps[i];
    node = { weighing: { left, right }, children: { "=": node } };
  }
  return node;
}

function merge(a: Script, b: Script): Script {
  // the two scripts share their first weighing; splice b's "=" branch in
  const merged: Script = {
    weighing: a.weighing,
    children: { ...a.children, "=": b.children!["="]! },
  };
  return merged;
}

class MockService {
  sessionsCreated = 0;
  private sessions = new Map<string, { node: Script; history: HistoryEntry[] }>();

  constructor(private readonly root: Script) {}

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    if (method === "POST" && path === "/sessions") {
      this.sessionsCreated += 1;
      const id = `mock-${this.sessionsCreated}`;
      this.sessions.set(id, { node: this.root, history: [] });
      return json(200, { id, n: 11, semantics: "sort" });
    }
    const nextMatch = path.match(/^\/sessions\/([^/]+)\/next$/);
    if (method === "GET" && nextMatch) {
      const s = this.session(nextMatch[1]);
      return json(200, this.nextDoc(s.node));
    }
    const outcomeMatch = path.match(/^\/sessions\/([^/]+)\/outcome$/);
    if (method === "POST" && outcomeMatch) {
      const s = this.session(outcomeMatch[1]);
      const { outcome } = JSON.parse(String(init?.body)) as { outcome: OutcomeSymbol };
      const child = s.node.children?.[outcome];
      if (child === undefined || child === "contradiction") {
        return json(409, { detail: "contradictory outcome history" });
      }
      s.history.push(panify(s.node.weighing!, outcome));
      s.node = child;
      return json(200, this.stateDoc(outcomeMatch[1], s));
    }
    const stateMatch = path.match(/^\/sessions\/([^/]+)$/);
    if (method === "GET" && stateMatch) {
      const s = this.session(stateMatch[1]);
      return json(200, this.stateDoc(stateMatch[1], s));
    }
    return json(404, { detail: "not found" });
  };

  private session(id: string) {
    const s = this.sessions.get(id);
    if (!s) throw new Error(`mock: unknown session ${id}`);
    return s;
  }

  private nextDoc(node: Script) {
    if (node.result) {
      return { done: true, result: node.result };
    }
    return {
      done: false,
      weighing_index: 1,
      left: { coins: node.weighing!.left, refs: 0 },
      right: { coins: node.weighing!.right, refs: 0 },
    };
  }

  private stateDoc(id: string, s: { node: Script; history: HistoryEntry[] }) {
    return {
      id,
      n: 11,
      semantics: "sort",
      status: s.node.result ? "finished" : "awaiting-outcome",
      history: s.history,
      result: s.node.result ?? null,
    };
  }
}

function panify(w: { left: number[]; right: number[] }, outcome: OutcomeSymbol): HistoryEntry {
  return {
    left: { coins: w.left, refs: 0 },
    right: { coins: w.right, refs: 0 },
    outcome,
  };
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function makeController() {
  const mock = new MockService(merge(fakeCoinOneScript(), uniformScript()));
  const api = new SessionApi("http://mock", mock.fetch);
  return { mock, controller: new SessionController(api) };
}

describe("session start", () => {
  it("shows the first weighing of an 11-coin session", async () => {
    const { controller } = makeController();
    const view = await controller.start(11);
    expect(view.next?.left?.coins).toEqual([1, 2, 3]);
    expect(view.next?.right?.coins).toEqual([4, 5, 6]);
    expect(view.result).toBeNull();
  });
});

describe("scripted sessions", () => {
  it("classifies coin 1 after >,>,=,=,=,=,=", async () => {
    const { controller } = makeController();
    await controller.start(11);
    const clicks: OutcomeSymbol[] = [">", ">", "=", "=", "=", "=", "="];
    let view = controller.view!;
    for (const c of clicks) {
      view = await controller.submitOutcome(c);
    }
    expect(view.result).toEqual({ uniform: false, fakes: [1] });
    expect(describeResult(view.result!)).toBe("coin 1 is fake");
    expect(view.history).toHaveLength(7);
  });

  it("reports the uniform verdict on an all-balanced session", async () => {
    const { controller } = makeController();
    await controller.start(11);
    let view = controller.view!;
    for (let i = 0; i < 6; i++) {
      view = await controller.submitOutcome("=");
    }
    expect(view.result?.uniform).toBe(true);
    expect(describeResult(view.result!)).toBe("all coins have the same weight");
  });
});

describe("contradictions", () => {
  it("shows the banner and does not advance", async () => {
    const { controller } = makeController();
    await controller.start(11);
    for (const c of [">", ">", "=", "=", "=", "="] as OutcomeSymbol[]) {
      await controller.submitOutcome(c);
    }
    const before = controller.view!;
    const view = await controller.submitOutcome("<");
    expect(view.banner).toBe("re-check that weighing");
    expect(view.history).toEqual(before.history);
    expect(view.next).toEqual(before.next);
    // the honest answer still goes through afterwards
    const done = await controller.submitOutcome("=");
    expect(done.result?.fakes).toEqual([1]);
  });
});

describe("undo", () => {
  it("starts a fresh session and replays a prefix", async () => {
    const { mock, controller } = makeController();
    await controller.start(11);
    for (const c of [">", ">", "=", "="] as OutcomeSymbol[]) {
      await controller.submitOutcome(c);
    }
    const created = mock.sessionsCreated;
    const view = await controller.undoTo(2);
    expect(mock.sessionsCreated).toBe(created + 1);
    expect(view.history.map((h) => h.outcome)).toEqual([">", ">"]);
    expect(view.next?.left?.coins).toEqual([5, 7, 9]);
  });
});

describe("failures", () => {
  it("keeps state and surfaces an error when the network dies", async () => {
    const { controller } = makeController();
    await controller.start(11);
    const brokenApi = new SessionApi("http://mock", async () => {
      throw new Error("connection refused");
    });
    (controller as unknown as { api: SessionApi }).api = brokenApi;
    const before = controller.view!;
    const view = await controller.submitOutcome(">");
    expect(view.error).toContain("connection refused");
    expect(view.history).toEqual(before.history);
  });
});

describe("pan rendering", () => {
  it("lists coins and reference padding", () => {
    const pan: PanDoc = { coins: [2, 5], refs: 1 };
    expect(describePan(pan)).toBe("2, 5, ref");
    expect(describePan({ coins: [], refs: 0 })).toBe("(empty)");
  });
});
