// Optional end-to-end check against a live service.  Point WEIGHWRIGHT_URL
// at a running `weighwright serve` to activate; skipped otherwise so the
// suite stays hermetic.

import { describe, expect, it } from "vitest";

import { OutcomeSymbol, SessionApi } from "../src/api.js";
import { SessionController, describeResult } from "../src/state.js";

const baseUrl = process.env.WEIGHWRIGHT_URL;

describe.skipIf(!baseUrl)("against a live service", () => {
  it("walks the fake-coin-1 script to the verdict", async () => {
    const controller = new SessionController(new SessionApi(baseUrl!));
    await controller.start(11);
    const clicks: OutcomeSymbol[] = [">", ">", "=", "=", "=", "=", "="];
    let view = controller.view!;
    for (const c of clicks) {
      view = await controller.submitOutcome(c);
    }
    expect(view.result).not.toBeNull();
    expect(describeResult(view.result!)).toBe("coin 1 is fake");
  });

  it("reports uniform coins on an all-balanced run", async () => {
    const controller = new SessionController(new SessionApi(baseUrl!));
    await controller.start(11);
    let view = controller.view!;
    while (!view.result) {
      view = await controller.submitOutcome("=");
    }
    expect(describeResult(view.result)).toBe("all coins have the same weight");
  });
});
