// @vitest-environment happy-dom
//
// Drives the mounted UI against a fake fetch that replays recorded server
// answers, so the scripted interactions below exercise the real wiring
// (queue, rendering, tab switching) without a network.

import { beforeEach, describe, expect, test } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { mountApp, type App } from "../src/app.js";

import drpModel from "./fixtures/drp_model.json";
import drpTestgenRule1 from "./fixtures/drp_testgen_rule1.json";
import drpWeave from "./fixtures/drp_weave.json";
import v2iModel from "./fixtures/v2i_model.json";
import v2iSession0 from "./fixtures/v2i_session_0.json";
import v2iSession1 from "./fixtures/v2i_session_1.json";
import v2iSession2 from "./fixtures/v2i_session_2.json";

interface Route {
  method: string;
  path: string;
  replies: unknown[]; // consumed in order, last one sticks
  status?: number;
}

function fakeFetch(routes: Route[]): FetchLike {
  return async (url, init) => {
    const method = init?.method ?? "GET";
    const path = new URL(String(url)).pathname;
    const route = routes.find((r) => r.method === method && r.path === path);
    if (!route) throw new Error(`unexpected request ${method} ${path}`);
    const body =
      route.replies.length > 1 ? route.replies.shift() : route.replies[0];
    const status = route.status ?? 200;
    return {
      ok: status < 400,
      status,
      statusText: "",
      json: async () => body,
    } as Response;
  };
}

function mountWith(routes: Route[]): { app: App; root: HTMLElement } {
  const root = document.createElement("div");
  document.body.append(root);
  const api = new ApiClient("http://fake", fakeFetch(routes));
  return { app: mountApp(root, api), root };
}

function text(root: HTMLElement, id: string): string {
  const node = root.querySelector(`#${id}`);
  if (!node) throw new Error(`missing #${id}`);
  return node.textContent ?? "";
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("simulation walkthrough", () => {
  test("two choice clicks reach wait_certificate with 2 steps", async () => {
    const { app, root } = mountWith([
      { method: "POST", path: "/models", replies: [v2iModel], status: 201 },
      {
        method: "POST",
        path: "/models/m1/sessions",
        replies: [v2iSession0],
        status: 201,
      },
      {
        method: "POST",
        path: "/sessions/s1/step",
        replies: [v2iSession1, v2iSession2],
      },
    ]);

    (root.querySelector("#model-text") as HTMLTextAreaElement).value =
      "system V2I; ...";
    (root.querySelector("#load-model") as HTMLElement).click();
    await app.idle();
    expect(text(root, "model-stats")).toContain("7/11/16");

    (root.querySelector("#new-session") as HTMLElement).click();
    await app.idle();
    expect(text(root, "sim-status")).toBe("status: 0 steps");
    expect(root.querySelectorAll("#sim-choices button.choice")).toHaveLength(3);

    (root.querySelector("#sim-choices button.choice") as HTMLElement).click();
    await app.idle();
    expect(text(root, "sim-status")).toBe("status: 1 steps");

    (root.querySelector("#sim-choices button.choice") as HTMLElement).click();
    await app.idle();

    expect(text(root, "sim-status")).toBe("status: 2 steps");
    expect(text(root, "sim-state")).toBe(
      "@wait_certificate {DynamicPlannigRoute, currentPosition}",
    );
    const labels = Array.from(
      root.querySelectorAll("#sim-choices button.choice"),
      (b) => b.textContent,
    );
    expect(labels).toEqual([
      "[1] ?response{certificate01} !require_info_login{} -> wait_info",
      "[2] ?response{certificate02} !ask_user{certificate02} -> wait_decision",
      "[3] ?response{certificate03} !disagree_certificate{} -> wait_certificate",
    ]);
    expect(text(root, "sim-trace")).toContain("?request_information{}");
    expect(text(root, "status-bar")).toBe("");
  });

  test("a burst of clicks is serialized, not interleaved", async () => {
    let inFlight = 0;
    let overlap = 0;
    const base = fakeFetch([
      { method: "POST", path: "/models", replies: [v2iModel], status: 201 },
      {
        method: "POST",
        path: "/models/m1/sessions",
        replies: [v2iSession0],
        status: 201,
      },
      {
        method: "POST",
        path: "/sessions/s1/step",
        replies: [v2iSession1, v2iSession2],
      },
    ]);
    const counting: FetchLike = async (url, init) => {
      inFlight += 1;
      overlap = Math.max(overlap, inFlight);
      await new Promise((r) => setTimeout(r, 1));
      const resp = await base(url, init);
      inFlight -= 1;
      return resp;
    };
    const root = document.createElement("div");
    document.body.append(root);
    const app = mountApp(root, new ApiClient("http://fake", counting));

    (root.querySelector("#model-text") as HTMLTextAreaElement).value = "x";
    (root.querySelector("#load-model") as HTMLElement).click();
    await app.idle();
    (root.querySelector("#new-session") as HTMLElement).click();
    await app.idle();

    // click the same button object twice without waiting in between
    const first = root.querySelector("#sim-choices button.choice") as HTMLElement;
    first.click();
    first.click();
    await app.idle();

    expect(overlap).toBe(1);
    expect(text(root, "sim-status")).toBe("status: 2 steps");
  });
});

describe("generation flow", () => {
  test("generate renders the authorized step as a hit", async () => {
    const { app, root } = mountWith([
      { method: "POST", path: "/models", replies: [drpModel], status: 201 },
      {
        method: "POST",
        path: "/models/m2/testgen",
        replies: [drpTestgenRule1],
      },
    ]);

    (root.querySelector("#model-text") as HTMLTextAreaElement).value = "x";
    (root.querySelector("#load-model") as HTMLElement).click();
    await app.idle();

    (root.querySelector("#purposes-text") as HTMLTextAreaElement).value =
      "purpose { instance {server}0; source S1; destination S2; input ask_access(log1, pwd1, GPSin); output access_authorized(); }";
    (root.querySelector("#generate") as HTMLElement).click();
    await app.idle();

    expect((root.querySelector("#panel-results") as HTMLElement).hidden).toBe(false);
    expect(text(root, "gen-summary")).toBe("1 step, 0 jumps, 1 objective(s) hit");
    const items = Array.from(root.querySelectorAll("#testcase li"));
    expect(items.map((li) => [li.className, li.textContent])).toEqual([
      ["comment", "// hit: purpose 1"],
      ["hit", "?ask_access{log1,pwd1,GPSin} !access_authorized{}"],
    ]);
  });

  test("weave shows the before/after stats and report", async () => {
    const { app, root } = mountWith([
      { method: "POST", path: "/models", replies: [drpModel], status: 201 },
      { method: "POST", path: "/models/m2/weave", replies: [drpWeave] },
    ]);

    (root.querySelector("#model-text") as HTMLTextAreaElement).value = "x";
    (root.querySelector("#load-model") as HTMLElement).click();
    await app.idle();

    (root.querySelector("#weave") as HTMLElement).click();
    await app.idle();

    expect(text(root, "weave-summary")).toBe("3/3/6 -> 3/5/8");
    expect(text(root, "weave-report")).toContain("t5: synthesized S2 -> S2");
    // the woven model becomes current: stats and selector follow it
    expect(text(root, "model-stats")).toContain("3/5/8");
    const options = Array.from(
      root.querySelectorAll("#model-select option"),
      (o) => o.textContent,
    );
    expect(options).toEqual(["m2 (3/3/6)", "m3 (3/5/8)"]);
  });
});

describe("error reporting", () => {
  test("server envelope lands in the status bar with its location", async () => {
    const { app, root } = mountWith([
      {
        method: "POST",
        path: "/models",
        replies: [
          {
            error: {
              code: "syntax_error",
              message: "expected ';'",
              location: { line: 3, column: 7 },
            },
          },
        ],
        status: 422,
      },
    ]);

    (root.querySelector("#model-text") as HTMLTextAreaElement).value = "nope";
    (root.querySelector("#load-model") as HTMLElement).click();
    await app.idle();

    expect(text(root, "status-bar")).toBe(
      "syntax_error: expected ';' (line 3, column 7)",
    );
  });

  test("acting without a model is caught locally", async () => {
    const { app, root } = mountWith([]);
    (root.querySelector("#new-session") as HTMLElement).click();
    await app.idle();
    expect(text(root, "status-bar")).toBe("load a model first");
  });
});
