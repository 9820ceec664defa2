// DOM wiring: four tabs (model | purposes | results | simulation) over the
// HTTP API. All server state is re-rendered from confirmed responses; the
// UI never predicts an outcome. Mutations run through a serial queue so a
// burst of clicks cannot interleave requests; tests await idle().

import { ApiClient, ApiError } from "./api.js";
import type {
  ModelView,
  SessionView,
  TestgenResult,
  WeaveResult,
} from "./api.js";
import { modelSvg } from "./graph.js";
import * as vm from "./viewmodel.js";

type Attrs = Record<string, string>;

function el(
  doc: Document,
  tag: string,
  attrs: Attrs = {},
  children: (Node | string)[] = [],
): HTMLElement {
  const node = doc.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const c of children)
    node.append(typeof c === "string" ? doc.createTextNode(c) : c);
  return node;
}

const TABS = ["model", "purposes", "results", "simulation"] as const;
type Tab = (typeof TABS)[number];

export class App {
  private readonly doc: Document;
  private queue: Promise<void> = Promise.resolve();
  private models: ModelView[] = [];
  private current: ModelView | null = null;
  private session: SessionView | null = null;
  private lastWeave: WeaveResult | null = null;
  private lastGen: TestgenResult | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.doc = root.ownerDocument;
    this.build();
  }

  /** Resolves when every queued action so far has finished. */
  idle(): Promise<void> {
    return this.queue;
  }

  private run(fn: () => Promise<void>): void {
    this.queue = this.queue
      .then(fn)
      .then(() => this.note(""))
      .catch((err) => this.note(describe(err)));
  }

  private $(id: string): HTMLElement {
    const node = this.root.querySelector(`#${id}`);
    if (!node) throw new Error(`missing element #${id}`);
    return node as HTMLElement;
  }

  private note(message: string): void {
    this.$("status-bar").textContent = message;
  }

  // -- construction --------------------------------------------------------

  private build(): void {
    const d = this.doc;
    const tabs = el(d, "nav", { id: "tabs" });
    for (const name of TABS) {
      const b = el(d, "button", { "data-tab": name, id: `tab-${name}` }, [name]);
      b.addEventListener("click", () => this.showTab(name));
      tabs.append(b);
    }
    this.root.append(
      tabs,
      el(d, "div", { id: "status-bar", role: "status" }),
      this.buildModelPanel(),
      this.buildPurposesPanel(),
      this.buildResultsPanel(),
      this.buildSimulationPanel(),
    );
    this.showTab("model");
  }

  private showTab(name: Tab): void {
    for (const t of TABS) {
      (this.$(`panel-${t}`) as HTMLElement).hidden = t !== name;
      this.$(`tab-${t}`).classList.toggle("active", t === name);
    }
  }

  private buildModelPanel(): HTMLElement {
    const d = this.doc;
    const load = el(d, "button", { id: "load-model" }, ["Load model"]);
    load.addEventListener("click", () =>
      this.run(async () => {
        const text = (this.$("model-text") as HTMLTextAreaElement).value;
        const model = await this.api.loadModel(text);
        this.models.push(model);
        this.setCurrent(model);
      }),
    );
    const weaveBtn = el(d, "button", { id: "weave" }, ["Weave policy"]);
    weaveBtn.addEventListener("click", () =>
      this.run(async () => {
        const model = this.need();
        const policy = (this.$("policy-text") as HTMLTextAreaElement).value;
        const config = (this.$("config-text") as HTMLTextAreaElement).value;
        const result = await this.api.weave(model.id, policy, config);
        this.lastWeave = result;
        this.models.push(result.model);
        this.setCurrent(result.model);
        this.renderResults();
        this.showTab("results");
      }),
    );
    const select = el(d, "select", { id: "model-select" });
    select.addEventListener("change", () => {
      const id = (select as HTMLSelectElement).value;
      const m = this.models.find((x) => x.id === id);
      if (m) this.setCurrent(m);
    });
    return el(d, "section", { id: "panel-model" }, [
      el(d, "textarea", { id: "model-text", rows: "14", spellcheck: "false" }),
      load,
      select,
      el(d, "div", { id: "model-stats" }),
      el(d, "div", { id: "model-graph" }),
      el(d, "table", { id: "model-transitions" }),
      el(d, "h3", {}, ["Policy"]),
      el(d, "textarea", { id: "policy-text", rows: "10", spellcheck: "false" }),
      el(d, "textarea", { id: "config-text", rows: "4", spellcheck: "false" }),
      weaveBtn,
    ]);
  }

  private buildPurposesPanel(): HTMLElement {
    const d = this.doc;
    const derive = el(d, "button", { id: "derive" }, ["Derive objectives"]);
    derive.addEventListener("click", () =>
      this.run(async () => {
        const model = this.need();
        const result = await this.api.objectives(
          model.id,
          (this.$("obj-state") as HTMLInputElement).value,
          (this.$("obj-input") as HTMLInputElement).value,
          (this.$("obj-param") as HTMLInputElement).value,
        );
        (this.$("purposes-text") as HTMLTextAreaElement).value = result.text;
        if (result.warnings.length) this.note(result.warnings.join("; "));
      }),
    );
    const generate = el(d, "button", { id: "generate" }, ["Generate"]);
    generate.addEventListener("click", () =>
      this.run(async () => {
        const model = this.need();
        const purposes = (this.$("purposes-text") as HTMLTextAreaElement).value;
        const seed = Number((this.$("gen-seed") as HTMLInputElement).value) || 0;
        this.lastGen = await this.api.testgen(model.id, purposes, {
          rng_seed: seed,
        });
        this.renderResults();
        this.showTab("results");
      }),
    );
    return el(d, "section", { id: "panel-purposes" }, [
      el(d, "input", { id: "obj-state", placeholder: "state" }),
      el(d, "input", { id: "obj-input", placeholder: "input signal" }),
      el(d, "input", { id: "obj-param", placeholder: "parameter" }),
      derive,
      el(d, "textarea", { id: "purposes-text", rows: "12", spellcheck: "false" }),
      el(d, "label", {}, ["seed ", el(d, "input", { id: "gen-seed", value: "0" })]),
      generate,
    ]);
  }

  private buildResultsPanel(): HTMLElement {
    const d = this.doc;
    return el(d, "section", { id: "panel-results" }, [
      el(d, "div", { id: "weave-summary" }),
      el(d, "table", { id: "weave-rows" }),
      el(d, "pre", { id: "weave-report" }),
      el(d, "div", { id: "gen-summary" }),
      el(d, "ol", { id: "testcase" }),
    ]);
  }

  private buildSimulationPanel(): HTMLElement {
    const d = this.doc;
    const fresh = el(d, "button", { id: "new-session" }, ["New session"]);
    fresh.addEventListener("click", () =>
      this.run(async () => {
        const model = this.need();
        this.session = await this.api.newSession(model.id);
        this.renderSession();
      }),
    );
    const undo = el(d, "button", { id: "sim-undo" }, ["Undo"]);
    undo.addEventListener("click", () =>
      this.run(async () => {
        if (!this.session) return;
        this.session = await this.api.undo(this.session.id);
        this.renderSession();
      }),
    );
    const dump = el(d, "button", { id: "sim-dump" }, ["Test case"]);
    dump.addEventListener("click", () =>
      this.run(async () => {
        if (!this.session) return;
        const tc = await this.api.sessionTestcase(this.session.id);
        this.$("sim-tc").textContent = tc.text || "(no steps yet)";
      }),
    );
    return el(d, "section", { id: "panel-simulation" }, [
      fresh,
      el(d, "div", { id: "sim-status" }),
      el(d, "div", { id: "sim-state" }),
      el(d, "div", { id: "sim-choices" }),
      undo,
      dump,
      el(d, "pre", { id: "sim-trace" }),
      el(d, "pre", { id: "sim-tc" }),
    ]);
  }

  // -- rendering ------------------------------------------------------------

  private need(): ModelView {
    if (!this.current) throw new Error("load a model first");
    return this.current;
  }

  private setCurrent(model: ModelView): void {
    this.current = model;
    this.session = null;
    const select = this.$("model-select") as HTMLSelectElement;
    select.textContent = "";
    for (const m of this.models) {
      select.append(
        el(this.doc, "option", { value: m.id }, [`${m.id} (${m.stats.text})`]),
      );
    }
    select.value = model.id;
    this.$("model-stats").textContent = vm.statsLine(model);
    this.$("model-graph").innerHTML = modelSvg(model);
    this.renderTransitions(model);
    this.renderSession();
  }

  private renderTransitions(model: ModelView): void {
    const d = this.doc;
    const table = this.$("model-transitions");
    table.textContent = "";
    for (const row of vm.transitionRows(model)) {
      table.append(
        el(d, "tr", { class: "transition" }, [
          el(d, "td", {}, [row.label]),
          el(d, "td", {}, [`${row.source} -> ${row.target}`]),
          el(d, "td", {}, [row.trigger]),
          el(d, "td", {}, [row.response]),
          el(d, "td", { class: "guard" }, [row.guard]),
        ]),
      );
    }
  }

  private renderResults(): void {
    const d = this.doc;
    if (this.lastWeave) {
      this.$("weave-summary").textContent = vm.weaveSummary(this.lastWeave);
      const table = this.$("weave-rows");
      table.textContent = "";
      for (const row of vm.weaveRows(this.lastWeave)) {
        table.append(
          el(d, "tr", {}, [
            el(d, "td", {}, [row.label]),
            el(d, "td", {}, [row.rules]),
            el(d, "td", {}, [row.change]),
          ]),
        );
      }
      this.$("weave-report").textContent = this.lastWeave.report;
    }
    if (this.lastGen) {
      this.$("gen-summary").textContent = vm.generationSummary(this.lastGen);
      const list = this.$("testcase");
      list.textContent = "";
      for (const line of vm.testcaseLines(this.lastGen)) {
        const cls = line.comment ? "comment" : line.hit ? "hit" : "step";
        list.append(el(d, "li", { class: cls }, [line.text]));
      }
    }
  }

  private renderSession(): void {
    const d = this.doc;
    const choices = this.$("sim-choices");
    choices.textContent = "";
    if (!this.session) {
      this.$("sim-status").textContent = "";
      this.$("sim-state").textContent = "";
      this.$("sim-trace").textContent = "";
      return;
    }
    const s = this.session;
    this.$("sim-status").textContent = vm.statusLine(s);
    this.$("sim-state").textContent = vm.stateLine(s);
    const labels = vm.choiceLines(s);
    s.choices.forEach((choice, i) => {
      const b = el(d, "button", {
        class: "choice",
        "data-index": String(choice.index),
      });
      b.textContent = labels[i] ?? "";
      b.addEventListener("click", () =>
        this.run(async () => {
          if (!this.session) return;
          this.session = await this.api.step(this.session.id, choice.index);
          this.renderSession();
        }),
      );
      choices.append(b);
    });
    if (!s.choices.length) {
      choices.append(
        el(d, "em", {}, ["deadlock: no transition is executable"]),
      );
    }
    this.$("sim-trace").textContent = vm.traceLines(s).join("\n");
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    const where = err.body.location
      ? ` (line ${err.body.location.line}, column ${err.body.location.column})`
      : "";
    return `${err.body.code}: ${err.body.message}${where}`;
  }
  return err instanceof Error ? err.message : String(err);
}

export function mountApp(root: HTMLElement, api: ApiClient): App {
  return new App(root, api);
}
