// Pure projections from API payloads to render-ready strings and rows.
// Everything here is deterministic and side-effect free so the panels can
// be tested against recorded server answers without a DOM.

import type {
  ModelView,
  SessionView,
  TestgenResult,
  WeaveResult,
} from "./api.js";

export function statsLine(model: ModelView): string {
  return `${model.system} / ${model.process}: ${model.stats.text} (states/transitions/signals)`;
}

export interface TransitionRow {
  label: string;
  source: string;
  target: string;
  trigger: string; // ?signal(params)
  response: string; // !signal(args)
  guard: string; // "-" when absent
}

export function transitionRows(model: ModelView): TransitionRow[] {
  return model.transitions.map((t) => ({
    label: t.label,
    source: t.source,
    target: t.target,
    trigger: `?${t.input.signal}(${t.input.params.join(", ")})`,
    response: `!${t.output.signal}(${t.output.args.join(", ")})`,
    guard: t.predicate ?? "-",
  }));
}

// Mirrors the terminal simulator's status block so both front ends read
// the same way.
export function statusLine(session: SessionView): string {
  return `status: ${session.steps} steps`;
}

export function stateLine(session: SessionView): string {
  const values = Object.values(session.valuation).map(String).join(", ");
  return values ? `@${session.state} {${values}}` : `@${session.state}`;
}

export function choiceLines(session: SessionView): string[] {
  return session.choices.map(
    (c) => `[${c.index}] ?${c.input} !${c.output} -> ${c.target}`,
  );
}

export function traceLines(session: SessionView): string[] {
  return session.trace.map(
    (s, i) => `${i + 1}. ${s.source} ?${s.input} !${s.output} ${s.target}`,
  );
}

export function weaveSummary(result: WeaveResult): string {
  return `${result.stats_before.text} -> ${result.stats_after.text}`;
}

export interface WeaveRow {
  label: string;
  rules: string;
  change: string;
}

export function weaveRows(result: WeaveResult): WeaveRow[] {
  return result.entries.map((e) => ({
    label: e.label,
    rules: e.rules.length ? e.rules.join(", ") : "-",
    change: e.strengthened ? `guard: ${e.after}` : "unchanged",
  }));
}

export interface TestcaseLine {
  text: string;
  hit: boolean; // step that satisfied an objective (marked by the comment line above it)
  comment: boolean;
}

/** Split emitted test-case text into annotated display lines. */
export function testcaseLines(result: TestgenResult): TestcaseLine[] {
  const out: TestcaseLine[] = [];
  let pendingHit = false;
  for (const raw of result.testcase.split("\n")) {
    if (!raw) continue;
    if (raw.startsWith("//")) {
      out.push({ text: raw, hit: false, comment: true });
      pendingHit = true;
    } else {
      out.push({ text: raw, hit: pendingHit, comment: false });
      pendingHit = false;
    }
  }
  return out;
}

export function generationSummary(result: TestgenResult): string {
  const n = result.steps.length;
  return `${n} step${n === 1 ? "" : "s"}, ${result.jumps} jumps, ${result.hits.length} objective(s) hit`;
}
