// Deterministic layered layout of the model graph, emitted as an SVG
// string. Layers come from a breadth-first walk out of the initial state,
// so the same model always draws the same picture.

import type { ModelView } from "./api.js";

const LAYER_W = 170;
const ROW_H = 80;
const NODE_R = 26;
const PAD = 50;

interface Placed {
  name: string;
  x: number;
  y: number;
}

function layers(model: ModelView): string[][] {
  const succ = new Map<string, string[]>();
  for (const t of model.transitions) {
    const row = succ.get(t.source) ?? [];
    row.push(t.target);
    succ.set(t.source, row);
  }
  const seen = new Set<string>([model.initial_state]);
  const out: string[][] = [[model.initial_state]];
  let frontier = [model.initial_state];
  while (frontier.length) {
    const next: string[] = [];
    for (const s of frontier) {
      for (const target of succ.get(s) ?? []) {
        if (!seen.has(target)) {
          seen.add(target);
          next.push(target);
        }
      }
    }
    if (next.length) out.push(next);
    frontier = next;
  }
  // states never reached from the initial one still get drawn
  const orphans = model.states.filter((s) => !seen.has(s));
  if (orphans.length) out.push(orphans);
  return out;
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function modelSvg(model: ModelView): string {
  const placed = new Map<string, Placed>();
  const cols = layers(model);
  let height = 0;
  cols.forEach((col, ci) => {
    col.forEach((name, ri) => {
      placed.set(name, {
        name,
        x: PAD + ci * LAYER_W,
        y: PAD + ri * ROW_H,
      });
      height = Math.max(height, PAD + ri * ROW_H);
    });
  });
  const width = PAD + (cols.length - 1) * LAYER_W + PAD;

  const parts: string[] = [];
  const loopCount = new Map<string, number>();
  for (const t of model.transitions) {
    const a = placed.get(t.source);
    const b = placed.get(t.target);
    if (!a || !b) continue;
    const label = `${t.label} ?${t.input.signal}`;
    if (a.name === b.name) {
      // self loop: stacked arcs above the node
      const n = loopCount.get(a.name) ?? 0;
      loopCount.set(a.name, n + 1);
      const r = 16 + n * 9;
      parts.push(
        `<path class="edge" d="M ${a.x - 10} ${a.y - NODE_R} ` +
          `C ${a.x - 10} ${a.y - NODE_R - r}, ${a.x + 10} ${a.y - NODE_R - r}, ` +
          `${a.x + 10} ${a.y - NODE_R}" />`,
        `<text class="edge-label" x="${a.x}" y="${a.y - NODE_R - r - 3}" text-anchor="middle">${esc(label)}</text>`,
      );
    } else {
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const len = Math.hypot(dx, dy);
      const sx = a.x + (dx / len) * NODE_R;
      const sy = a.y + (dy / len) * NODE_R;
      const ex = b.x - (dx / len) * (NODE_R + 5);
      const ey = b.y - (dy / len) * (NODE_R + 5);
      parts.push(
        `<line class="edge" x1="${sx}" y1="${sy}" x2="${ex}" y2="${ey}" marker-end="url(#arrow)" />`,
        `<text class="edge-label" x="${(sx + ex) / 2}" y="${(sy + ey) / 2 - 4}" text-anchor="middle">${esc(label)}</text>`,
      );
    }
  }

  for (const p of placed.values()) {
    const init = p.name === model.initial_state;
    parts.push(
      `<circle class="node${init ? " init" : ""}" cx="${p.x}" cy="${p.y}" r="${NODE_R}" data-state="${esc(p.name)}" />`,
      `<text class="node-label" x="${p.x}" y="${p.y + NODE_R + 14}" text-anchor="middle">${esc(p.name)}</text>`,
    );
  }

  const h = height + PAD + 30;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${h}" ` +
    `width="${width}" height="${h}" role="img">` +
    `<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="3" orient="auto">` +
    `<path d="M0,0 L7,3 L0,6 z" /></marker></defs>` +
    parts.join("") +
    `</svg>`
  );
}
