// Step/stage transition graph: x = step, y = stage, one glyph per
// state. A glyph is a vertical stack of m condition rectangles (height
// = glyph height / m), shaded by how many students fulfill each
// condition; glyph width tracks how many students reached the state.

import type {
  ErrorRow,
  ModelPayload,
  ModelState,
  Recommendation,
} from "../types.js";
import { MODEL_SCHEMA, slotsText } from "../types.js";
import { blueShade, esc, fmtMs, fmtPx, num, tag } from "./svg.js";

const MARGIN = { top: 18, right: 20, bottom: 30, left: 44 };
const COL_W = 76;
const ROW_H = 52;
const GLYPH_H = 34;
const GLYPH_W_MIN = 6;
const GLYPH_W_MAX = 30;
const TOOLTIP_ANSWERS = 3;

export interface StepRange {
  from: number;
  to: number;
}

export interface GraphOverlays {
  error?: ErrorRow; // red: where the selected wrong answer occurs
  recommendation?: Recommendation; // green: suggested continuation
}

function colX(step: number, range: StepRange): number {
  return MARGIN.left + (step - range.from) * COL_W + COL_W / 2;
}

function rowY(stage: number, m: number): number {
  return MARGIN.top + (m - stage) * ROW_H + ROW_H / 2;
}

function glyphTitle(state: ModelState): string {
  const lines = [
    `step ${state.step}, stage ${state.stage}: ${state.students} students, ` +
      `${state.sessions} sessions, ${state.ends} end here`,
  ];
  for (const a of state.answers.slice(0, TOOLTIP_ANSWERS)) {
    lines.push(`(${slotsText(a.slots)}) x${a.count}  ${fmtMs(a.mean_time_ms)} ${fmtPx(a.mean_traj_px)}`);
  }
  if (state.answers.length > TOOLTIP_ANSWERS) {
    lines.push(`+${state.answers.length - TOOLTIP_ANSWERS} more answers`);
  }
  return lines.join("\n");
}

function renderGlyph(state: ModelState, range: StepRange, maxStudents: number, maxCond: number, m: number): string {
  const width = GLYPH_W_MIN + (GLYPH_W_MAX - GLYPH_W_MIN) * (maxStudents > 0 ? state.students / maxStudents : 0);
  const x = colX(state.step, range) - width / 2;
  const y = rowY(state.stage, m) - GLYPH_H / 2;
  const bandH = GLYPH_H / m;
  const bands = state.condition_counts
    .map((count, i) =>
      tag("rect", {
        x: num(x),
        y: num(y + i * bandH),
        width: num(width),
        height: num(bandH),
        fill: blueShade(count, maxCond),
      }),
    )
    .join("");
  const frame = tag("rect", {
    class: "glyph-frame",
    x: num(x),
    y: num(y),
    width: num(width),
    height: num(GLYPH_H),
  });
  const end =
    state.ends > 0
      ? tag("rect", {
          class: "end-marker",
          x: num(x + width + 3),
          y: num(y + GLYPH_H - 7),
          width: 5,
          height: 5,
        })
      : "";
  return tag(
    "g",
    { class: "state", "data-step": state.step, "data-stage": state.stage },
    tag("title", {}, esc(glyphTitle(state))) + bands + frame + end,
  );
}

function renderEdges(model: ModelPayload, range: StepRange): string {
  const visible = model.transitions.filter((t) => t.step - 1 >= range.from && t.step <= range.to);
  const maxCount = Math.max(1, ...visible.map((t) => t.count));
  return visible
    .map((t) => {
      const x1 = colX(t.step - 1, range);
      const y1 = rowY(t.from_stage, model.m);
      const x2 = colX(t.step, range);
      const y2 = rowY(t.to_stage, model.m);
      const title = tag(
        "title",
        {},
        esc(`step ${t.step - 1} -> ${t.step}: stage ${t.from_stage} -> ${t.to_stage}, ${t.count} sessions`),
      );
      return tag(
        "line",
        {
          class: t.to_stage < t.from_stage ? "edge edge-drop" : "edge",
          x1: num(x1),
          y1: num(y1),
          x2: num(x2),
          y2: num(y2),
          "stroke-width": num(1 + 5 * (t.count / maxCount)),
          "data-count": t.count,
        },
        title,
      );
    })
    .join("");
}

function renderAxes(model: ModelPayload, range: StepRange): string {
  const parts: string[] = [];
  for (let s = range.from; s <= range.to; s++) {
    parts.push(
      tag(
        "text",
        { class: "axis", x: num(colX(s, range)), y: num(MARGIN.top + (model.m + 1) * ROW_H + 18), "text-anchor": "middle" },
        esc(String(s)),
      ),
    );
  }
  for (let g = 0; g <= model.m; g++) {
    parts.push(
      tag(
        "text",
        { class: "axis", x: num(MARGIN.left - 10), y: num(rowY(g, model.m) + 4), "text-anchor": "end" },
        esc(String(g)),
      ),
    );
  }
  return parts.join("");
}

/** Steps (window-clipped) where the error answer was seen by anyone. */
function errorSteps(error: ErrorRow, range: StepRange): number[] {
  const steps: number[] = [];
  const last = Math.max(error.encounters_fail.length, error.encounters_pass.length) - 1;
  for (let s = 0; s <= last; s++) {
    const hits = (error.encounters_fail[s] ?? 0) + (error.encounters_pass[s] ?? 0);
    if (hits > 0 && s >= range.from && s <= range.to) steps.push(s);
  }
  return steps;
}

/** The step where most failing students sat on the error; green anchor. */
export function anchorStep(error: ErrorRow): number {
  let best = 0;
  let bestCount = -1;
  error.encounters_fail.forEach((count, step) => {
    if (count > bestCount) {
      best = step;
      bestCount = count;
    }
  });
  return best;
}

function renderErrorOverlay(error: ErrorRow, model: ModelPayload, range: StepRange): string {
  const steps = errorSteps(error, range);
  if (!steps.length) return "";
  const y = rowY(error.stage, model.m);
  const points = steps.map((s) => `${num(colX(s, range))},${num(y)}`).join(" ");
  const rings = steps
    .map((s) =>
      tag("circle", {
        class: "overlay-error-ring",
        cx: num(colX(s, range)),
        cy: num(y),
        r: 13,
        "data-step": s,
      }),
    )
    .join("");
  const line =
    steps.length > 1 ? tag("polyline", { class: "overlay-error", points }) : "";
  return tag("g", { class: "overlay overlay-error-group" }, line + rings);
}

function renderRecommendationOverlay(
  rec: Recommendation,
  error: ErrorRow,
  model: ModelPayload,
  range: StepRange,
): string {
  if (rec.state !== "path") return "";
  const anchor = anchorStep(error);
  const points: string[] = [];
  rec.stages.forEach((stage, k) => {
    const step = anchor + k;
    if (step > model.max_step || step < range.from || step > range.to) return;
    points.push(`${num(colX(step, range))},${num(rowY(stage, model.m))}`);
  });
  if (points.length < 2) return "";
  return tag(
    "g",
    { class: "overlay overlay-rec-group" },
    tag("polyline", { class: "overlay-rec", points: points.join(" ") }),
  );
}

/**
 * The graph svg for one step window. Bad payloads get a banner instead
 * of a crash so a stale bundle degrades readably.
 */
export function renderTransitionGraph(
  model: ModelPayload,
  range: StepRange,
  overlays: GraphOverlays = {},
): string {
  if (model.schema !== MODEL_SCHEMA) {
    return `<div class="schema-banner">unsupported model schema "${esc(model.schema)}", expected "${MODEL_SCHEMA}"</div>`;
  }
  const width = MARGIN.left + (range.to - range.from + 1) * COL_W + MARGIN.right;
  const height = MARGIN.top + (model.m + 1) * ROW_H + MARGIN.bottom;
  const visible = model.states.filter((s) => s.step >= range.from && s.step <= range.to);
  const maxStudents = Math.max(1, ...model.states.map((s) => s.students));
  const maxCond = Math.max(1, ...model.states.flatMap((s) => s.condition_counts));
  const glyphs = visible
    .map((s) => renderGlyph(s, range, maxStudents, maxCond, model.m))
    .join("");
  const overlayMarkup =
    (overlays.error ? renderErrorOverlay(overlays.error, model, range) : "") +
    (overlays.error && overlays.recommendation
      ? renderRecommendationOverlay(overlays.recommendation, overlays.error, model, range)
      : "");
  return tag(
    "svg",
    {
      class: "graph",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      xmlns: "http://www.w3.org/2000/svg",
    },
    renderAxes(model, range) + renderEdges(model, range) + glyphs + overlayMarkup,
  );
}

/** Page strip under the graph; the current page wears a red rectangle. */
export function renderStepNav(maxStep: number, currentFrom: number, windowSize: number): string {
  const pages = Math.max(1, Math.ceil((maxStep + 1) / windowSize));
  if (pages === 1) return "";
  const current = Math.floor(currentFrom / windowSize);
  const boxes = Array.from({ length: pages }, (_, p) => {
    const from = p * windowSize;
    const to = Math.min(from + windowSize - 1, maxStep);
    const cls = p === current ? "page-box current" : "page-box";
    return `<button type="button" class="${cls}" data-page="${p}">${from}-${to}</button>`;
  });
  return `<nav class="step-nav">${boxes.join("")}</nav>`;
}

/** Suggested continuation as green text, one intermediate answer per line. */
export function renderRecommendationText(rec: Recommendation | null, rank: number | null): string {
  if (rec === null || rank === null) return "";
  if (rec.state === "no_coverage") {
    return `<div class="rec-text rec-empty">no full-mark student ever passed through error #${rank}; no data-driven path</div>`;
  }
  const rows = rec.path
    .map((slots, k) => {
      const support = k === 0 ? "" : ` <span class="rec-support">x${rec.support[k - 1]}</span>`;
      return `<li>stage ${rec.stages[k]}: (${esc(slotsText(slots))})${support}</li>`;
    })
    .join("");
  return (
    `<div class="rec-text"><span class="rec-head">recommended continuation for error #${rank}` +
    ` (${rec.length} steps, ${rec.regressions} stage regressions)</span><ol>${rows}</ol></div>`
  );
}
