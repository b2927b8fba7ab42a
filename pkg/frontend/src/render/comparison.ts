// Side-by-side group comparison: one column per group (at most four),
// a stacked glyph per stage sized by hit counts, a drop arrow under
// each stage sized by drop/stop transitions, dwell box plots between,
// and the total-time box plot along the bottom.

import type { ComparisonPayload, FiveNum } from "../types.js";
import { blueShade, esc, fmtMs, num, tag } from "./svg.js";

const COL_W = 190;
const STAGE_H = 44;
const LEGEND_H = 34;
const HEADER_H = 22;
const FOOTER_H = 56;
const BAR_MAX_W = 84;
const BOX_W = 70;

export interface ComparisonGroup {
  label: string;
  summary: ComparisonPayload;
}

function boxPlot(
  x: number,
  y: number,
  width: number,
  five: FiveNum,
  maxValue: number,
  title: string,
): string {
  const scale = (v: number) => x + (maxValue > 0 ? (v / maxValue) * width : 0);
  const mid = y;
  const body =
    tag("line", { class: "box-whisker", x1: num(scale(five.whisker_low)), y1: num(mid), x2: num(scale(five.whisker_high)), y2: num(mid) }) +
    tag("rect", { class: "box-iqr", x: num(scale(five.q1)), y: num(mid - 5), width: num(Math.max(1, scale(five.q3) - scale(five.q1))), height: 10 }) +
    tag("line", { class: "box-median", x1: num(scale(five.median)), y1: num(mid - 7), x2: num(scale(five.median)), y2: num(mid + 7) });
  return tag("g", { class: "boxplot" }, tag("title", {}, esc(title)) + body);
}

function fiveText(five: FiveNum): string {
  return (
    `n=${five.n} min=${fmtMs(five.min)} q1=${fmtMs(five.q1)} ` +
    `median=${fmtMs(five.median)} q3=${fmtMs(five.q3)} max=${fmtMs(five.max)}`
  );
}

function renderColumn(
  group: ComparisonGroup,
  index: number,
  stageCount: number,
  maxHits: number,
  maxDrops: number,
  maxDwell: number,
  maxTotal: number,
): string {
  const x0 = index * COL_W + 12;
  const parts: string[] = [];
  parts.push(
    tag(
      "text",
      { class: "col-head", x: num(x0 + COL_W / 2 - 12), y: num(LEGEND_H + 14), "text-anchor": "middle" },
      esc(`${group.label} (n=${group.summary.student_count})`),
    ),
  );
  const top = LEGEND_H + HEADER_H;
  // stage 0 sits at the bottom, matching the transition graph's axis
  for (const row of group.summary.stages) {
    const y = top + (stageCount - 1 - row.stage) * STAGE_H;
    const barW = maxHits > 0 ? (row.hit_times / maxHits) * BAR_MAX_W : 0;
    const title =
      `stage ${row.stage}: ${row.hit_times} arrivals, ${row.drop_stop_count} drops/stops` +
      (row.dwell ? `\ndwell ${fiveText(row.dwell)}` : "");
    const glyph =
      tag("title", {}, esc(title)) +
      tag("text", { class: "axis", x: num(x0), y: num(y + 18), "text-anchor": "start" }, esc(`S${row.stage}`)) +
      tag("rect", {
        class: "stage-bar",
        x: num(x0 + 24),
        y: num(y + 6),
        width: num(barW),
        height: 16,
        fill: blueShade(row.hit_times, maxHits),
        "data-hits": row.hit_times,
      });
    // downward arrow, wider with more drops/stops
    const arrowW = maxDrops > 0 ? 2 + 10 * (row.drop_stop_count / maxDrops) : 2;
    const ax = x0 + 24 + BAR_MAX_W / 2;
    const ay = y + 26;
    const arrow =
      row.drop_stop_count > 0
        ? tag(
            "path",
            {
              class: "drop-arrow",
              d: `M ${num(ax - arrowW)} ${num(ay)} L ${num(ax + arrowW)} ${num(ay)} L ${num(ax)} ${num(ay + 9)} Z`,
              "data-drops": row.drop_stop_count,
            },
            tag("title", {}, esc(`stage ${row.stage}: ${row.drop_stop_count} drops/stops`)),
          )
        : "";
    const dwell = row.dwell
      ? boxPlot(x0 + 24 + BAR_MAX_W + 10, y + 14, BOX_W, row.dwell, maxDwell, `stage ${row.stage} dwell: ${fiveText(row.dwell)}`)
      : "";
    parts.push(tag("g", { class: "stage-row", "data-stage": row.stage }, glyph + arrow + dwell));
  }
  const footY = top + stageCount * STAGE_H + 16;
  parts.push(
    tag("text", { class: "axis", x: num(x0), y: num(footY + 4), "text-anchor": "start" }, "total"),
  );
  if (group.summary.total_time) {
    parts.push(
      boxPlot(x0 + 38, footY, BAR_MAX_W + BOX_W, group.summary.total_time, maxTotal, `total time: ${fiveText(group.summary.total_time)}`),
    );
  }
  return tag("g", { class: "compare-col", "data-label": group.label }, parts.join(""));
}

function renderLegend(): string {
  return tag(
    "g",
    { class: "legend" },
    tag("rect", { class: "stage-bar", x: 12, y: 8, width: 18, height: 10, fill: blueShade(3, 4) }) +
      tag("text", { class: "axis", x: 34, y: 17 }, "arrivals at stage") +
      tag("path", { class: "drop-arrow", d: "M 150 8 L 162 8 L 156 18 Z" }) +
      tag("text", { class: "axis", x: 168, y: 17 }, "drops/stops") +
      tag("rect", { class: "box-iqr", x: 248, y: 9, width: 18, height: 8 }) +
      tag("text", { class: "axis", x: 270, y: 17 }, "dwell quartiles"),
  );
}

/** Columns share every scale so widths compare across groups. */
export function renderComparison(groups: ComparisonGroup[]): string {
  const shown = groups.slice(0, 4);
  if (!shown.length) return `<div class="empty-state">no comparison groups</div>`;
  const stageCount = Math.max(...shown.map((g) => g.summary.stages.length), 1);
  const maxHits = Math.max(0, ...shown.flatMap((g) => g.summary.stages.map((r) => r.hit_times)));
  const maxDrops = Math.max(0, ...shown.flatMap((g) => g.summary.stages.map((r) => r.drop_stop_count)));
  const maxDwell = Math.max(
    1,
    ...shown.flatMap((g) => g.summary.stages.map((r) => (r.dwell ? r.dwell.whisker_high : 0))),
  );
  const maxTotal = Math.max(
    1,
    ...shown.map((g) => (g.summary.total_time ? g.summary.total_time.whisker_high : 0)),
  );
  const width = shown.length * COL_W + 24;
  const height = LEGEND_H + HEADER_H + stageCount * STAGE_H + FOOTER_H;
  const columns = shown
    .map((g, i) => renderColumn(g, i, stageCount, maxHits, maxDrops, maxDwell, maxTotal))
    .join("");
  return tag(
    "svg",
    { class: "comparison", viewBox: `0 0 ${width} ${height}`, width, height, xmlns: "http://www.w3.org/2000/svg" },
    renderLegend() + columns,
  );
}
