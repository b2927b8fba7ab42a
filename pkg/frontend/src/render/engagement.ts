// Per-step engagement: mean incremental time (left axis) and mean
// cursor path (right axis) as lines, over shaded blocks showing how
// many sessions were still active and which share progressed.

import type { EngagementPoint } from "../types.js";
import { blueShade, esc, fmtMs, fmtPx, num, tag } from "./svg.js";

const MARGIN = { top: 14, right: 42, bottom: 24, left: 52 };
const COL_W = 46;
const PLOT_H = 120;

export function renderEngagement(points: EngagementPoint[]): string {
  if (!points.length) return `<div class="empty-state">no steps recorded</div>`;
  const width = MARGIN.left + points.length * COL_W + MARGIN.right;
  const height = MARGIN.top + PLOT_H + MARGIN.bottom;
  const maxTime = Math.max(1, ...points.map((p) => p.mean_time_ms));
  const maxTraj = Math.max(1, ...points.map((p) => p.mean_traj_px));
  const maxActive = Math.max(1, ...points.map((p) => p.active));
  const x = (i: number) => MARGIN.left + i * COL_W + COL_W / 2;
  const yTime = (v: number) => MARGIN.top + PLOT_H * (1 - v / maxTime);
  const yTraj = (v: number) => MARGIN.top + PLOT_H * (1 - v / maxTraj);

  const blocks = points
    .map((p, i) => {
      const h = PLOT_H * (p.active / maxActive);
      const progressedShare = p.active > 0 ? p.progressed / p.active : 0;
      const title = tag(
        "title",
        {},
        esc(
          `step ${p.step}: ${p.active} active, ${p.progressed} progressed\n` +
            `mean ${fmtMs(p.mean_time_ms)}, ${fmtPx(p.mean_traj_px)}`,
        ),
      );
      return tag(
        "g",
        { class: "engagement-block", "data-step": p.step },
        title +
          tag("rect", {
            class: "active-block",
            x: num(x(i) - COL_W / 2 + 4),
            y: num(MARGIN.top + PLOT_H - h),
            width: COL_W - 8,
            height: num(h),
            fill: blueShade(p.progressed, maxActive),
            opacity: num(0.25 + 0.5 * progressedShare),
          }),
      );
    })
    .join("");
  const timeLine = tag("polyline", {
    class: "line-time",
    points: points.map((p, i) => `${num(x(i))},${num(yTime(p.mean_time_ms))}`).join(" "),
  });
  const trajLine = tag("polyline", {
    class: "line-traj",
    points: points.map((p, i) => `${num(x(i))},${num(yTraj(p.mean_traj_px))}`).join(" "),
  });
  const labels = points
    .map((p, i) =>
      tag(
        "text",
        { class: "axis", x: num(x(i)), y: num(MARGIN.top + PLOT_H + 16), "text-anchor": "middle" },
        esc(String(p.step)),
      ),
    )
    .join("");
  const axisNotes =
    tag("text", { class: "axis axis-time", x: 4, y: num(MARGIN.top + 10) }, esc(fmtMs(maxTime))) +
    tag(
      "text",
      { class: "axis axis-traj", x: num(width - MARGIN.right + 4), y: num(MARGIN.top + 10) },
      esc(fmtPx(maxTraj)),
    );
  return tag(
    "svg",
    { class: "engagement", viewBox: `0 0 ${width} ${height}`, width, height, xmlns: "http://www.w3.org/2000/svg" },
    blocks + timeLine + trajLine + labels + axisNotes,
  );
}
