// Overview histograms and the common-error panel. Error rows carry a
// zipper strip: upper orange teeth for failing-student encounters per
// step, lower green teeth for full-mark encounters, and a bypass square
// at the right shaded by how many full-mark students passed through.

import type { ErrorRow, HistogramRow, OverviewPayload } from "../types.js";
import { slotsText } from "../types.js";
import { esc, greenShade, num, orangeShade, tag } from "./svg.js";

const TOOTH_W = 9;
const TOOTH_H = 11;

function renderBars(title: string, rows: HistogramRow[], unit: string): string {
  if (!rows.length) {
    return `<div class="chart"><h4>${esc(title)}</h4><div class="empty-state">no data</div></div>`;
  }
  const maxCount = Math.max(...rows.map((r) => r.count));
  const bars = rows
    .map((r) => {
      const width = maxCount > 0 ? (100 * r.count) / maxCount : 0;
      return (
        `<div class="bar-row"><span class="bar-label">${esc(String(r.value))}${esc(unit)}</span>` +
        `<div class="bar" style="width:${num(width)}%"></div>` +
        `<span class="bar-count">${r.count}</span></div>`
      );
    })
    .join("");
  return `<div class="chart"><h4>${esc(title)}</h4>${bars}</div>`;
}

export function renderOverview(overview: OverviewPayload): string {
  return (
    `<div class="overview"><div class="student-count">${overview.student_count} students</div>` +
    renderBars("score", overview.scores, "") +
    renderBars("grade", overview.grades, "") +
    renderBars("completion time", overview.time_minutes, "min") +
    `</div>`
  );
}

function renderZipper(error: ErrorRow, maxTooth: number, maxBypass: number): string {
  const steps = Math.max(error.encounters_fail.length, error.encounters_pass.length);
  const teeth: string[] = [];
  for (let s = 0; s < steps; s++) {
    const fail = error.encounters_fail[s] ?? 0;
    const pass = error.encounters_pass[s] ?? 0;
    const x = s * TOOTH_W;
    teeth.push(
      tag(
        "g",
        { class: "tooth", "data-step": s },
        tag("title", {}, esc(`step ${s}: ${fail} failing, ${pass} full-mark`)) +
          tag("rect", {
            class: "tooth-fail",
            x: num(x),
            y: 0,
            width: TOOTH_W - 1,
            height: TOOTH_H,
            fill: fail > 0 ? orangeShade(fail, maxTooth) : "none",
          }) +
          tag("rect", {
            class: "tooth-pass",
            x: num(x),
            y: TOOTH_H + 1,
            width: TOOTH_W - 1,
            height: TOOTH_H,
            fill: pass > 0 ? greenShade(pass, maxTooth) : "none",
          }),
      ),
    );
  }
  const bypass = tag(
    "rect",
    {
      class: "bypass",
      x: num(steps * TOOTH_W + 4),
      y: num((TOOTH_H * 2 + 1) / 2 - 6),
      width: 12,
      height: 12,
      fill: greenShade(error.bypass_count, maxBypass),
    },
    tag("title", {}, esc(`${error.bypass_count} full-mark students passed through`)),
  );
  const width = steps * TOOTH_W + 20;
  return tag(
    "svg",
    { class: "zipper", viewBox: `0 0 ${width} ${TOOTH_H * 2 + 1}`, width, height: TOOTH_H * 2 + 1 },
    teeth.join("") + bypass,
  );
}

/** Ranked error list; clicking a row selects the rank (data-rank). */
export function renderErrorPanel(errors: ErrorRow[], selectedRank: number | null): string {
  if (!errors.length) {
    return `<div class="empty-state">no failing final answers in this group</div>`;
  }
  const maxEnders = Math.max(...errors.map((e) => e.fail_enders));
  const maxTooth = Math.max(
    1,
    ...errors.flatMap((e) => [...e.encounters_fail, ...e.encounters_pass]),
  );
  const maxBypass = Math.max(1, ...errors.map((e) => e.bypass_count));
  const rows = errors
    .map((e) => {
      const cls = e.rank === selectedRank ? "error-row selected" : "error-row";
      const badge = tag(
        "span",
        { class: "rank-badge", style: `background:${orangeShade(e.fail_enders, maxEnders)}` },
        esc(`#${e.rank}`),
      );
      return (
        `<li class="${cls}" data-rank="${e.rank}">${badge}` +
        `<span class="error-answer">(${esc(slotsText(e.answer))})</span>` +
        `<span class="error-meta">stage ${e.stage}, ${e.fail_enders} stuck</span>` +
        renderZipper(e, maxTooth, maxBypass) +
        `</li>`
      );
    })
    .join("");
  return `<ol class="error-list">${rows}</ol>`;
}
