// Browser entry point: wires the controller to the static page. All
// markup comes from the pure renderers; this file only moves strings
// into elements and events into controller calls.

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { parseIntList } from "./state.js";
import { esc } from "./render/svg.js";

declare global {
  interface Window {
    QLENS_BASE?: string;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const api = new ApiClient(window.QLENS_BASE ?? "");
const app = new App(api);

const panels = {
  overview: el("overview"),
  graph: el("graph"),
  stepNav: el("step-nav"),
  recommendation: el("recommendation"),
  engagement: el("engagement"),
  comparison: el("comparison"),
  pins: el("pins"),
  errors: el("errors"),
};
const status = el("status");
const questionSelect = el<HTMLSelectElement>("question-select");
const gradesInput = el<HTMLInputElement>("grades-input");
const scoresInput = el<HTMLInputElement>("scores-input");
const studentInput = el<HTMLInputElement>("student-input");
const minCountInput = el<HTMLInputElement>("min-count-input");

function paint(): void {
  const out = app.render();
  panels.overview.innerHTML = out.overview;
  panels.graph.innerHTML = out.graph;
  panels.stepNav.innerHTML = out.stepNav;
  panels.recommendation.innerHTML = out.recommendation;
  panels.engagement.innerHTML = out.engagement;
  panels.comparison.innerHTML = out.comparison;
  panels.pins.innerHTML = out.pins;
  panels.errors.innerHTML = out.errors;
}

function report(err: unknown): void {
  status.textContent = err instanceof Error ? err.message : String(err);
}

async function applyFilters(): Promise<void> {
  status.textContent = "";
  try {
    await app.applyFilters({
      grades: parseIntList(gradesInput.value),
      scores: parseIntList(scoresInput.value),
      student: studentInput.value.trim(),
      minCount: Math.max(0, parseInt(minCountInput.value || "0", 10) || 0),
    });
  } catch (err) {
    report(err);
  }
  paint();
}

for (const input of [gradesInput, scoresInput, studentInput, minCountInput]) {
  input.addEventListener("change", () => void applyFilters());
}

questionSelect.addEventListener("change", async () => {
  status.textContent = "";
  try {
    await app.setQuestion(questionSelect.value);
  } catch (err) {
    report(err);
  }
  gradesInput.value = "";
  scoresInput.value = "";
  studentInput.value = "";
  minCountInput.value = "0";
  paint();
});

el("pin-btn").addEventListener("click", () => {
  app.pin();
  paint();
});

panels.errors.addEventListener("click", async (event) => {
  const row = (event.target as HTMLElement).closest<HTMLElement>(".error-row");
  if (!row || row.dataset.rank === undefined) return;
  const rank = parseInt(row.dataset.rank, 10);
  const next = app.state.selectedErrorRank === rank ? null : rank; // second click clears
  try {
    await app.pickError(next);
  } catch (err) {
    report(err);
  }
  paint();
});

panels.stepNav.addEventListener("click", (event) => {
  const box = (event.target as HTMLElement).closest<HTMLElement>(".page-box");
  if (!box || box.dataset.page === undefined) return;
  app.page(parseInt(box.dataset.page, 10));
  paint();
});

panels.pins.addEventListener("click", (event) => {
  const btn = (event.target as HTMLElement).closest<HTMLElement>(".unpin");
  if (!btn || btn.dataset.index === undefined) return;
  app.unpin(parseInt(btn.dataset.index, 10));
  paint();
});

async function boot(): Promise<void> {
  paint();
  try {
    const questions = await app.loadQuestions();
    questionSelect.innerHTML = questions
      .map(
        (q) =>
          `<option value="${esc(q.question)}">${esc(q.title)} (${q.students})</option>`,
      )
      .join("");
    if (questions.length) {
      await app.setQuestion(questions[0].question);
    } else {
      status.textContent = "no questions ingested yet";
    }
  } catch (err) {
    report(err);
  }
  paint();
}

void boot();
