// Controller behavior on recorded payloads: one request per filter
// change, recommendation fetches only on error clicks, pagination and
// pinning purely client-side, stale responses dropped.

import { describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import {
  deferred,
  fakeServer,
  questions,
  recommendation,
  viewsAll,
  viewsFiltered,
  viewsWorked,
} from "./helpers.js";

const ROUTES = {
  "/api/questions": questions(),
  "/api/questions/q-order/views": viewsAll(),
  "/api/questions/q-order/views?grades=2&min_count=1": viewsFiltered(),
  "/api/questions/q-order/errors/1/recommendation": recommendation(),
};

function makeApp() {
  const server = fakeServer(ROUTES);
  const app = new App(new ApiClient("", server.fetch));
  return { app, server };
}

describe("app controller", () => {
  it("renders a loading shell before any payload", () => {
    const { app } = makeApp();
    expect(app.render().overview).toContain("empty-state");
    expect(app.render().stepNav).toBe("");
  });

  it("boots with one questions and one views request", async () => {
    const { app, server } = makeApp();
    const list = await app.loadQuestions();
    expect(list.map((q) => q.question)).toEqual(["q-order"]);
    await app.setQuestion("q-order");
    expect(server.calls).toEqual(["/api/questions", "/api/questions/q-order/views"]);
    expect(app.render().overview).toContain("31 students");
  });

  it("spends exactly one request per filter change and repaints every panel", async () => {
    const { app, server } = makeApp();
    await app.setQuestion("q-order");
    const before = app.render();
    const calls = server.calls.length;

    await app.applyFilters({ grades: [2], minCount: 1 });

    expect(server.calls.length).toBe(calls + 1);
    expect(server.calls.at(-1)).toBe("/api/questions/q-order/views?grades=2&min_count=1");
    const after = app.render();
    expect(after.overview).toContain("16 students");
    expect(after.overview).not.toBe(before.overview);
    expect(after.graph).not.toBe(before.graph);
    expect(after.engagement).not.toBe(before.engagement);
    expect(after.comparison).toContain("grades=2 (n=16)");
    expect(after.errors.match(/class="error-row"/g)?.length).toBe(5);
    const filtered = viewsFiltered();
    const within = filtered.model.states.filter((s) => s.step <= 11).length;
    expect(after.graph.match(/<g class="state"/g)?.length).toBe(within);
  });

  it("fetches only the recommendation on an error click and overlays both paths", async () => {
    const { app, server } = makeApp();
    await app.setQuestion("q-order");
    const calls = server.calls.length;

    await app.pickError(1);

    expect(server.calls.length).toBe(calls + 1);
    expect(server.calls.at(-1)).toBe("/api/questions/q-order/errors/1/recommendation");
    const out = app.render();
    expect(out.graph).toContain('class="overlay-error"');
    expect(out.graph).toContain('class="overlay-rec"');
    expect(out.errors).toContain('class="error-row selected" data-rank="1"');
    expect(out.recommendation).toContain("rec-text");
    expect(out.recommendation).toContain("error #1");
  });

  it("clears the overlays on deselect without any request", async () => {
    const { app, server } = makeApp();
    await app.setQuestion("q-order");
    await app.pickError(1);
    const calls = server.calls.length;

    await app.pickError(null);

    expect(server.calls.length).toBe(calls);
    const out = app.render();
    expect(out.graph).not.toContain("overlay-error");
    expect(out.recommendation).toBe("");
  });

  it("drops the selection when filters change", async () => {
    const { app } = makeApp();
    await app.setQuestion("q-order");
    await app.pickError(1);
    await app.applyFilters({ grades: [2], minCount: 1 });
    expect(app.state.selectedErrorRank).toBeNull();
    expect(app.render().recommendation).toBe("");
  });

  it("pages the step window without touching the network", async () => {
    const { app, server } = makeApp();
    await app.setQuestion("q-order"); // max_step 14: two pages
    const calls = server.calls.length;

    app.page(1);

    expect(server.calls.length).toBe(calls);
    const out = app.render();
    expect(out.graph).toContain('data-step="14"');
    expect(out.graph).not.toContain('data-step="0"');
    expect(out.stepNav).toContain('class="page-box current" data-page="1"');
  });

  it("pins and unpins comparison columns without extra requests", async () => {
    const { app, server } = makeApp();
    await app.setQuestion("q-order");
    app.pin(); // pin "all"
    expect(app.comparisonGroups().length).toBe(1); // same label as the live column

    await app.applyFilters({ grades: [2], minCount: 1 });
    const calls = server.calls.length;
    const out = app.render();
    expect(out.comparison.match(/<g class="compare-col"/g)?.length).toBe(2);
    expect(out.comparison).toContain('data-label="all"');
    expect(out.comparison).toContain('data-label="grades=2"');
    expect(out.pins).toContain('class="unpin" data-index="0"');

    app.unpin(0);
    expect(server.calls.length).toBe(calls);
    expect(app.render().comparison.match(/<g class="compare-col"/g)?.length).toBe(1);
    expect(app.render().pins).toBe("");
  });

  it("ignores a slow stale views response racing a newer one", async () => {
    const slow = deferred<unknown>();
    const server = fakeServer({
      ...ROUTES,
      "/api/questions/q-order/views?grades=2": () => slow.promise,
      "/api/questions/q-order/views?grades=7": viewsFiltered(),
    });
    const app = new App(new ApiClient("", server.fetch));
    await app.setQuestion("q-order");

    const stale = app.applyFilters({ grades: [2] });
    await app.applyFilters({ grades: [7] });
    slow.resolve(viewsWorked()); // the old response lands after the new one
    await stale;

    expect(app.views?.overview.student_count).toBe(16); // not the stale payload's 1
  });
});
