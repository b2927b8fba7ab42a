import { describe, expect, it } from "vitest";
import {
  MAX_COMPARE_GROUPS,
  addCompareGroup,
  currentGroup,
  currentLabel,
  gotoPage,
  initialState,
  pageCount,
  parseIntList,
  removeCompareGroup,
  stepWindow,
  viewsQuery,
} from "../src/state.js";

describe("step window", () => {
  it("covers everything when the model is short", () => {
    expect(stepWindow(initialState(), 6)).toEqual({ from: 0, to: 6 });
  });

  it("is at most 12 steps wide", () => {
    expect(stepWindow(initialState(), 30)).toEqual({ from: 0, to: 11 });
  });

  it("pages forward and clamps the tail page", () => {
    const state = gotoPage(initialState(), 2, 30);
    expect(stepWindow(state, 30)).toEqual({ from: 24, to: 30 });
  });

  it("clamps out-of-range pages", () => {
    expect(stepWindow(gotoPage(initialState(), 99, 30), 30).from).toBe(24);
    expect(stepWindow(gotoPage(initialState(), -5, 30), 30).from).toBe(0);
  });

  it("counts pages inclusive of step 0", () => {
    expect(pageCount(11)).toBe(1);
    expect(pageCount(12)).toBe(2);
    expect(pageCount(14)).toBe(2);
  });

  it("survives a shrinking model after paging", () => {
    // filter can cut max_step below the current page; window must clamp
    const paged = gotoPage(initialState(), 1, 30);
    expect(stepWindow(paged, 8)).toEqual({ from: 0, to: 8 });
  });
});

describe("compare groups", () => {
  const spec = (label: string) => ({ label, grades: null, scores: null, student: null });

  it("caps pins one below the column budget", () => {
    let state = initialState();
    for (const label of ["a", "b", "c", "d", "e"]) {
      state = addCompareGroup(state, spec(label));
    }
    expect(state.compareGroups.length).toBe(MAX_COMPARE_GROUPS - 1);
    // beyond the cap the last pin is replaced, earlier pins stay
    expect(state.compareGroups.map((g) => g.label)).toEqual(["a", "b", "e"]);
  });

  it("removes by index down to none", () => {
    let state = addCompareGroup(initialState(), spec("a"));
    state = removeCompareGroup(state, 0);
    expect(state.compareGroups).toEqual([]);
  });
});

describe("filter round trip", () => {
  it("sends only non-default fields", () => {
    expect(viewsQuery(initialState())).toBe("");
    const state = { ...initialState(), grades: [2, 7], minCount: 3 };
    expect(viewsQuery(state)).toBe("?grades=2,7&min_count=3");
    expect(viewsQuery({ ...initialState(), student: "s0042" })).toBe("?student=s0042");
  });

  it("labels the live group readably", () => {
    expect(currentLabel(initialState())).toBe("all");
    expect(currentLabel({ ...initialState(), scores: [0], student: "s1" })).toBe(
      "scores=0 student=s1",
    );
  });

  it("snapshots the live filters as a pinnable spec", () => {
    expect(currentGroup({ ...initialState(), grades: [2] })).toEqual({
      label: "grades=2",
      grades: [2],
      scores: null,
      student: null,
    });
  });

  it("parses comma lists leniently", () => {
    expect(parseIntList(" 2, 7 ,x,,9")).toEqual([2, 7, 9]);
    expect(parseIntList("")).toEqual([]);
  });
});
