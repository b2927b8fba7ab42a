// Controller between the api client, the view state, and the pure
// renderers. Nothing here touches the DOM; main.ts binds the rendered
// strings to elements and the tests drive this class with a fake fetch.

import { ApiClient } from "./api.js";
import {
  ViewState,
  initialState,
  stepWindow,
  gotoPage,
  selectError,
  addCompareGroup,
  removeCompareGroup,
  currentGroup,
  currentLabel,
  viewsQuery,
  STEP_WINDOW,
} from "./state.js";
import type {
  ComparisonPayload,
  ErrorRow,
  QuestionEntry,
  Recommendation,
  ViewsPayload,
} from "./types.js";
import {
  renderTransitionGraph,
  renderStepNav,
  renderRecommendationText,
} from "./render/graph.js";
import type { GraphOverlays } from "./render/graph.js";
import { renderComparison } from "./render/comparison.js";
import type { ComparisonGroup } from "./render/comparison.js";
import { renderOverview, renderErrorPanel } from "./render/overview.js";
import { renderEngagement } from "./render/engagement.js";
import { esc } from "./render/svg.js";

export interface Panels {
  overview: string;
  graph: string;
  stepNav: string;
  recommendation: string;
  engagement: string;
  comparison: string;
  pins: string;
  errors: string;
}

export interface FilterPatch {
  grades?: number[];
  scores?: number[];
  student?: string;
  minCount?: number;
}

export class App {
  state: ViewState = initialState();
  views: ViewsPayload | null = null;
  recommendation: Recommendation | null = null;
  private pinnedSummaries = new Map<string, ComparisonPayload>();

  constructor(private api: ApiClient) {}

  async loadQuestions(): Promise<QuestionEntry[]> {
    const payload = await this.api.getQuestions();
    return payload ? payload.questions : [];
  }

  /** Switch question: selection and pins reset, one views request. */
  async setQuestion(question: string): Promise<void> {
    this.state = { ...initialState(), question };
    this.recommendation = null;
    this.pinnedSummaries.clear();
    await this.refresh();
  }

  /** Any filter change costs exactly one views request. */
  async applyFilters(patch: FilterPatch): Promise<void> {
    this.state = { ...this.state, ...patch, selectedErrorRank: null };
    this.recommendation = null;
    await this.refresh();
  }

  private async refresh(): Promise<void> {
    if (!this.state.question) return;
    const payload = await this.api.getViews(this.state.question, viewsQuery(this.state));
    if (payload !== null) this.views = payload; // null: superseded by a newer request
  }

  /** Error row click: fetches the recommendation, never refetches views. */
  async pickError(rank: number | null): Promise<void> {
    this.state = selectError(this.state, rank);
    this.recommendation = null;
    if (rank === null || !this.state.question) return;
    const payload = await this.api.getRecommendation(this.state.question, rank);
    if (payload !== null && this.state.selectedErrorRank === rank) {
      this.recommendation = payload.recommendation;
    }
  }

  /** Pagination is pure state; the payload already holds every step. */
  page(page: number): void {
    this.state = gotoPage(this.state, page, this.maxStep());
  }

  /** Pin the live column; its summary is already in the payload. */
  pin(): void {
    if (!this.views) return;
    const spec = currentGroup(this.state);
    if (this.state.compareGroups.some((g) => g.label === spec.label)) return;
    this.state = addCompareGroup(this.state, spec);
    this.pinnedSummaries.set(spec.label, this.views.comparison);
    this.prunePins();
  }

  unpin(index: number): void {
    this.state = removeCompareGroup(this.state, index);
    this.prunePins();
  }

  private prunePins(): void {
    const keep = new Set(this.state.compareGroups.map((g) => g.label));
    for (const label of [...this.pinnedSummaries.keys()]) {
      if (!keep.has(label)) this.pinnedSummaries.delete(label);
    }
  }

  private maxStep(): number {
    return this.views ? this.views.model.max_step : 0;
  }

  selectedError(): ErrorRow | null {
    if (this.state.selectedErrorRank === null || !this.views) return null;
    return this.views.errors.find((e) => e.rank === this.state.selectedErrorRank) ?? null;
  }

  /** Comparison columns: the live group first, then pins (minus a same-label pin). */
  comparisonGroups(): ComparisonGroup[] {
    if (!this.views) return [];
    const live = currentLabel(this.state);
    const pins = this.state.compareGroups
      .filter((g) => g.label !== live && this.pinnedSummaries.has(g.label))
      .map((g) => ({ label: g.label, summary: this.pinnedSummaries.get(g.label)! }));
    return [{ label: live, summary: this.views.comparison }, ...pins];
  }

  /** Removable chips for the pinned groups. */
  renderPins(): string {
    if (!this.state.compareGroups.length) return "";
    const chips = this.state.compareGroups
      .map(
        (g, i) =>
          `<span class="pin-chip">${esc(g.label)}` +
          `<button type="button" class="unpin" data-index="${i}">x</button></span>`,
      )
      .join("");
    return `<div class="pin-strip">${chips}</div>`;
  }

  render(): Panels {
    if (!this.views) {
      const empty = `<div class="empty-state">loading</div>`;
      return {
        overview: empty,
        graph: empty,
        stepNav: "",
        recommendation: "",
        engagement: empty,
        comparison: empty,
        pins: "",
        errors: empty,
      };
    }
    const views = this.views;
    const range = stepWindow(this.state, views.model.max_step);
    const error = this.selectedError();
    const overlays: GraphOverlays = {};
    if (error) {
      overlays.error = error;
      if (this.recommendation) overlays.recommendation = this.recommendation;
    }
    return {
      overview: renderOverview(views.overview),
      graph: renderTransitionGraph(views.model, range, overlays),
      stepNav: renderStepNav(views.model.max_step, range.from, STEP_WINDOW),
      recommendation: renderRecommendationText(
        this.recommendation,
        this.state.selectedErrorRank,
      ),
      engagement: renderEngagement(views.engagement),
      comparison: renderComparison(this.comparisonGroups()),
      pins: this.renderPins(),
      errors: renderErrorPanel(views.errors, this.state.selectedErrorRank),
    };
  }
}
