// Client-side view state and its pure transitions. Rendering reads
// this plus the latest payload; nothing here touches the network.

export interface GroupSpec {
  label: string;
  grades: number[] | null;
  scores: number[] | null;
  student: string | null;
}

export interface ViewState {
  question: string | null;
  grades: number[];
  scores: number[];
  student: string;
  minCount: number;
  compareGroups: GroupSpec[]; // pinned columns; the live filter column renders first
  selectedErrorRank: number | null;
  hover: { step: number; stage: number } | null;
  pageOffset: number; // first visible step
}

// at most 12 step columns on screen; older questions page horizontally
export const STEP_WINDOW = 12;
export const MAX_COMPARE_GROUPS = 4;

export function initialState(): ViewState {
  return {
    question: null,
    grades: [],
    scores: [],
    student: "",
    minCount: 0,
    compareGroups: [],
    selectedErrorRank: null,
    hover: null,
    pageOffset: 0,
  };
}

/** Inclusive step window [from, to], clamped to the model and 12 wide. */
export function stepWindow(state: ViewState, maxStep: number): { from: number; to: number } {
  const pages = pageCount(maxStep);
  const page = Math.min(Math.max(0, Math.floor(state.pageOffset / STEP_WINDOW)), pages - 1);
  const from = page * STEP_WINDOW;
  return { from, to: Math.min(from + STEP_WINDOW - 1, maxStep) };
}

export function pageCount(maxStep: number): number {
  return Math.max(1, Math.ceil((maxStep + 1) / STEP_WINDOW));
}

export function gotoPage(state: ViewState, page: number, maxStep: number): ViewState {
  const clamped = Math.min(Math.max(0, page), pageCount(maxStep) - 1);
  return { ...state, pageOffset: clamped * STEP_WINDOW };
}

export function selectError(state: ViewState, rank: number | null): ViewState {
  return { ...state, selectedErrorRank: rank };
}

/**
 * Pin a group beside the live column. The live column always renders,
 * so at most MAX - 1 pins fit; adding beyond that replaces the last pin.
 */
export function addCompareGroup(state: ViewState, group: GroupSpec): ViewState {
  const cap = MAX_COMPARE_GROUPS - 1;
  const groups = state.compareGroups.slice(0, cap);
  if (groups.length >= cap) {
    groups[cap - 1] = group;
  } else {
    groups.push(group);
  }
  return { ...state, compareGroups: groups };
}

export function removeCompareGroup(state: ViewState, index: number): ViewState {
  const groups = state.compareGroups.filter((_, i) => i !== index);
  return { ...state, compareGroups: groups };
}

/** Human label for the live filter column, "all" when nothing is set. */
export function currentLabel(state: ViewState): string {
  const parts: string[] = [];
  if (state.grades.length) parts.push(`grades=${state.grades.join(",")}`);
  if (state.scores.length) parts.push(`scores=${state.scores.join(",")}`);
  if (state.student) parts.push(`student=${state.student}`);
  return parts.length ? parts.join(" ") : "all";
}

/** Snapshot of the live filters as a pinnable group spec. */
export function currentGroup(state: ViewState): GroupSpec {
  return {
    label: currentLabel(state),
    grades: state.grades.length ? state.grades.slice() : null,
    scores: state.scores.length ? state.scores.slice() : null,
    student: state.student || null,
  };
}

/** Query string for GET views; only non-default fields are sent. */
export function viewsQuery(state: ViewState): string {
  const parts: string[] = [];
  if (state.grades.length) parts.push(`grades=${state.grades.join(",")}`);
  if (state.scores.length) parts.push(`scores=${state.scores.join(",")}`);
  if (state.student) parts.push(`student=${encodeURIComponent(state.student)}`);
  if (state.minCount > 0) parts.push(`min_count=${state.minCount}`);
  return parts.length ? `?${parts.join("&")}` : "";
}

/** "2,7" -> [2, 7]; blanks and junk are dropped, order preserved. */
export function parseIntList(text: string): number[] {
  return text
    .split(",")
    .map((p) => p.trim())
    .filter((p) => p.length > 0 && /^-?\d+$/.test(p))
    .map((p) => parseInt(p, 10));
}
