// Wire types for the qlens HTTP API. The UI performs no aggregation:
// every number rendered comes verbatim from one of these payloads.

export type Slots = (number | null)[];

export interface HistogramRow {
  value: number;
  count: number;
}

export interface OverviewPayload {
  student_count: number;
  scores: HistogramRow[];
  grades: HistogramRow[];
  time_minutes: HistogramRow[];
}

export interface AnswerStat {
  slots: Slots;
  count: number;
  mean_time_ms: number;
  mean_traj_px: number;
}

export interface ModelState {
  step: number;
  stage: number;
  sessions: number;
  students: number;
  ends: number;
  condition_counts: number[];
  answers: AnswerStat[];
}

export interface ModelTransition {
  step: number; // destination step; the edge leaves step - 1
  from_stage: number;
  to_stage: number;
  count: number;
}

export interface EngagementPoint {
  step: number;
  mean_time_ms: number;
  mean_traj_px: number;
  active: number;
  progressed: number;
}

export interface GroupCore {
  grades: number[] | null;
  scores: number[] | null;
  student: string | null;
}

export interface ModelPayload {
  schema: string;
  question: string;
  group: GroupCore;
  m: number;
  max_step: number;
  session_count: number;
  student_count: number;
  states: ModelState[];
  transitions: ModelTransition[];
  engagement: EngagementPoint[];
}

export interface FiveNum {
  n: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  whisker_low: number;
  whisker_high: number;
}

export interface StageRow {
  stage: number;
  hit_times: number;
  condition_times: number[];
  dwell: FiveNum | null;
  drop_stop_count: number;
}

export interface ComparisonPayload {
  student_count: number;
  total_time: FiveNum | null;
  stages: StageRow[];
}

export interface ErrorRow {
  rank: number;
  answer: Slots;
  stage: number;
  fail_enders: number;
  encounters_fail: number[];
  encounters_pass: number[];
  bypass_count: number;
}

export interface ViewsQueryEcho extends GroupCore {
  min_count: number;
}

export interface ViewsPayload {
  schema: string;
  question: string;
  query: ViewsQueryEcho;
  overview: OverviewPayload;
  model: ModelPayload;
  engagement: EngagementPoint[];
  comparison: ComparisonPayload;
  errors: ErrorRow[];
}

export interface QuestionEntry {
  question: string;
  title: string;
  students: number;
}

export interface QuestionsPayload {
  schema: string;
  questions: QuestionEntry[];
}

export interface RecommendationPath {
  state: "path";
  error: Slots;
  path: Slots[];
  stages: number[];
  support: number[];
  length: number;
  regressions: number;
}

export interface RecommendationNoCoverage {
  state: "no_coverage";
  error: Slots;
}

export type Recommendation = RecommendationPath | RecommendationNoCoverage;

export interface RecommendationPayload {
  schema: string;
  question: string;
  rank: number;
  fail_enders: number;
  recommendation: Recommendation;
}

export const VIEWS_SCHEMA = "qlens-views/1";
export const MODEL_SCHEMA = "qlens-model/1";

/** "6,3,-,-,-,-" display form of a slot vector. */
export function slotsText(slots: Slots): string {
  return slots.map((v) => (v === null ? "-" : String(v))).join(",");
}
