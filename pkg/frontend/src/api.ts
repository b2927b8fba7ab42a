// Thin fetch wrapper with stale-response discarding: only the latest
// request per endpoint key may apply, so a slow older views response
// can never clobber a newer one.

import type { QuestionsPayload, RecommendationPayload, ViewsPayload } from "./types.js";

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  private seq = 0;
  private latest = new Map<string, number>();

  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  /** null means a newer request superseded this one; ignore the result. */
  private async get<T>(key: string, path: string): Promise<T | null> {
    const ticket = ++this.seq;
    this.latest.set(key, ticket);
    const response = await this.fetchFn(this.baseUrl + path);
    if (this.latest.get(key) !== ticket) return null;
    if (!response.ok) throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
    return (await response.json()) as T;
  }

  getQuestions(): Promise<QuestionsPayload | null> {
    return this.get<QuestionsPayload>("questions", "/api/questions");
  }

  getViews(question: string, query: string): Promise<ViewsPayload | null> {
    return this.get<ViewsPayload>(
      "views",
      `/api/questions/${encodeURIComponent(question)}/views${query}`,
    );
  }

  getRecommendation(question: string, rank: number): Promise<RecommendationPayload | null> {
    return this.get<RecommendationPayload>(
      "recommendation",
      `/api/questions/${encodeURIComponent(question)}/errors/${rank}/recommendation`,
    );
  }
}
