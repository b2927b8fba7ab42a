// Fixture loading and a recording fake fetch. The fixtures are exact
// byte captures of service responses (scripts/record_fixtures.py), so
// whatever the renderers show is what the service actually said.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { FetchLike } from "../src/api.js";
import type {
  QuestionsPayload,
  RecommendationPayload,
  ViewsPayload,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8")) as T;
}

export const viewsAll = (): ViewsPayload => fixture("views.json");
export const viewsFiltered = (): ViewsPayload => fixture("views_filtered.json");
export const viewsWorked = (): ViewsPayload => fixture("views_worked.json");
export const recommendation = (): RecommendationPayload => fixture("recommendation.json");
export const questions = (): QuestionsPayload => fixture("questions.json");

export interface FakeServer {
  calls: string[];
  fetch: FetchLike;
}

type Route = unknown | (() => Promise<unknown>);

/** Exact-url routing; unknown urls answer 404. Every call is recorded. */
export function fakeServer(routes: Record<string, Route>): FakeServer {
  const calls: string[] = [];
  const fetch: FetchLike = async (url) => {
    calls.push(url);
    if (!(url in routes)) {
      return { ok: false, status: 404, json: async () => ({ error: "not found" }) };
    }
    const route = routes[url];
    const body = typeof route === "function" ? await (route as () => Promise<unknown>)() : route;
    return { ok: true, status: 200, json: async () => body };
  };
  return { calls, fetch };
}

export function deferred<T>(): { promise: Promise<T>; resolve: (value: T) => void } {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => {
    resolve = r;
  });
  return { promise, resolve };
}
