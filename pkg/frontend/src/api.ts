/**
 * Typed client for the docfacets JSON API.
 *
 * At most one /search request is in flight; issuing a new one aborts the
 * previous so stale responses can never repaint the panels.
 */

import type { ExplorationState } from "./state.js";
import { searchParams } from "./state.js";

export interface FacetValue {
  value: string;
  count: number;
}

export interface SearchDoc {
  id: string;
  path: string;
  format: string;
  snippet: string;
}

export interface SearchResponse {
  total: number;
  page: number;
  page_size: number;
  docs: SearchDoc[];
  facets: Record<string, FacetValue[]>;
}

export interface HighlightSpan {
  start: number;
  end: number;
  term: string;
  class: string;
}

export interface DocResponse {
  id: string;
  path: string;
  format: string;
  author: string | null;
  last_modified: string;
  tags: Record<string, string[]>;
  text: string;
  marked: string;
  spans: HighlightSpan[];
}

export function buildSearchUrl(base: string, state: ExplorationState): string {
  const params = searchParams(state);
  const qs = params.toString();
  return `${base}/search${qs ? "?" + qs : ""}`;
}

export function buildDocUrl(base: string, docId: string, hlTerms: string[]): string {
  const params = new URLSearchParams();
  const hl = hlTerms.filter((t) => t).join(" ");
  if (hl) params.set("hl", hl);
  const qs = params.toString();
  return `${base}/doc/${encodeURIComponent(docId)}${qs ? "?" + qs : ""}`;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class FacetClient {
  private inflight: AbortController | null = null;

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  /** Issue /search for the state, superseding any in-flight search. */
  async search(state: ExplorationState): Promise<SearchResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const resp = await this.fetchFn(buildSearchUrl(this.base, state), {
      signal: controller.signal,
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorText(resp));
    }
    return (await resp.json()) as SearchResponse;
  }

  async doc(docId: string, hlTerms: string[]): Promise<DocResponse> {
    const resp = await this.fetchFn(buildDocUrl(this.base, docId, hlTerms));
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorText(resp));
    }
    return (await resp.json()) as DocResponse;
  }
}

async function errorText(resp: Response): Promise<string> {
  try {
    const payload = (await resp.json()) as { error?: string };
    return payload.error ?? resp.statusText;
  } catch {
    return resp.statusText;
  }
}
