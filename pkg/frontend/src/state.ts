/**
 * Exploration state: the query, active facet filters, pagination, panel
 * collapse flags and the selected document.  The whole state round-trips
 * through the URL fragment so any view is shareable and bookmarkable.
 */

export const FACETS = [
  "keywords",
  "topic_cluster",
  "technology",
  "report_type",
  "mentions",
  "file_type",
  "folder",
  "author",
  "date",
] as const;

export type FacetName = (typeof FACETS)[number];

export interface ExplorationState {
  query: string;
  filters: Record<string, string[]>;
  dateFrom: string;
  dateTo: string;
  page: number;
  collapsed: string[];
  selectedDoc: string | null;
}

export function emptyState(): ExplorationState {
  return {
    query: "",
    filters: {},
    dateFrom: "",
    dateTo: "",
    page: 1,
    collapsed: [],
    selectedDoc: null,
  };
}

export function isFacet(name: string): name is FacetName {
  return (FACETS as readonly string[]).includes(name);
}

/** Toggle one facet value on or off; any change resets to page 1. */
export function toggleFilter(
  state: ExplorationState,
  facet: string,
  value: string,
): ExplorationState {
  const current = state.filters[facet] ?? [];
  const values = current.includes(value)
    ? current.filter((v) => v !== value)
    : [...current, value].sort();
  const filters = { ...state.filters };
  if (values.length) {
    filters[facet] = values;
  } else {
    delete filters[facet];
  }
  return { ...state, filters, page: 1 };
}

export function hasFilter(state: ExplorationState, facet: string, value: string): boolean {
  return (state.filters[facet] ?? []).includes(value);
}

export function activeFilters(state: ExplorationState): Array<[string, string]> {
  const chips: Array<[string, string]> = [];
  for (const facet of Object.keys(state.filters).sort()) {
    for (const value of state.filters[facet]) {
      chips.push([facet, value]);
    }
  }
  return chips;
}

export function togglePanel(state: ExplorationState, facet: string): ExplorationState {
  const collapsed = state.collapsed.includes(facet)
    ? state.collapsed.filter((f) => f !== facet)
    : [...state.collapsed, facet].sort();
  return { ...state, collapsed };
}

/** The /search query parameters for this state (service wire format). */
export function searchParams(state: ExplorationState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.query.trim()) params.set("q", state.query.trim());
  for (const facet of Object.keys(state.filters).sort()) {
    for (const value of state.filters[facet]) {
      params.append(`f.${facet}`, value);
    }
  }
  if (state.dateFrom) params.set("from", state.dateFrom);
  if (state.dateTo) params.set("to", state.dateTo);
  if (state.page > 1) params.set("page", String(state.page));
  return params;
}

/** Serialize to the URL fragment (no leading '#'). */
export function toFragment(state: ExplorationState): string {
  const params = searchParams(state);
  if (state.collapsed.length) params.set("collapsed", state.collapsed.join(","));
  if (state.selectedDoc) params.set("doc", state.selectedDoc);
  return params.toString();
}

export function fromFragment(fragment: string): ExplorationState {
  const state = emptyState();
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  for (const [key, value] of params.entries()) {
    if (key === "q") state.query = value;
    else if (key === "from") state.dateFrom = value;
    else if (key === "to") state.dateTo = value;
    else if (key === "page") state.page = Math.max(1, parseInt(value, 10) || 1);
    else if (key === "collapsed") state.collapsed = value.split(",").filter(Boolean);
    else if (key === "doc") state.selectedDoc = value;
    else if (key.startsWith("f.")) {
      const facet = key.slice(2);
      if (isFacet(facet)) {
        (state.filters[facet] ??= []).push(value);
      }
    }
  }
  for (const facet of Object.keys(state.filters)) state.filters[facet].sort();
  return state;
}
