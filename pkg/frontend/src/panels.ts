/**
 * Pure DOM rendering: every view below is a function of (state, response)
 * only, so replaying the same pair re-renders identically.  Displayed counts
 * come verbatim from the service response; nothing is recomputed client-side.
 *
 * Interactive elements carry data-action attributes; the App attaches one
 * delegated click listener at the root.
 */

import type { DocResponse, FacetValue, SearchResponse } from "./api.js";
import { fontSizeFor } from "./cloud.js";
import type { ExplorationState } from "./state.js";
import { activeFilters, hasFilter } from "./state.js";

export const CLOUD_FACETS = [
  "keywords",
  "technology",
  "report_type",
  "mentions",
  "file_type",
  "author",
] as const;
export const MENU_FACETS = ["topic_cluster", "folder"] as const;

export const PANEL_ORDER: readonly string[] = [
  "keywords",
  "topic_cluster",
  "technology",
  "report_type",
  "mentions",
  "file_type",
  "folder",
  "author",
  "date",
];

const PANEL_TITLES: Record<string, string> = {
  keywords: "Top Discovered Keywords",
  topic_cluster: "Topic Clusters",
  technology: "Technology Finder",
  report_type: "Report Type",
  mentions: "Mentions",
  file_type: "Top File Types",
  folder: "Top Folders",
  author: "Authors",
  date: "Date",
};

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function panelShell(
  doc: Document,
  facet: string,
  state: ExplorationState,
): { panel: HTMLElement; body: HTMLElement } {
  const collapsed = state.collapsed.includes(facet);
  const panel = el(doc, "section", "facet-panel");
  panel.dataset.facet = facet;
  const header = el(doc, "header", "facet-header");
  const toggle = el(doc, "button", "facet-toggle", collapsed ? "+" : "−");
  toggle.dataset.action = "toggle-panel";
  toggle.dataset.facet = facet;
  header.append(toggle, el(doc, "span", "facet-title", PANEL_TITLES[facet] ?? facet));
  panel.append(header);
  const body = el(doc, "div", "facet-body");
  if (collapsed) body.hidden = true;
  panel.append(body);
  return { panel, body };
}

function renderCloud(
  doc: Document,
  facet: string,
  values: FacetValue[],
  state: ExplorationState,
  body: HTMLElement,
): void {
  const counts = values.map((v) => v.count);
  const minCount = Math.min(...counts);
  const maxCount = Math.max(...counts);
  const cloud = el(doc, "div", "tag-cloud");
  for (const { value, count } of values) {
    const tag = el(doc, "button", "tag", value);
    if (hasFilter(state, facet, value)) tag.classList.add("active");
    tag.style.fontSize = `${fontSizeFor(count, minCount, maxCount)}px`;
    tag.dataset.action = "toggle-filter";
    tag.dataset.facet = facet;
    tag.dataset.value = value;
    tag.dataset.count = String(count);
    tag.title = `${count} document${count === 1 ? "" : "s"}`;
    cloud.append(tag);
  }
  body.append(cloud);
}

function renderMenu(
  doc: Document,
  facet: string,
  values: FacetValue[],
  state: ExplorationState,
  body: HTMLElement,
): void {
  const list = el(doc, "ul", "facet-menu");
  for (const { value, count } of values) {
    const item = el(doc, "li", "menu-item");
    const button = el(doc, "button", "menu-value", value);
    if (hasFilter(state, facet, value)) button.classList.add("active");
    button.dataset.action = "toggle-filter";
    button.dataset.facet = facet;
    button.dataset.value = value;
    button.dataset.count = String(count);
    const countNode = el(doc, "span", "menu-count", String(count));
    item.append(button, countNode);
    list.append(item);
  }
  body.append(list);
}

function renderDatePanel(doc: Document, state: ExplorationState, body: HTMLElement): void {
  const from = el(doc, "input", "date-from") as HTMLInputElement;
  from.type = "date";
  from.value = state.dateFrom;
  from.dataset.role = "date-from";
  const to = el(doc, "input", "date-to") as HTMLInputElement;
  to.type = "date";
  to.value = state.dateTo;
  to.dataset.role = "date-to";
  const apply = el(doc, "button", "date-apply", "Apply");
  apply.dataset.action = "apply-dates";
  body.append(from, to, apply);
}

/** All nine facet panels, rendered from the response counts verbatim. */
export function renderFacetPanels(
  doc: Document,
  state: ExplorationState,
  response: SearchResponse,
): HTMLElement {
  const root = el(doc, "aside", "facet-panels");
  for (const facet of PANEL_ORDER) {
    const { panel, body } = panelShell(doc, facet, state);
    const values = response.facets[facet] ?? [];
    if (facet === "date") {
      renderDatePanel(doc, state, body);
    } else if (!values.length) {
      body.append(el(doc, "p", "facet-empty", "no values"));
    } else if ((MENU_FACETS as readonly string[]).includes(facet)) {
      renderMenu(doc, facet, values, state, body);
    } else {
      renderCloud(doc, facet, values, state, body);
    }
    root.append(panel);
  }
  return root;
}

/** Active filters as removable chips. */
export function renderChips(doc: Document, state: ExplorationState): HTMLElement {
  const bar = el(doc, "div", "chip-bar");
  for (const [facet, value] of activeFilters(state)) {
    const chip = el(doc, "button", "chip", `${facet}: ${value} ×`);
    chip.dataset.action = "toggle-filter";
    chip.dataset.facet = facet;
    chip.dataset.value = value;
    bar.append(chip);
  }
  return bar;
}

export function renderResults(
  doc: Document,
  state: ExplorationState,
  response: SearchResponse,
): HTMLElement {
  const root = el(doc, "div", "results");
  root.append(el(doc, "p", "result-total", `${response.total} documents`));
  const list = el(doc, "ol", "result-list");
  for (const row of response.docs) {
    const item = el(doc, "li", "result-item");
    const link = el(doc, "button", "result-path", row.path);
    link.dataset.action = "show-doc";
    link.dataset.doc = row.id;
    if (row.id === state.selectedDoc) link.classList.add("active");
    item.append(link, el(doc, "span", "result-format", row.format));
    item.append(el(doc, "p", "result-snippet", row.snippet));
    list.append(item);
  }
  root.append(list);

  const pages = Math.max(1, Math.ceil(response.total / response.page_size));
  const nav = el(doc, "nav", "pager");
  const prev = el(doc, "button", "pager-prev", "‹ prev");
  prev.dataset.action = "page-prev";
  prev.disabled = response.page <= 1;
  const next = el(doc, "button", "pager-next", "next ›");
  next.dataset.action = "page-next";
  next.disabled = response.page >= pages;
  nav.append(prev, el(doc, "span", "pager-label", `page ${response.page} / ${pages}`), next);
  root.append(nav);
  return root;
}

/** Quick view: the document text with marked spans in two visual classes. */
export function renderQuickView(doc: Document, docResponse: DocResponse): HTMLElement {
  const pane = el(doc, "article", "quick-view");
  const header = el(doc, "header", "quick-view-header");
  header.append(el(doc, "strong", "quick-view-path", docResponse.path));
  if (docResponse.author) {
    header.append(el(doc, "span", "quick-view-author", ` — ${docResponse.author}`));
  }
  pane.append(header);

  const body = el(doc, "div", "quick-view-text");
  const spans = [...docResponse.spans].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) {
      body.append(doc.createTextNode(docResponse.text.slice(cursor, span.start)));
    }
    const mark = el(doc, "mark", `hl hl-${span.class}`, docResponse.text.slice(span.start, span.end));
    mark.dataset.term = span.term;
    body.append(mark);
    cursor = span.end;
  }
  body.append(doc.createTextNode(docResponse.text.slice(cursor)));
  pane.append(body);
  return pane;
}

export function renderUnavailable(doc: Document): HTMLElement {
  return el(doc, "article", "quick-view quick-view-missing", "document unavailable");
}
