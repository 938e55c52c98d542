/**
 * The controller: owns the ExplorationState, issues searches, and repaints.
 *
 * Every interaction maps to a state transition followed by refresh(); the
 * DOM under #results and #panels is rebuilt from (state, last response) on
 * every paint.  Failed requests show a dismissable banner and leave the
 * previous state and panels untouched.
 */

import type { DocResponse, SearchResponse } from "./api.js";
import { ApiError, FacetClient } from "./api.js";
import {
  renderChips,
  renderFacetPanels,
  renderQuickView,
  renderResults,
  renderUnavailable,
} from "./panels.js";
import type { ExplorationState } from "./state.js";
import { emptyState, fromFragment, toFragment, toggleFilter, togglePanel } from "./state.js";

export interface AppOptions {
  /** Skip history updates (tests drive the fragment directly). */
  syncFragment?: boolean;
}

export class App {
  state: ExplorationState = emptyState();
  lastResponse: SearchResponse | null = null;

  private readonly doc: Document;
  private epoch = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: FacetClient,
    private readonly options: AppOptions = {},
  ) {
    this.doc = root.ownerDocument;
    this.buildSkeleton();
    this.root.addEventListener("click", (ev) => this.onClick(ev));
    const form = this.part("search-form");
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const input = this.part("search-input") as HTMLInputElement;
      void this.update({ ...this.state, query: input.value, page: 1 });
    });
  }

  /** Restore state from the URL fragment and run the first search. */
  async start(fragment = ""): Promise<void> {
    this.state = fromFragment(fragment);
    (this.part("search-input") as HTMLInputElement).value = this.state.query;
    await this.refresh();
    if (this.state.selectedDoc) {
      await this.showQuickView(this.state.selectedDoc, { keepState: true });
    }
  }

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <div class="banner" id="banner" hidden></div>
      <form id="search-form" class="search-form">
        <input id="search-input" type="search" placeholder="search terms" />
        <button type="submit">Search</button>
      </form>
      <div id="chips"></div>
      <div class="layout">
        <div id="panels"></div>
        <main id="results"></main>
        <div id="quick-view"></div>
      </div>`;
  }

  part(id: string): HTMLElement {
    const node = this.root.querySelector(`#${id}`);
    if (!node) throw new Error(`missing #${id}`);
    return node as HTMLElement;
  }

  private async update(next: ExplorationState): Promise<void> {
    this.state = next;
    await this.refresh();
  }

  /** Re-issue /search for the current state and repaint everything. */
  async refresh(): Promise<void> {
    const epoch = ++this.epoch;
    try {
      const response = await this.client.search(this.state);
      if (epoch !== this.epoch) return; // superseded
      this.lastResponse = response;
      this.hideBanner();
      this.paint();
      this.pushFragment();
    } catch (err) {
      if (isAbort(err)) return;
      this.showBanner(err instanceof ApiError ? err.message : "search failed");
    }
  }

  /** Rebuild panels, chips, and results from (state, lastResponse). */
  paint(): void {
    if (!this.lastResponse) return;
    const chips = this.part("chips");
    chips.replaceChildren(renderChips(this.doc, this.state));
    const panels = this.part("panels");
    panels.replaceChildren(renderFacetPanels(this.doc, this.state, this.lastResponse));
    const results = this.part("results");
    results.replaceChildren(renderResults(this.doc, this.state, this.lastResponse));
  }

  async showQuickView(docId: string, opts: { keepState?: boolean } = {}): Promise<void> {
    if (!opts.keepState) {
      this.state = { ...this.state, selectedDoc: docId };
      this.paint();
      this.pushFragment();
    }
    const pane = this.part("quick-view");
    let payload: DocResponse;
    try {
      payload = await this.client.doc(docId, this.state.query.split(/\s+/).filter(Boolean));
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        pane.replaceChildren(renderUnavailable(this.doc));
        return;
      }
      this.showBanner("document fetch failed");
      return;
    }
    pane.replaceChildren(renderQuickView(this.doc, payload));
  }

  private onClick(ev: Event): void {
    const target = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    if (action === "toggle-filter") {
      void this.update(toggleFilter(this.state, target.dataset.facet!, target.dataset.value!));
    } else if (action === "toggle-panel") {
      this.state = togglePanel(this.state, target.dataset.facet!);
      this.paint();
      this.pushFragment();
    } else if (action === "show-doc") {
      void this.showQuickView(target.dataset.doc!);
    } else if (action === "page-prev") {
      void this.update({ ...this.state, page: Math.max(1, this.state.page - 1) });
    } else if (action === "page-next") {
      void this.update({ ...this.state, page: this.state.page + 1 });
    } else if (action === "apply-dates") {
      const from = this.root.querySelector<HTMLInputElement>("[data-role=date-from]");
      const to = this.root.querySelector<HTMLInputElement>("[data-role=date-to]");
      void this.update({
        ...this.state,
        dateFrom: from?.value ?? "",
        dateTo: to?.value ?? "",
        page: 1,
      });
    } else if (action === "dismiss-banner") {
      this.hideBanner();
    }
  }

  private showBanner(message: string): void {
    const banner = this.part("banner");
    banner.textContent = `${message} `;
    const dismiss = this.doc.createElement("button");
    dismiss.textContent = "dismiss";
    dismiss.dataset.action = "dismiss-banner";
    banner.append(dismiss);
    banner.hidden = false;
  }

  private hideBanner(): void {
    const banner = this.part("banner");
    banner.hidden = true;
    banner.textContent = "";
  }

  private pushFragment(): void {
    if (this.options.syncFragment === false) return;
    const win = this.doc.defaultView;
    if (!win) return;
    const fragment = toFragment(this.state);
    win.history.replaceState(null, "", fragment ? `#${fragment}` : "#");
  }
}

function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
