import { describe, expect, it } from "vitest";

import { buildSearchUrl } from "../src/api.js";
import {
  emptyState,
  fromFragment,
  toFragment,
  toggleFilter,
  togglePanel,
} from "../src/state.js";

describe("toggleFilter", () => {
  it("adds then removes a value", () => {
    const once = toggleFilter(emptyState(), "folder", "b");
    expect(once.filters).toEqual({ folder: ["b"] });
    const twice = toggleFilter(once, "folder", "b");
    expect(twice.filters).toEqual({});
  });

  it("supports several values within one facet (OR within)", () => {
    let state = toggleFilter(emptyState(), "folder", "b");
    state = toggleFilter(state, "folder", "a");
    expect(state.filters.folder).toEqual(["a", "b"]);
  });

  it("resets pagination", () => {
    const paged = { ...emptyState(), page: 4 };
    expect(toggleFilter(paged, "author", "x").page).toBe(1);
  });

  it("does not mutate the previous state", () => {
    const before = emptyState();
    toggleFilter(before, "folder", "b");
    expect(before.filters).toEqual({});
  });
});

describe("fragment round-trip", () => {
  it("serializes and restores the full exploration state", () => {
    let state = toggleFilter(emptyState(), "technology", "tech-a");
    state = toggleFilter(state, "folder", "b");
    state = togglePanel(state, "mentions");
    state = {
      ...state,
      query: "data mining",
      page: 3,
      dateFrom: "2013-01-01",
      dateTo: "2013-12-31",
      selectedDoc: "abc123",
    };
    const restored = fromFragment(toFragment(state));
    expect(restored).toEqual(state);
  });

  it("ignores unknown facets and junk params", () => {
    const state = fromFragment("#f.bogus=1&nonsense=2&q=hello");
    expect(state.query).toBe("hello");
    expect(state.filters).toEqual({});
  });

  it("treats an empty fragment as the empty state", () => {
    expect(fromFragment("")).toEqual(emptyState());
    expect(toFragment(emptyState())).toBe("");
  });
});

describe("buildSearchUrl", () => {
  it("maps state onto the service wire format", () => {
    let state = toggleFilter(emptyState(), "folder", "b");
    state = { ...state, query: "mining", dateFrom: "2013-01-01", page: 2 };
    const url = buildSearchUrl("http://api", state);
    expect(url).toBe("http://api/search?q=mining&f.folder=b&from=2013-01-01&page=2");
  });

  it("repeats the key for multiple values in a facet", () => {
    let state = toggleFilter(emptyState(), "folder", "b");
    state = toggleFilter(state, "folder", "a");
    expect(buildSearchUrl("", state)).toBe("/search?f.folder=a&f.folder=b");
  });

  it("issues a bare /search for the empty state", () => {
    expect(buildSearchUrl("", emptyState())).toBe("/search");
  });
});
