/**
 * Browser bootstrap.  The API base defaults to same-origin and can be
 * overridden with ?api=http://host:port when the UI is hosted elsewhere.
 */

import { App } from "./app.js";
import { FacetClient } from "./api.js";

const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const app = new App(root, new FacetClient(apiBase));
void app.start(window.location.hash);

window.addEventListener("hashchange", () => {
  void app.start(window.location.hash);
});
