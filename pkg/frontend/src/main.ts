import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    __PANELSMITH_API__?: string;
    __PANELSMITH_LENGTH__?: number;
    __PANELSMITH_SEED__?: number;
  }
}

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}

const api = new ApiClient(window.__PANELSMITH_API__ ?? window.location.origin);
const app = new App(root, api, {
  length: window.__PANELSMITH_LENGTH__ ?? 5,
  seed: window.__PANELSMITH_SEED__ ?? 42,
});

void app.init();
