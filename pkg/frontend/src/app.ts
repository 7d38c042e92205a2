/** Application shell: navigation, base URL setting, view mounting. */

import { WorkbenchClient } from "./api.js";
import { clear, el } from "./dom.js";
import { mountDatasets } from "./datasets.js";
import { mountEvaluation } from "./evaluation.js";
import { mountPlotStudio } from "./plotStudio.js";
import { mountSceneStudio } from "./sceneStudio.js";

const BASE_URL_KEY = "writer-ui.base-url";

type ViewName = "plots" | "scenes" | "evaluation" | "datasets";

const VIEWS: ReadonlyArray<[ViewName, string, (root: HTMLElement, client: WorkbenchClient) => void]> = [
  ["plots", "Plot Studio", mountPlotStudio],
  ["scenes", "Scene Studio", mountSceneStudio],
  ["evaluation", "Evaluation", mountEvaluation],
  ["datasets", "Datasets", mountDatasets],
];

function storedBaseUrl(): string {
  try {
    return window.localStorage.getItem(BASE_URL_KEY) ?? "";
  } catch {
    return "";
  }
}

function storeBaseUrl(value: string): void {
  try {
    window.localStorage.setItem(BASE_URL_KEY, value);
  } catch {
    // storage may be unavailable; the session keeps the in-memory value
  }
}

export function createApp(root: HTMLElement, initialBaseUrl?: string): void {
  clear(root);
  let baseUrl = initialBaseUrl ?? storedBaseUrl();
  let client = new WorkbenchClient(baseUrl);
  let active: ViewName = "plots";

  const nav = el("nav", { class: "topbar" });
  const buttons = new Map<ViewName, HTMLButtonElement>();
  for (const [name, label] of VIEWS) {
    const button = el("button", { type: "button", class: "nav-btn", "data-view": name }, label);
    buttons.set(name, button);
    nav.append(button);
  }

  const urlInput = el("input", {
    type: "text",
    class: "base-url",
    placeholder: "service base URL (empty for same origin)",
    "aria-label": "service base URL",
    value: baseUrl,
  });
  const applyBtn = el("button", { type: "button", class: "apply-url" }, "Apply");
  nav.append(el("span", { class: "spacer" }), urlInput, applyBtn);

  const main = el("main", { class: "view-root" });
  root.append(nav, main);

  function show(name: ViewName): void {
    active = name;
    for (const [viewName, button] of buttons) {
      button.classList.toggle("active", viewName === name);
    }
    const entry = VIEWS.find(([n]) => n === name);
    if (entry) {
      entry[2](main, client);
    }
  }

  for (const [name, , ] of VIEWS) {
    buttons.get(name)?.addEventListener("click", () => show(name));
  }

  applyBtn.addEventListener("click", () => {
    baseUrl = urlInput.value.trim().replace(/\/+$/, "");
    urlInput.value = baseUrl;
    storeBaseUrl(baseUrl);
    client = new WorkbenchClient(baseUrl);
    show(active);
  });

  show("plots");
}

const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount) {
  createApp(mount);
}
