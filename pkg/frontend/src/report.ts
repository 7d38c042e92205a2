/** Rendering for validation issues shared by the studios. */

import { el } from "./dom.js";
import type { Issue } from "./types.js";

export function issueList(issues: Issue[], tone: "error" | "warn"): HTMLElement {
  const list = el("ul", { class: `issues ${tone}` });
  for (const issue of issues) {
    list.append(
      el("li", { class: "issue", "data-code": issue.code }, `${issue.code}: ${issue.message}`),
    );
  }
  return list;
}
