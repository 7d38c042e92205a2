/** Scene Studio: describe a scene, generate it, read it as a screenplay.
 *
 * Elements are laid out by kind (sluglines flush left and uppercase, cues
 * centered, dialogue indented) using the element list from the response.
 * Warnings arrive as dismissible notices; an empty description never leaves
 * the browser.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { clear, el, setNotice } from "./dom.js";
import { formatMs } from "./format.js";
import { sceneBlockers } from "./session.js";
import { createRatingPanel } from "./rating.js";
import { issueList } from "./report.js";
import type { Issue, SceneGeneration } from "./types.js";

export function mountSceneStudio(root: HTMLElement, client: WorkbenchClient): void {
  clear(root);
  const view = el("section", { class: "studio scene-studio" });
  view.append(el("h2", {}, "Scene Studio"));

  const description = el("textarea", {
    class: "description",
    rows: "4",
    placeholder: "What happens in the scene, in a few sentences.",
    "aria-label": "scene description",
  });
  const requirementNote = el("div", { class: "form-note requirement", role: "status" });
  requirementNote.hidden = true;
  const generateBtn = el("button", { type: "button", class: "generate" }, "Generate");
  const banner = el("div", { class: "banner", role: "alert" });
  banner.hidden = true;

  const form = el(
    "div",
    { class: "studio-form" },
    el("label", { class: "field" }, "Description ", description),
    requirementNote,
    generateBtn,
    banner,
  );

  const results = el("div", { class: "studio-results" });
  const meta = el("div", { class: "result-meta" });
  const noticeBox = el("div", { class: "notice-box" });
  const sheet = el("div", { class: "screenplay-sheet" });
  const reportBox = el("div", { class: "report-box" });
  const rawBox = el("div", { class: "raw-box" });
  results.append(meta, noticeBox, sheet, reportBox, rawBox);

  let lastId: string | null = null;
  const ratingPanel = createRatingPanel({ client, itemId: () => lastId });
  ratingPanel.hidden = true;
  results.append(ratingPanel);

  view.append(form, results);
  root.append(view);

  let busy = false;

  function updateGating(): void {
    const blockers = sceneBlockers({ description: description.value, busy });
    generateBtn.disabled = blockers.length > 0;
    setNotice(requirementNote, blockers.length > 0 ? blockers.join("; ") : null, "warn");
  }

  function dismissibleNotice(issue: Issue): HTMLElement {
    const notice = el("div", { class: "dismissible warn", "data-code": issue.code });
    const close = el("button", { type: "button", class: "dismiss", "aria-label": "dismiss" }, "×");
    close.addEventListener("click", () => notice.remove());
    notice.append(el("span", {}, `${issue.code}: ${issue.message}`), close);
    return notice;
  }

  function renderResult(result: SceneGeneration): void {
    clear(meta);
    meta.append(
      el(
        "div",
        { class: "meta-line" },
        `backend ${result.raw.backend_id} · ${formatMs(result.raw.elapsed_ms)}` +
          (result.raw.truncated ? " · truncated" : ""),
      ),
    );
    clear(noticeBox);
    for (const warning of result.report.warnings) {
      noticeBox.append(dismissibleNotice(warning));
    }
    clear(sheet);
    if (result.scene) {
      for (const element of result.scene.elements) {
        sheet.append(el("div", { class: `el ${element.kind}` }, element.text));
      }
    }
    clear(reportBox);
    if (result.report.errors.length > 0) {
      reportBox.append(issueList(result.report.errors, "error"));
    }
    clear(rawBox);
    if (!result.scene) {
      const details = el("details", { class: "raw-completion" });
      details.append(el("summary", {}, "raw completion"), el("pre", {}, result.raw.text));
      rawBox.append(details);
    }
    lastId = result.id;
    ratingPanel.hidden = false;
    generateBtn.textContent = "Regenerate";
  }

  async function generate(): Promise<void> {
    // re-check so an empty description never leaves the browser
    if (sceneBlockers({ description: description.value, busy }).length > 0) {
      updateGating();
      return;
    }
    busy = true;
    updateGating();
    setNotice(banner, null);
    try {
      const result = await client.generateScene({ description: description.value });
      renderResult(result);
    } catch (err) {
      if (err instanceof ApiError) {
        setNotice(banner, `${err.code}: ${err.message}`, "error");
      } else {
        setNotice(banner, String(err), "error");
      }
    } finally {
      busy = false;
      updateGating();
    }
  }

  description.addEventListener("input", updateGating);
  generateBtn.addEventListener("click", () => void generate());
  updateGating();
}
