/** Evaluation view: Likert summaries straight from the service.
 *
 * The table and the little box bars are drawn from the summary response
 * fields only; the browser never aggregates scores itself.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { clear, el, setNotice } from "./dom.js";
import { formatScore } from "./format.js";
import { RATING_FEATURES } from "./session.js";
import type { FeatureStats, LikertSummary } from "./types.js";

const STAT_COLUMNS: ReadonlyArray<keyof FeatureStats> = ["mean", "median", "q1", "q3", "min", "max"];

function boxBar(stats: FeatureStats): HTMLElement {
  // map the 1..5 scale onto 0..100% and position the box by the quartiles
  const pct = (v: number) => ((v - 1) / 4) * 100;
  const bar = el("div", { class: "box-bar" });
  const whisker = el("span", { class: "whisker" });
  whisker.style.left = `${pct(stats.min)}%`;
  whisker.style.width = `${pct(stats.max) - pct(stats.min)}%`;
  const box = el("span", { class: "box" });
  box.style.left = `${pct(stats.q1)}%`;
  box.style.width = `${Math.max(pct(stats.q3) - pct(stats.q1), 1)}%`;
  const median = el("span", { class: "median-tick" });
  median.style.left = `${pct(stats.median)}%`;
  bar.append(whisker, box, median);
  return bar;
}

export function mountEvaluation(root: HTMLElement, client: WorkbenchClient): void {
  clear(root);
  const view = el("section", { class: "evaluation" });
  view.append(el("h2", {}, "Evaluation"));

  const kindSelect = el("select", { class: "kind-filter", "aria-label": "item kind" });
  kindSelect.append(
    el("option", { value: "" }, "all kinds"),
    el("option", { value: "plot_generation" }, "plots"),
    el("option", { value: "scene_generation" }, "scenes"),
  );
  const itemInput = el("input", {
    type: "text",
    class: "item-filter",
    placeholder: "item id (optional)",
    "aria-label": "item id",
  });
  const loadBtn = el("button", { type: "button", class: "load-summary" }, "Load summary");
  const banner = el("div", { class: "banner", role: "alert" });
  banner.hidden = true;
  const tableBox = el("div", { class: "summary-table" });

  view.append(
    el("div", { class: "filter-row" }, kindSelect, itemInput, loadBtn),
    banner,
    tableBox,
  );
  root.append(view);

  function renderSummary(summary: LikertSummary): void {
    clear(tableBox);
    tableBox.append(el("div", { class: "summary-count" }, `${summary.n_ratings} rating(s)`));
    const table = el("table", { class: "stats" });
    const head = el("tr", {});
    head.append(el("th", {}, "feature"));
    for (const col of STAT_COLUMNS) {
      head.append(el("th", {}, col));
    }
    head.append(el("th", {}, "box"));
    table.append(head);
    for (const feature of RATING_FEATURES) {
      const stats = summary.features[feature];
      if (!stats) continue;
      const row = el("tr", { "data-feature": feature });
      row.append(el("td", { class: "feature-name" }, feature));
      for (const col of STAT_COLUMNS) {
        row.append(el("td", { class: `stat ${col}`, "data-stat": col }, formatScore(stats[col])));
      }
      const cell = el("td", { class: "box-cell" });
      cell.append(boxBar(stats));
      row.append(cell);
      table.append(row);
    }
    tableBox.append(table);
  }

  loadBtn.addEventListener("click", () => {
    void (async () => {
      setNotice(banner, null);
      loadBtn.disabled = true;
      try {
        const filter: { kind?: string; item_id?: string } = {};
        if (kindSelect.value) filter.kind = kindSelect.value;
        if (itemInput.value.trim()) filter.item_id = itemInput.value.trim();
        renderSummary(await client.ratingsSummary(filter));
      } catch (err) {
        clear(tableBox);
        if (err instanceof ApiError && err.code === "EmptyRatings") {
          setNotice(banner, "no ratings yet for that selection", "info");
        } else if (err instanceof ApiError) {
          setNotice(banner, `${err.code}: ${err.message}`, "error");
        } else {
          setNotice(banner, String(err), "error");
        }
      } finally {
        loadBtn.disabled = false;
      }
    })();
  });
}
