/** Dataset browser: the datasets the service knows and their stats.
 *
 * Datasets are event sourced server side; the browser lists the creation
 * events and asks the stats endpoint for per-dataset counts, so the numbers
 * shown are the service's own.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { clear, el, setNotice } from "./dom.js";
import type { StoredItem } from "./types.js";

const PAGE_LIMIT = 100;
const MAX_PAGES = 20;

interface DatasetRow {
  id: string;
  name: string;
  created_at: string;
}

async function listDatasets(client: WorkbenchClient): Promise<DatasetRow[]> {
  const rows: DatasetRow[] = [];
  let cursor: string | undefined;
  for (let page = 0; page < MAX_PAGES; page++) {
    const batch = await client.listItems("dataset", cursor, PAGE_LIMIT);
    for (const item of batch.items as StoredItem[]) {
      if (item.payload["event"] === "created") {
        rows.push({
          id: item.id,
          name: String(item.payload["name"] ?? ""),
          created_at: item.created_at,
        });
      }
    }
    if (!batch.next_cursor) break;
    cursor = batch.next_cursor;
  }
  return rows;
}

export function mountDatasets(root: HTMLElement, client: WorkbenchClient): void {
  clear(root);
  const view = el("section", { class: "datasets" });
  view.append(el("h2", {}, "Datasets"));

  const banner = el("div", { class: "banner", role: "alert" });
  banner.hidden = true;
  const listBox = el("div", { class: "dataset-list" });
  const detailBox = el("div", { class: "dataset-detail" });
  view.append(banner, listBox, detailBox);
  root.append(view);

  async function showStats(id: string): Promise<void> {
    setNotice(banner, null);
    try {
      const stats = await client.datasetStats(id);
      clear(detailBox);
      detailBox.append(
        el("h3", {}, stats.name),
        el("div", { class: "dataset-size" }, `${stats.size} record(s)`),
      );
      const genres = Object.entries(stats.genres);
      if (genres.length > 0) {
        const list = el("ul", { class: "genre-distribution" });
        for (const [genre, count] of genres) {
          list.append(el("li", { "data-genre": genre }, `${genre}: ${count}`));
        }
        detailBox.append(list);
      }
    } catch (err) {
      if (err instanceof ApiError) {
        setNotice(banner, `${err.code}: ${err.message}`, "error");
      } else {
        setNotice(banner, String(err), "error");
      }
    }
  }

  async function load(): Promise<void> {
    clear(listBox);
    listBox.append(el("span", { class: "loading" }, "loading datasets…"));
    try {
      const rows = await listDatasets(client);
      clear(listBox);
      if (rows.length === 0) {
        listBox.append(el("div", { class: "empty" }, "no datasets yet"));
        return;
      }
      const table = el("table", { class: "dataset-rows" });
      const head = el("tr", {});
      head.append(el("th", {}, "name"), el("th", {}, "id"), el("th", {}, "created"));
      table.append(head);
      for (const row of rows) {
        const tr = el("tr", { class: "dataset-row", "data-id": row.id });
        tr.append(el("td", {}, row.name), el("td", { class: "mono" }, row.id), el("td", {}, row.created_at));
        tr.addEventListener("click", () => void showStats(row.id));
        table.append(tr);
      }
      listBox.append(table);
    } catch (err) {
      clear(listBox);
      if (err instanceof ApiError) {
        setNotice(banner, `${err.code}: ${err.message}`, "error");
      } else {
        setNotice(banner, String(err), "error");
      }
    }
  }

  void load();
}
