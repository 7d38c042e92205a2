/** Plot Studio: draft a storyline, pick a profile and genres, generate acts.
 *
 * Gating happens before any request: an empty storyline or a genre-taking
 * profile with no genres keeps the button disabled and explains why.  The
 * act panels and every issue shown come straight from the service response;
 * the view never assembles annotated text on its own.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { clear, el, setNotice } from "./dom.js";
import { formatMs } from "./format.js";
import {
  needsGenres,
  plotBlockers,
  PROFILE_BLURBS,
  PROFILES,
  readBand,
  usesLongStoryline,
  type Profile,
} from "./session.js";
import { createRatingPanel } from "./rating.js";
import { issueList } from "./report.js";
import type { PlotGeneration } from "./types.js";

const ACT_LABELS: ReadonlyArray<[key: "one" | "two_a" | "two_b" | "three", label: string]> = [
  ["one", "Act 1"],
  ["two_a", "Act 2A"],
  ["two_b", "Act 2B"],
  ["three", "Act 3"],
];

const ERROR_HINTS: Record<string, string> = {
  GenresRequired: "pick at least one genre for this profile",
  GenresForbidden: "this profile takes no genres, clear the selection",
  MissingLongStoryline: "this profile needs the longer storyline",
  BackendUnavailable: "the completion backend is unreachable, try again shortly",
  Timeout: "the backend timed out, try again",
  Unreachable: "check the service base URL in the header",
};

export function mountPlotStudio(root: HTMLElement, client: WorkbenchClient): void {
  clear(root);
  const view = el("section", { class: "studio plot-studio" });
  view.append(el("h2", {}, "Plot Studio"));

  // form column
  const profileSelect = el("select", { class: "profile-select", "aria-label": "profile" });
  for (const p of PROFILES) {
    profileSelect.append(el("option", { value: p }, `${p} (${PROFILE_BLURBS[p]})`));
  }
  profileSelect.value = "AS";

  const storyline = el("textarea", {
    class: "storyline",
    rows: "5",
    placeholder: "One storyline, a few sentences.",
    "aria-label": "storyline",
  });
  const bandIndicator = el("span", { class: "band-indicator", role: "status" });

  const genreBox = el("fieldset", { class: "genre-box" });
  genreBox.append(el("legend", {}, "Genres"));
  const genreNote = el("div", { class: "form-note" });
  genreNote.hidden = true;

  const requirementNote = el("div", { class: "form-note requirement", role: "status" });
  requirementNote.hidden = true;
  const generateBtn = el("button", { type: "button", class: "generate" }, "Generate");
  const banner = el("div", { class: "banner", role: "alert" });
  banner.hidden = true;

  const form = el(
    "div",
    { class: "studio-form" },
    el("label", { class: "field" }, "Profile ", profileSelect),
    el("label", { class: "field" }, "Storyline ", storyline),
    el("div", { class: "field" }, bandIndicator),
    genreBox,
    genreNote,
    requirementNote,
    generateBtn,
    banner,
  );

  // results column
  const results = el("div", { class: "studio-results" });
  const meta = el("div", { class: "result-meta" });
  const actGrid = el("div", { class: "act-grid" });
  const reportBox = el("div", { class: "report-box" });
  const rawBox = el("div", { class: "raw-box" });
  results.append(meta, actGrid, reportBox, rawBox);

  let lastId: string | null = null;
  const ratingPanel = createRatingPanel({ client, itemId: () => lastId });
  ratingPanel.hidden = true;
  results.append(ratingPanel);

  view.append(form, results);
  root.append(view);

  let busy = false;

  function profile(): Profile {
    return profileSelect.value as Profile;
  }

  function selectedGenres(): string[] {
    if (!needsGenres(profile())) return [];
    return Array.from(genreBox.querySelectorAll<HTMLInputElement>("input:checked")).map(
      (box) => box.value,
    );
  }

  function updateBand(): void {
    const reading = readBand(storyline.value, profile());
    const kind = usesLongStoryline(profile()) ? "long" : "short";
    bandIndicator.textContent =
      `${reading.words} words · ${kind} band ${reading.lo}-${reading.hi} · ${reading.position}`;
    bandIndicator.classList.remove("below", "inside", "above");
    bandIndicator.classList.add(reading.position);
  }

  function updateGating(): void {
    const genreTaking = needsGenres(profile());
    for (const box of genreBox.querySelectorAll<HTMLInputElement>("input")) {
      box.disabled = !genreTaking;
    }
    genreBox.classList.toggle("inactive", !genreTaking);
    setNotice(genreNote, genreTaking ? null : "genres apply to the ASG and ALG profiles only");

    const blockers = plotBlockers({
      storyline: storyline.value,
      longStoryline: storyline.value,
      genres: selectedGenres(),
      profile: profile(),
      busy,
    });
    generateBtn.disabled = blockers.length > 0;
    setNotice(requirementNote, blockers.length > 0 ? blockers.join("; ") : null, "warn");
  }

  function renderResult(result: PlotGeneration): void {
    clear(meta);
    meta.append(
      el(
        "div",
        { class: "meta-line" },
        `profile ${result.profile} · backend ${result.raw.backend_id} · ` +
          `${formatMs(result.raw.elapsed_ms)}${result.raw.truncated ? " · truncated" : ""}`,
      ),
    );
    clear(actGrid);
    if (result.acts) {
      for (const [key, label] of ACT_LABELS) {
        actGrid.append(
          el(
            "section",
            { class: "act-panel", "data-act": key },
            el("h3", {}, label),
            el("div", { class: "act-text" }, result.acts[key]),
          ),
        );
      }
    }
    clear(reportBox);
    if (result.report.errors.length > 0) {
      reportBox.append(issueList(result.report.errors, "error"));
    }
    if (result.report.warnings.length > 0) {
      reportBox.append(issueList(result.report.warnings, "warn"));
    }
    clear(rawBox);
    if (!result.acts) {
      const details = el("details", { class: "raw-completion" });
      details.append(el("summary", {}, "raw completion"), el("pre", {}, result.raw.text));
      rawBox.append(details);
    }
    lastId = result.id;
    ratingPanel.hidden = false;
    generateBtn.textContent = "Regenerate";
  }

  async function generate(): Promise<void> {
    const prof = profile();
    // re-check so no invalid request leaves the browser, whatever fired us
    const blocked = plotBlockers({
      storyline: storyline.value,
      longStoryline: storyline.value,
      genres: selectedGenres(),
      profile: prof,
      busy,
    });
    if (blocked.length > 0) {
      updateGating();
      return;
    }
    const body = usesLongStoryline(prof)
      ? { long_storyline: storyline.value, genres: selectedGenres(), profile: prof }
      : { storyline: storyline.value, genres: selectedGenres(), profile: prof };
    busy = true;
    updateGating();
    setNotice(banner, null);
    try {
      const result = await client.generatePlot(body);
      renderResult(result);
    } catch (err) {
      if (err instanceof ApiError) {
        const hint = ERROR_HINTS[err.code];
        setNotice(banner, `${err.code}: ${err.message}${hint ? ` — ${hint}` : ""}`, "error");
      } else {
        setNotice(banner, String(err), "error");
      }
    } finally {
      busy = false;
      updateGating();
    }
  }

  async function loadGenres(): Promise<void> {
    clear(genreBox);
    genreBox.append(el("legend", {}, "Genres"), el("span", { class: "loading" }, "loading genres…"));
    try {
      const names = await client.genres();
      clear(genreBox);
      genreBox.append(el("legend", {}, "Genres"));
      for (const name of names) {
        const box = el("input", { type: "checkbox", value: name });
        box.addEventListener("change", updateGating);
        genreBox.append(el("label", { class: "genre-choice" }, box, name));
      }
    } catch (err) {
      clear(genreBox);
      const retry = el("button", { type: "button", class: "retry-genres" }, "Retry");
      retry.addEventListener("click", () => void loadGenres().then(updateGating));
      genreBox.append(
        el("legend", {}, "Genres"),
        el("span", { class: "error" }, `could not load genres: ${String(err)}`),
        retry,
      );
    }
    updateGating();
  }

  profileSelect.addEventListener("change", () => {
    updateBand();
    updateGating();
  });
  storyline.addEventListener("input", () => {
    updateBand();
    updateGating();
  });
  generateBtn.addEventListener("click", () => void generate());

  updateBand();
  updateGating();
  void loadGenres();
}
