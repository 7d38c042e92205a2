/** Five-point rating form shared by both studios.
 *
 * The form rejects partially filled ratings before any request is made, and
 * after a successful submit it shows the per-feature means returned by the
 * summary endpoint for the rated item.  No number shown here is computed in
 * the browser.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { clear, el, setNotice } from "./dom.js";
import { formatScore } from "./format.js";
import { missingFeatures, RATING_FEATURES, type RatingFeature } from "./session.js";
import type { RatingScores } from "./types.js";

export interface RatingPanelOptions {
  client: WorkbenchClient;
  /** The id of the item the panel rates right now; null disables the form. */
  itemId: () => string | null;
}

let panelSeq = 0;

export function createRatingPanel(options: RatingPanelOptions): HTMLElement {
  const seq = ++panelSeq;
  const root = el("section", { class: "rating-panel" });
  root.append(el("h3", {}, "Rate this result"));

  const raterInput = el("input", {
    type: "text",
    value: "anonymous",
    "aria-label": "rater id",
    class: "rater-id",
  });
  root.append(el("label", { class: "rater-row" }, "Rater ", raterInput));

  const groups = new Map<RatingFeature, HTMLInputElement[]>();
  for (const feature of RATING_FEATURES) {
    const fieldset = el("fieldset", { class: "rating-feature", "data-feature": feature });
    fieldset.append(el("legend", {}, feature));
    const radios: HTMLInputElement[] = [];
    for (const score of [1, 2, 3, 4, 5]) {
      const radio = el("input", {
        type: "radio",
        name: `rating-${seq}-${feature}`,
        value: String(score),
      });
      radios.push(radio);
      fieldset.append(el("label", { class: "score-choice" }, radio, String(score)));
    }
    groups.set(feature, radios);
    root.append(fieldset);
  }

  const note = el("div", { class: "form-note", role: "status" });
  note.hidden = true;
  const submit = el("button", { type: "button", class: "submit-rating" }, "Submit rating");
  const outcome = el("div", { class: "rating-outcome" });
  root.append(note, submit, outcome);

  function selectedScores(): Partial<Record<RatingFeature, number>> {
    const scores: Partial<Record<RatingFeature, number>> = {};
    for (const [feature, radios] of groups) {
      const picked = radios.find((r) => r.checked);
      if (picked) {
        scores[feature] = Number(picked.value);
      }
    }
    return scores;
  }

  async function showSummary(itemId: string): Promise<void> {
    const summary = await options.client.ratingsSummary({ item_id: itemId });
    clear(outcome);
    outcome.append(
      el("div", { class: "summary-count" }, `${summary.n_ratings} rating(s) so far`),
    );
    const list = el("ul", { class: "summary-means" });
    for (const feature of RATING_FEATURES) {
      const stats = summary.features[feature];
      if (!stats) continue;
      const item = el("li", { "data-feature": feature });
      item.append(
        `${feature}: mean `,
        el("span", { class: "mean", "data-feature": feature }, formatScore(stats.mean)),
      );
      list.append(item);
    }
    outcome.append(list);
  }

  submit.addEventListener("click", () => {
    void (async () => {
      const itemId = options.itemId();
      if (!itemId) {
        setNotice(note, "generate something first, then rate it", "warn");
        return;
      }
      const scores = selectedScores();
      const missing = missingFeatures(scores);
      if (missing.length > 0) {
        setNotice(note, `select a score for: ${missing.join(", ")}`, "warn");
        return;
      }
      setNotice(note, null);
      submit.disabled = true;
      try {
        await options.client.submitRating({
          item_id: itemId,
          rater_id: raterInput.value.trim() || "anonymous",
          scores: scores as unknown as RatingScores,
        });
        for (const radios of groups.values()) {
          for (const radio of radios) radio.checked = false;
        }
        await showSummary(itemId);
      } catch (err) {
        if (err instanceof ApiError) {
          setNotice(note, `${err.code}: ${err.message}`, "error");
        } else {
          setNotice(note, String(err), "error");
        }
      } finally {
        submit.disabled = false;
      }
    })();
  });

  return root;
}
