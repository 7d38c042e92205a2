import { beforeEach, describe, expect, it } from "vitest";

import { WorkbenchClient } from "../src/api.js";
import { mountEvaluation } from "../src/evaluation.js";
import { mountPlotStudio } from "../src/plotStudio.js";
import {
  FakeService,
  flush,
  installFetch,
  query,
  setValue,
} from "./helpers.js";

const STORYLINE = Array.from({ length: 20 }, (_, i) => `beat${i}`).join(" ");

type ScoreRow = Record<string, number>;

describe("rating round trip", () => {
  let service: FakeService;
  let root: HTMLElement;

  beforeEach(async () => {
    service = new FakeService();
    installFetch(service);
    document.body.innerHTML = "";
    root = document.createElement("div");
    document.body.append(root);
    mountPlotStudio(root, new WorkbenchClient());
    await flush();
    setValue(query(root, "textarea.storyline"), STORYLINE);
    query<HTMLButtonElement>(root, "button.generate").click();
    await flush();
  });

  function pickScores(scores: ScoreRow): void {
    for (const [feature, score] of Object.entries(scores)) {
      const radio = query<HTMLInputElement>(
        root,
        `.rating-feature[data-feature="${feature}"] input[value="${score}"]`,
      );
      radio.checked = true;
    }
  }

  async function rate(rater: string, scores: ScoreRow): Promise<void> {
    setValue(query(root, "input.rater-id"), rater);
    pickScores(scores);
    query<HTMLButtonElement>(root, "button.submit-rating").click();
    await flush();
  }

  it("rejects a partially scored form before any request", async () => {
    pickScores({ fluency: 3, coherence: 4 });
    query<HTMLButtonElement>(root, "button.submit-rating").click();
    await flush();
    const note = query<HTMLElement>(root, ".rating-panel .form-note");
    expect(note.hidden).toBe(false);
    expect(note.textContent).toContain("select a score for: relevance, likability, creativity");
    expect(service.sent("/api/v1/ratings")).toHaveLength(0);
  });

  it("round trips three ratings into the summary the service reports", async () => {
    const rows: Array<[string, ScoreRow]> = [
      ["r1", { fluency: 3, coherence: 4, relevance: 5, likability: 2, creativity: 2 }],
      ["r2", { fluency: 4, coherence: 4, relevance: 4, likability: 4, creativity: 4 }],
      ["r3", { fluency: 5, coherence: 4, relevance: 3, likability: 3, creativity: 5 }],
    ];
    for (const [rater, scores] of rows) {
      await rate(rater, scores);
    }

    // the service saw exactly the submitted inputs
    const posted = service.sent("/api/v1/ratings");
    expect(posted).toHaveLength(3);
    posted.forEach((call, i) => {
      const [rater, scores] = rows[i]!;
      expect(call.body).toEqual({
        item_id: service.items.keys().next().value,
        rater_id: rater,
        scores,
      });
    });

    // the panel shows the means the summary endpoint returned, which are
    // the means of the submitted scores: 3,4,5 -> 4 and 2,4,5 -> 3.67
    expect(query<HTMLElement>(root, ".rating-panel .summary-count").textContent).toBe(
      "3 rating(s) so far",
    );
    const mean = (feature: string) =>
      query<HTMLElement>(root, `.summary-means li[data-feature="${feature}"] .mean`).textContent;
    expect(mean("fluency")).toBe("4");
    expect(mean("coherence")).toBe("4");
    expect(mean("relevance")).toBe("4");
    expect(mean("likability")).toBe("3");
    expect(mean("creativity")).toBe("3.67");
  });

  it("shows the full summary statistics in the evaluation view", async () => {
    await rate("r1", { fluency: 3, coherence: 4, relevance: 5, likability: 2, creativity: 2 });
    await rate("r2", { fluency: 4, coherence: 4, relevance: 4, likability: 4, creativity: 4 });
    await rate("r3", { fluency: 5, coherence: 4, relevance: 3, likability: 3, creativity: 5 });
    const itemId = service.items.keys().next().value as string;

    const evalRoot = document.createElement("div");
    document.body.append(evalRoot);
    mountEvaluation(evalRoot, new WorkbenchClient());
    setValue(query(evalRoot, "input.item-filter"), itemId);
    query<HTMLButtonElement>(evalRoot, "button.load-summary").click();
    await flush();

    expect(query<HTMLElement>(evalRoot, ".summary-count").textContent).toBe("3 rating(s)");
    const stat = (feature: string, name: string) =>
      query<HTMLElement>(evalRoot, `tr[data-feature="${feature}"] td[data-stat="${name}"]`)
        .textContent;
    // fluency scores 3,4,5: mean 4, median 4, inclusive quartiles 3.5 and 4.5
    expect(stat("fluency", "mean")).toBe("4");
    expect(stat("fluency", "median")).toBe("4");
    expect(stat("fluency", "q1")).toBe("3.5");
    expect(stat("fluency", "q3")).toBe("4.5");
    expect(stat("fluency", "min")).toBe("3");
    expect(stat("fluency", "max")).toBe("5");
    // likability scores 2,4,3: mean 3 with quartiles 2.5 and 3.5
    expect(stat("likability", "mean")).toBe("3");
    expect(stat("likability", "q1")).toBe("2.5");
    expect(stat("likability", "q3")).toBe("3.5");
    // creativity scores 2,4,5: mean 3.67, quartiles 3 and 4.5
    expect(stat("creativity", "mean")).toBe("3.67");
    expect(stat("creativity", "q1")).toBe("3");
    expect(stat("creativity", "q3")).toBe("4.5");
  });

  it("collapses three identical ratings to a degenerate box", async () => {
    const all4 = { fluency: 4, coherence: 4, relevance: 4, likability: 4, creativity: 4 };
    for (const rater of ["r1", "r2", "r3"]) {
      await rate(rater, all4);
    }
    const itemId = service.items.keys().next().value as string;

    const evalRoot = document.createElement("div");
    document.body.append(evalRoot);
    mountEvaluation(evalRoot, new WorkbenchClient());
    setValue(query(evalRoot, "input.item-filter"), itemId);
    query<HTMLButtonElement>(evalRoot, "button.load-summary").click();
    await flush();

    for (const feature of ["fluency", "coherence", "relevance", "likability", "creativity"]) {
      for (const name of ["mean", "median", "q1", "q3", "min", "max"]) {
        expect(
          query<HTMLElement>(evalRoot, `tr[data-feature="${feature}"] td[data-stat="${name}"]`)
            .textContent,
        ).toBe("4");
      }
    }
  });

  it("clears the radios after a successful submit", async () => {
    await rate("r1", { fluency: 3, coherence: 4, relevance: 5, likability: 2, creativity: 2 });
    const checked = root.querySelectorAll(".rating-feature input:checked");
    expect(checked).toHaveLength(0);
  });
});
