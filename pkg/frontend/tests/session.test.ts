import { describe, expect, it } from "vitest";

import {
  countWords,
  missingFeatures,
  needsGenres,
  plotBlockers,
  PROFILES,
  readBand,
  sceneBlockers,
  usesLongStoryline,
  type Profile,
} from "../src/session.js";

const BASE = {
  storyline: "a courier inherits a sealed ledger and a debt she never took on at all",
  longStoryline: "a courier inherits a sealed ledger and a debt she never took on at all",
  genres: [] as string[],
  busy: false,
};

describe("profile rules", () => {
  it("orders the five profiles", () => {
    expect(PROFILES).toEqual(["O", "AS", "AL", "ASG", "ALG"]);
  });

  it("marks the genre-taking profiles", () => {
    const taking = PROFILES.filter((p) => needsGenres(p));
    expect(taking).toEqual(["ASG", "ALG"]);
  });

  it("marks the long storyline profiles", () => {
    const long = PROFILES.filter((p) => usesLongStoryline(p));
    expect(long).toEqual(["AL", "ALG"]);
  });
});

describe("plotBlockers", () => {
  it("passes a filled short profile form", () => {
    expect(plotBlockers({ ...BASE, profile: "AS" })).toEqual([]);
    expect(plotBlockers({ ...BASE, profile: "O" })).toEqual([]);
  });

  it("requires a genre for ASG and ALG", () => {
    for (const profile of ["ASG", "ALG"] as Profile[]) {
      const reasons = plotBlockers({ ...BASE, profile });
      expect(reasons).toHaveLength(1);
      expect(reasons[0]).toContain("genre");
      expect(plotBlockers({ ...BASE, profile, genres: ["noir"] })).toEqual([]);
    }
  });

  it("rejects an empty storyline", () => {
    const reasons = plotBlockers({ ...BASE, storyline: "  \n ", profile: "AS" });
    expect(reasons).toHaveLength(1);
    expect(reasons[0]).toContain("storyline is empty");
  });

  it("rejects an empty long storyline for AL", () => {
    const reasons = plotBlockers({ ...BASE, longStoryline: "", profile: "AL" });
    expect(reasons.some((r) => r.includes("long storyline"))).toBe(true);
  });

  it("blocks while a generation is running", () => {
    const reasons = plotBlockers({ ...BASE, profile: "AS", busy: true });
    expect(reasons.some((r) => r.includes("already running"))).toBe(true);
  });
});

describe("sceneBlockers", () => {
  it("requires a description", () => {
    expect(sceneBlockers({ description: "", busy: false })).toHaveLength(1);
    expect(sceneBlockers({ description: "a quiet kitchen", busy: false })).toEqual([]);
  });

  it("blocks while busy", () => {
    const reasons = sceneBlockers({ description: "a quiet kitchen", busy: true });
    expect(reasons.some((r) => r.includes("already running"))).toBe(true);
  });
});

describe("word count bands", () => {
  it("counts whitespace separated words", () => {
    expect(countWords("")).toBe(0);
    expect(countWords("  \n\t ")).toBe(0);
    expect(countWords("one two  three\nfour")).toBe(4);
  });

  it("reads the short band for AS", () => {
    const words = Array.from({ length: 20 }, (_, i) => `w${i}`).join(" ");
    const reading = readBand(words, "AS");
    expect([reading.lo, reading.hi]).toEqual([15, 40]);
    expect(reading.position).toBe("inside");
  });

  it("reads the long band for ALG", () => {
    const reading = readBand("few words here", "ALG");
    expect([reading.lo, reading.hi]).toEqual([30, 200]);
    expect(reading.position).toBe("below");
  });

  it("flags counts above the band", () => {
    const words = Array.from({ length: 41 }, (_, i) => `w${i}`).join(" ");
    expect(readBand(words, "AS").position).toBe("above");
  });
});

describe("missingFeatures", () => {
  it("lists every unscored feature", () => {
    expect(missingFeatures({})).toEqual([
      "fluency",
      "coherence",
      "relevance",
      "likability",
      "creativity",
    ]);
  });

  it("empties once all five are scored", () => {
    expect(
      missingFeatures({ fluency: 3, coherence: 4, relevance: 5, likability: 1, creativity: 2 }),
    ).toEqual([]);
  });

  it("keeps partially filled forms blocked", () => {
    expect(missingFeatures({ fluency: 3, coherence: 4 })).toEqual([
      "relevance",
      "likability",
      "creativity",
    ]);
  });
});
