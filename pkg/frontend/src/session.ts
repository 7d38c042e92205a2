/** Pure form state rules for the studios.
 *
 * Everything here runs before a request is sent: profile gating, word count
 * bands, and the reasons a submit button stays disabled.  Keeping the rules
 * out of the DOM code makes them directly testable.
 */

export const PROFILES = ["O", "AS", "AL", "ASG", "ALG"] as const;

export type Profile = (typeof PROFILES)[number];

export const PROFILE_BLURBS: Record<Profile, string> = {
  O: "plain plot, short storyline",
  AS: "annotated plot, short storyline",
  AL: "annotated plot, long storyline",
  ASG: "annotated plot, short storyline, genres",
  ALG: "annotated plot, long storyline, genres",
};

// word count bands for the two storyline lengths
export const SHORT_BAND = { lo: 15, hi: 40 } as const;
export const LONG_BAND = { lo: 30, hi: 200 } as const;

export function needsGenres(profile: Profile): boolean {
  return profile === "ASG" || profile === "ALG";
}

export function usesLongStoryline(profile: Profile): boolean {
  return profile === "AL" || profile === "ALG";
}

export function countWords(text: string): number {
  const trimmed = text.trim();
  return trimmed ? trimmed.split(/\s+/).length : 0;
}

export type BandPosition = "below" | "inside" | "above";

export interface BandReading {
  words: number;
  lo: number;
  hi: number;
  position: BandPosition;
}

export function readBand(text: string, profile: Profile): BandReading {
  const band = usesLongStoryline(profile) ? LONG_BAND : SHORT_BAND;
  const words = countWords(text);
  const position: BandPosition = words < band.lo ? "below" : words > band.hi ? "above" : "inside";
  return { words, lo: band.lo, hi: band.hi, position };
}

export interface PlotFormState {
  storyline: string;
  longStoryline: string;
  genres: string[];
  profile: Profile;
  busy: boolean;
}

/** Reasons the plot form cannot submit right now; empty means go. */
export function plotBlockers(state: PlotFormState): string[] {
  const reasons: string[] = [];
  const active = usesLongStoryline(state.profile) ? state.longStoryline : state.storyline;
  if (!active.trim()) {
    reasons.push(usesLongStoryline(state.profile) ? "long storyline is empty" : "storyline is empty");
  }
  if (needsGenres(state.profile) && state.genres.length === 0) {
    reasons.push(`profile ${state.profile} requires at least one genre`);
  }
  if (state.busy) {
    reasons.push("a generation is already running");
  }
  return reasons;
}

export interface SceneFormState {
  description: string;
  busy: boolean;
}

export function sceneBlockers(state: SceneFormState): string[] {
  const reasons: string[] = [];
  if (!state.description.trim()) {
    reasons.push("description is empty");
  }
  if (state.busy) {
    reasons.push("a generation is already running");
  }
  return reasons;
}

export const RATING_FEATURES = [
  "fluency",
  "coherence",
  "relevance",
  "likability",
  "creativity",
] as const;

export type RatingFeature = (typeof RATING_FEATURES)[number];

/** Features still unscored in a partially filled rating form. */
export function missingFeatures(scores: Partial<Record<RatingFeature, number>>): RatingFeature[] {
  return RATING_FEATURES.filter((f) => {
    const v = scores[f];
    return v === undefined || v < 1 || v > 5;
  });
}
