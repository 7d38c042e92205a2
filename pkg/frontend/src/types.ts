/** Wire types for the workbench service, one interface per response shape. */

export interface Issue {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export interface ValidationReport {
  ok: boolean;
  errors: Issue[];
  warnings: Issue[];
}

export interface RawResult {
  text: string;
  backend_id: string;
  elapsed_ms: number;
  token_logprobs: number[] | null;
  truncated: boolean;
}

export interface PlotActs {
  one: string;
  two_a: string;
  two_b: string;
  three: string;
}

export interface PlotGeneration {
  id: string;
  created_at: string;
  storyline: string;
  genres: string[];
  profile: string;
  acts: PlotActs | null;
  raw: RawResult;
  report: ValidationReport;
}

export type ElementKind =
  | "slugline"
  | "action"
  | "character_cue"
  | "dialogue"
  | "transition";

export interface SceneElement {
  kind: ElementKind;
  text: string;
  line_span: [number, number];
}

export interface Scene {
  elements: SceneElement[];
  description?: string;
}

export interface SceneGeneration {
  id: string;
  created_at: string;
  description: string;
  scene: Scene | null;
  raw: RawResult;
  report: ValidationReport;
}

export interface RatingScores {
  fluency: number;
  coherence: number;
  relevance: number;
  likability: number;
  creativity: number;
}

export interface RatingReceipt extends RatingScores {
  id: string;
  item_id: string;
  rater_id: string;
}

export interface FeatureStats {
  mean: number;
  median: number;
  q1: number;
  q3: number;
  min: number;
  max: number;
}

export interface LikertSummary {
  n_ratings: number;
  features: Record<string, FeatureStats>;
}

export interface StoredItem {
  id: string;
  kind: string;
  payload: Record<string, unknown>;
  created_at: string;
  schema_version: number;
}

export interface ItemsPage {
  items: StoredItem[];
  next_cursor: string | null;
}

export interface DatasetStats {
  id: string;
  name: string;
  size: number;
  genres: Record<string, number>;
}

export interface Health {
  status: string;
  backend_reachable: boolean;
}
