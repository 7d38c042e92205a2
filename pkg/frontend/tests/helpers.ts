/** In-memory stand-in for the workbench service, wired under global fetch.
 *
 * It implements just the routes the UI touches and mirrors the service's
 * response shapes, error envelope, and rating summary semantics (mean,
 * median, inclusive-median quartiles) so round-trip tests compare real
 * numbers, not stubs.
 */

import { vi } from "vitest";
import type {
  DatasetStats,
  FeatureStats,
  LikertSummary,
  PlotActs,
  Scene,
  StoredItem,
  ValidationReport,
} from "../src/types.js";

export const FAKE_GENRES = ["noir", "heist", "slapstick", "ghost story"];

export const CANNED_ACTS: PlotActs = {
  one: "A courier inherits a sealed ledger and a debt she never took on.",
  two_a: "She trades the ledger for passage north and starts to believe the trip can work.",
  two_b: "Her buyers turn on her at the border crossing and call in the debt.",
  three: "She burns the ledger on the bridge and walks home with nothing owed.",
};

export const CANNED_SCENE: Scene = {
  elements: [
    { kind: "slugline", text: "INT. TEAHOUSE - NIGHT", line_span: [1, 2] },
    { kind: "action", text: "Steam fogs the window. MARA counts coins twice.", line_span: [2, 3] },
    { kind: "character_cue", text: "MARA", line_span: [3, 4] },
    { kind: "dialogue", text: "One more cup and we settle this.", line_span: [4, 5] },
    { kind: "transition", text: "CUT TO:", line_span: [5, 6] },
  ],
};

export function okReport(): ValidationReport {
  return { ok: true, errors: [], warnings: [] };
}

export interface RatingRecord {
  item_id: string;
  rater_id: string;
  fluency: number;
  coherence: number;
  relevance: number;
  likability: number;
  creativity: number;
}

const FEATURES = ["fluency", "coherence", "relevance", "likability", "creativity"] as const;

function median(sorted: number[]): number {
  const n = sorted.length;
  return n % 2 === 1 ? sorted[(n - 1) / 2]! : (sorted[n / 2 - 1]! + sorted[n / 2]!) / 2;
}

// inclusive-median halves: odd-length data keeps the median in both halves
function quartiles(sorted: number[]): [number, number] {
  const n = sorted.length;
  if (n === 1) return [sorted[0]!, sorted[0]!];
  const half = Math.floor(n / 2);
  const lower = n % 2 === 0 ? sorted.slice(0, half) : sorted.slice(0, half + 1);
  const upper = sorted.slice(half);
  return [median(lower), median(upper)];
}

export function summarize(ratings: RatingRecord[]): LikertSummary {
  const features: Record<string, FeatureStats> = {};
  for (const feature of FEATURES) {
    const scores = ratings.map((r) => r[feature]).sort((a, b) => a - b);
    const [q1, q3] = quartiles(scores);
    features[feature] = {
      mean: scores.reduce((a, b) => a + b, 0) / scores.length,
      median: median(scores),
      q1,
      q3,
      min: scores[0]!,
      max: scores[scores.length - 1]!,
    };
  }
  return { n_ratings: ratings.length, features };
}

interface Routed {
  status: number;
  body: unknown;
}

export interface RecordedCall {
  method: string;
  path: string;
  query: URLSearchParams;
  body: unknown;
}

function envelope(status: number, code: string, message: string): Routed {
  return { status, body: { error: { code, message, detail: {} } } };
}

export class FakeService {
  readonly calls: RecordedCall[] = [];
  genres: string[] = [...FAKE_GENRES];
  plotActs: PlotActs | null = CANNED_ACTS;
  plotReport: ValidationReport = okReport();
  scene: Scene | null = CANNED_SCENE;
  sceneReport: ValidationReport = okReport();
  truncated = false;
  failPlot: { status: number; code: string; message: string } | null = null;
  failScene: { status: number; code: string; message: string } | null = null;
  gate: Promise<void> | null = null;
  datasetEvents: StoredItem[] = [];
  datasetStatsById = new Map<string, DatasetStats>();
  readonly ratings: RatingRecord[] = [];
  readonly items = new Map<string, StoredItem>();
  private seq = 0;

  nextId(): string {
    this.seq += 1;
    return `ITEM${String(this.seq).padStart(4, "0")}`;
  }

  storeItem(kind: string, payload: Record<string, unknown>): StoredItem {
    const item: StoredItem = {
      id: this.nextId(),
      kind,
      payload,
      created_at: "2026-08-22T12:00:00Z",
      schema_version: 1,
    };
    this.items.set(item.id, item);
    return item;
  }

  /** Calls to one path, for asserting what the UI sent (or never sent). */
  sent(path: string): RecordedCall[] {
    return this.calls.filter((c) => c.path === path);
  }

  async handle(method: string, rawUrl: string, body: unknown): Promise<Routed> {
    const url = new URL(rawUrl, "http://fake.test");
    const path = url.pathname;
    this.calls.push({ method, path, query: url.searchParams, body });

    if (method === "GET" && path === "/api/v1/genres") {
      return { status: 200, body: { genres: this.genres } };
    }

    if (method === "POST" && path === "/api/v1/plots/generate") {
      if (this.gate) await this.gate;
      if (this.failPlot) {
        const fail = this.failPlot;
        this.failPlot = null;
        return envelope(fail.status, fail.code, fail.message);
      }
      const req = body as {
        storyline?: string;
        long_storyline?: string;
        genres?: string[];
        profile?: string;
      };
      const profile = req.profile ?? "AS";
      const genres = req.genres ?? [];
      if ((profile === "ASG" || profile === "ALG") && genres.length === 0) {
        return envelope(422, "GenresRequired", `profile ${profile} requires at least one genre`);
      }
      const storyline = profile === "AL" || profile === "ALG" ? req.long_storyline ?? "" : req.storyline ?? "";
      const payload = {
        storyline,
        genres,
        profile,
        acts: this.plotActs,
        raw: {
          text: "raw completion text",
          backend_id: "fake-backend",
          elapsed_ms: 12.5,
          token_logprobs: null,
          truncated: this.truncated,
        },
        report: this.plotReport,
      };
      const item = this.storeItem("plot_generation", payload);
      return { status: 200, body: { id: item.id, created_at: item.created_at, ...payload } };
    }

    if (method === "POST" && path === "/api/v1/scenes/generate") {
      if (this.gate) await this.gate;
      if (this.failScene) {
        const fail = this.failScene;
        this.failScene = null;
        return envelope(fail.status, fail.code, fail.message);
      }
      const req = body as { description?: string };
      const payload = {
        description: req.description ?? "",
        scene: this.scene,
        raw: {
          text: "raw completion text",
          backend_id: "fake-backend",
          elapsed_ms: 8.25,
          token_logprobs: null,
          truncated: this.truncated,
        },
        report: this.sceneReport,
      };
      const item = this.storeItem("scene_generation", payload);
      return { status: 200, body: { id: item.id, created_at: item.created_at, ...payload } };
    }

    if (method === "POST" && path === "/api/v1/ratings") {
      const req = body as { item_id: string; rater_id?: string; scores: Record<string, number> };
      if (!this.items.has(req.item_id)) {
        return envelope(404, "UnknownId", `no item ${req.item_id}`);
      }
      const record: RatingRecord = {
        item_id: req.item_id,
        rater_id: req.rater_id ?? "anonymous",
        fluency: req.scores["fluency"]!,
        coherence: req.scores["coherence"]!,
        relevance: req.scores["relevance"]!,
        likability: req.scores["likability"]!,
        creativity: req.scores["creativity"]!,
      };
      for (const feature of FEATURES) {
        const v = record[feature];
        if (!(v >= 1 && v <= 5)) {
          return envelope(400, "OutOfRangeScore", `${feature} score ${v} not in 1..5`);
        }
      }
      this.ratings.push(record);
      return { status: 200, body: { id: this.nextId(), ...record } };
    }

    if (method === "GET" && path === "/api/v1/ratings/summary") {
      const itemId = url.searchParams.get("item_id");
      const kind = url.searchParams.get("kind");
      const picked = this.ratings.filter((r) => {
        if (itemId !== null && r.item_id !== itemId) return false;
        if (kind !== null) {
          const rated = this.items.get(r.item_id);
          if (!rated || rated.kind !== kind) return false;
        }
        return true;
      });
      if (picked.length === 0) {
        return envelope(400, "EmptyRatings", "no ratings to summarize");
      }
      return { status: 200, body: { summary: summarize(picked) } };
    }

    if (method === "GET" && path === "/api/v1/items") {
      const kind = url.searchParams.get("kind");
      const limit = Number(url.searchParams.get("limit") ?? "50");
      const cursor = url.searchParams.get("cursor");
      if (kind === "dataset") {
        const start = cursor ? Number(cursor) : 0;
        const page = this.datasetEvents.slice(start, start + limit);
        const next = start + limit < this.datasetEvents.length ? String(start + limit) : null;
        return { status: 200, body: { items: page, next_cursor: next } };
      }
      return { status: 200, body: { items: [], next_cursor: null } };
    }

    const statsMatch = path.match(/^\/api\/v1\/datasets\/([^/]+)\/stats$/);
    if (method === "GET" && statsMatch) {
      const stats = this.datasetStatsById.get(decodeURIComponent(statsMatch[1]!));
      if (!stats) {
        return envelope(404, "UnknownId", `no dataset ${statsMatch[1]!}`);
      }
      return { status: 200, body: stats };
    }

    const itemMatch = path.match(/^\/api\/v1\/items\/([^/]+)$/);
    if (method === "GET" && itemMatch) {
      const item = this.items.get(decodeURIComponent(itemMatch[1]!));
      if (!item) {
        return envelope(404, "UnknownId", `no item ${itemMatch[1]!}`);
      }
      return { status: 200, body: item };
    }

    return envelope(404, "Error", `unrouted ${method} ${path}`);
  }
}

export function installFetch(service: FakeService): void {
  const impl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const rawUrl =
      typeof input === "string" ? input : input instanceof URL ? input.toString() : input.url;
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? (JSON.parse(String(init.body)) as unknown) : undefined;
    const routed = await service.handle(method, rawUrl, body);
    return new Response(JSON.stringify(routed.body), {
      status: routed.status,
      headers: { "content-type": "application/json" },
    });
  });
  globalThis.fetch = impl as unknown as typeof fetch;
}

/** Let pending promise chains and zero-delay timers run to completion. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 10; i++) {
    await Promise.resolve();
  }
  await new Promise((resolve) => setTimeout(resolve, 0));
  for (let i = 0; i < 10; i++) {
    await Promise.resolve();
  }
}

export function setValue(input: HTMLInputElement | HTMLTextAreaElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

export function selectOption(select: HTMLSelectElement, value: string): void {
  select.value = value;
  select.dispatchEvent(new Event("change", { bubbles: true }));
}

export function checkBox(box: HTMLInputElement, checked = true): void {
  box.checked = checked;
  box.dispatchEvent(new Event("change", { bubbles: true }));
}

export function query<T extends Element>(root: ParentNode, selector: string): T {
  const node = root.querySelector<T>(selector);
  if (!node) {
    throw new Error(`no element matches ${selector}`);
  }
  return node;
}

export function queryAll<T extends Element>(root: ParentNode, selector: string): T[] {
  return Array.from(root.querySelectorAll<T>(selector));
}

export function texts(root: ParentNode, selector: string): string[] {
  return queryAll(root, selector).map((node) => node.textContent ?? "");
}
