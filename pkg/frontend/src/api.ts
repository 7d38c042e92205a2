/** Typed fetch client for the /api/v1 surface.
 *
 * The only configuration is the service base URL.  Every method resolves to
 * the parsed response body or rejects with an ApiError carrying the service
 * error envelope, so views can show the code and message verbatim.
 */

import type {
  DatasetStats,
  Health,
  ItemsPage,
  LikertSummary,
  PlotGeneration,
  RatingReceipt,
  RatingScores,
  SceneGeneration,
  StoredItem,
} from "./types.js";

const API_PREFIX = "/api/v1";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: Record<string, unknown>;

  constructor(status: number, code: string, message: string, detail: Record<string, unknown> = {}) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export interface PlotRequest {
  storyline?: string;
  long_storyline?: string;
  genres: string[];
  profile: string;
}

export interface SceneRequest {
  description: string;
}

export interface RatingRequest {
  item_id: string;
  rater_id: string;
  scores: RatingScores;
}

export interface SummaryFilter {
  kind?: string;
  item_id?: string;
}

async function toApiError(response: Response): Promise<ApiError> {
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON body, fall through to the generic error below
  }
  if (body && typeof body === "object" && "error" in body) {
    const env = (body as { error: { code?: string; message?: string; detail?: Record<string, unknown> } }).error;
    return new ApiError(
      response.status,
      env.code ?? "Error",
      env.message ?? response.statusText,
      env.detail ?? {},
    );
  }
  return new ApiError(response.status, "Error", `${response.status} ${response.statusText}`);
}

export class WorkbenchClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await fetch(this.baseUrl + API_PREFIX + path, init);
    } catch (err) {
      throw new ApiError(0, "Unreachable", `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }

  async health(): Promise<Health> {
    return this.request<Health>("GET", "/healthz");
  }

  async genres(): Promise<string[]> {
    const body = await this.request<{ genres: string[] }>("GET", "/genres");
    return body.genres;
  }

  async generatePlot(req: PlotRequest): Promise<PlotGeneration> {
    return this.request<PlotGeneration>("POST", "/plots/generate", req);
  }

  async generateScene(req: SceneRequest): Promise<SceneGeneration> {
    return this.request<SceneGeneration>("POST", "/scenes/generate", req);
  }

  async submitRating(req: RatingRequest): Promise<RatingReceipt> {
    return this.request<RatingReceipt>("POST", "/ratings", req);
  }

  async ratingsSummary(filter: SummaryFilter = {}): Promise<LikertSummary> {
    const params = new URLSearchParams();
    if (filter.kind) params.set("kind", filter.kind);
    if (filter.item_id) params.set("item_id", filter.item_id);
    const query = params.toString();
    const body = await this.request<{ summary: LikertSummary }>(
      "GET",
      "/ratings/summary" + (query ? `?${query}` : ""),
    );
    return body.summary;
  }

  async getItem(itemId: string): Promise<StoredItem> {
    return this.request<StoredItem>("GET", `/items/${encodeURIComponent(itemId)}`);
  }

  async listItems(kind: string, cursor?: string, limit = 50): Promise<ItemsPage> {
    const params = new URLSearchParams({ kind, limit: String(limit) });
    if (cursor) params.set("cursor", cursor);
    return this.request<ItemsPage>("GET", `/items?${params.toString()}`);
  }

  async datasetStats(datasetId: string): Promise<DatasetStats> {
    return this.request<DatasetStats>("GET", `/datasets/${encodeURIComponent(datasetId)}/stats`);
  }
}
