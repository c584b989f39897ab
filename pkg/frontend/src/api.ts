/**
 * Typed client for the gaztrack review API.
 *
 * The fetch implementation is injectable so tests can exercise the client
 * without a network. Failed requests raise ApiError carrying the server's
 * error envelope; transport failures raise ApiError with code "network".
 */

import type {
  Annotation,
  ClassCatalog,
  CvReport,
  DatasetStats,
  GatRecord,
  Health,
  IngestResult,
  QueueItem,
  ReviewStatus,
  Suggestion,
  TrainResult,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: Record<string, unknown>;

  constructor(
    code: string,
    message: string,
    status: number,
    detail: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = 'ApiError';
    this.code = code;
    this.status = status;
    this.detail = detail;
  }

  /** True for transport-level failures (server unreachable). */
  get isNetwork(): boolean {
    return this.code === 'network';
  }
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = '', fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  async fetchQueue(status: ReviewStatus = 'pending', limit?: number): Promise<QueueItem[]> {
    const params = new URLSearchParams({ status });
    if (limit !== undefined) params.set('limit', String(limit));
    return this.request<QueueItem[]>('GET', `/api/queue?${params}`);
  }

  async fetchItem(itemId: string): Promise<QueueItem> {
    return this.request<QueueItem>('GET', `/api/queue/${encodeURIComponent(itemId)}`);
  }

  async submitReview(itemId: string, annotation: Annotation): Promise<GatRecord> {
    return this.request<GatRecord>(
      'POST',
      `/api/reviews/${encodeURIComponent(itemId)}`,
      annotation,
    );
  }

  async discardItem(itemId: string): Promise<QueueItem> {
    return this.request<QueueItem>(
      'POST',
      `/api/reviews/${encodeURIComponent(itemId)}/discard`,
    );
  }

  async fetchClasses(): Promise<ClassCatalog> {
    return this.request<ClassCatalog>('GET', '/api/classes');
  }

  async fetchStats(): Promise<DatasetStats> {
    return this.request<DatasetStats>('GET', '/api/stats');
  }

  async fetchHealth(): Promise<Health> {
    return this.request<Health>('GET', '/api/health');
  }

  async fetchSuggestions(topN?: number): Promise<Suggestion[]> {
    const query = topN !== undefined ? `?top_n=${topN}` : '';
    return this.request<Suggestion[]>('GET', `/api/suggestions${query}`);
  }

  async trainModel(): Promise<TrainResult> {
    return this.request<TrainResult>('POST', '/api/train', {});
  }

  async runEvaluation(k?: number, seed?: number): Promise<CvReport> {
    const body: Record<string, number> = {};
    if (k !== undefined) body.k = k;
    if (seed !== undefined) body.seed = seed;
    return this.request<CvReport>('POST', '/api/evaluate', body);
  }

  async ingestDocuments(jsonl: string): Promise<IngestResult> {
    return this.request<IngestResult>('POST', '/api/documents', jsonl);
  }

  /** URL of the annotated-dataset CSV export (used for a download link). */
  exportUrl(): string {
    return `${this.baseUrl}/api/export/gat.csv`;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      if (typeof body === 'string') {
        init.body = body;
        init.headers = { 'Content-Type': 'application/x-ndjson' };
      } else {
        init.body = JSON.stringify(body);
        init.headers = { 'Content-Type': 'application/json' };
      }
    }

    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError('network', `cannot reach server: ${String(err)}`, 0);
    }

    if (!response.ok) {
      throw await this.envelopeError(response);
    }
    return (await response.json()) as T;
  }

  private async envelopeError(response: Response): Promise<ApiError> {
    try {
      const payload = (await response.json()) as {
        code?: string;
        message?: string;
        detail?: Record<string, unknown>;
      };
      return new ApiError(
        payload.code ?? 'http_error',
        payload.message ?? `HTTP ${response.status}`,
        response.status,
        payload.detail ?? {},
      );
    } catch {
      return new ApiError('http_error', `HTTP ${response.status}`, response.status);
    }
  }
}
