/**
 * api.ts — typed client for the trusskit HTTP JSON API.
 *
 * The server is the single source of numerical truth; this client only
 * moves JSON.  Every payload carries a snapshot id which the client
 * remembers; mutations send it back so concurrent edits surface as 409,
 * which toggle() resolves by refreshing and retrying with backoff.
 * Mutations are serialized through an internal queue (one in flight).
 */

export interface TrussVertex {
  id: number;
  x: number;
  y: number;
}

export interface TrussEdge {
  id: number;
  a: number;
  b: number;
  length?: number;
  removed: boolean;
}

export interface TrussDoc {
  version: number;
  vertices: TrussVertex[];
  edges: TrussEdge[];
  faces?: number[][];
}

export interface Analysis {
  v: number;
  e: number;
  rank: number;
  nullity: number;
  c: number;
  maxwell: number;
  is_inf_rigid: boolean;
  is_generic: boolean;
  flex_count: number;
  edge_order: number[];
  tol: number;
  sv_kept: number;
  sv_dropped: number;
  flex_basis: number[][];
}

export interface HistoryEntry {
  step: number;
  edge: number;
  action: 'remove' | 'restore';
  c: number;
  nullity: number;
  is_inf_rigid: boolean;
  recoverable?: boolean;
  c_before?: number;
}

export interface WagonWheel {
  center: number;
  coeffs: Record<string, number>;
}

export interface GenerateRequest {
  shape: string;
  n?: number;
  k?: number;
  holes?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

const TOGGLE_RETRIES = 4;
const BACKOFF_MS = 25;

const sleep = (ms: number) => new Promise<void>(r => setTimeout(r, ms));

export class ApiClient {
  /** last snapshot id any response reported */
  snapshot = 0;

  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    readonly base: string,
    private fetchFn: typeof fetch = (...args) => globalThis.fetch(...args),
  ) {}

  private async call(method: string, path: string, body?: unknown): Promise<any> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { 'Content-Type': 'application/json' };
    }
    const resp = await this.fetchFn(`${this.base}${path}`, init);
    const doc = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, doc.error ?? `HTTP ${resp.status}`);
    }
    if (typeof doc.snapshot === 'number') this.snapshot = doc.snapshot;
    return doc;
  }

  /** mutations run one at a time, in call order */
  private enqueue<T>(job: () => Promise<T>): Promise<T> {
    const run = this.queue.then(job, job);
    this.queue = run.then(() => undefined, () => undefined);
    return run;
  }

  // ── reads ──────────────────────────────────────────────────────────

  async truss(): Promise<TrussDoc> {
    return (await this.call('GET', '/api/truss')).truss;
  }

  async analysis(): Promise<Analysis> {
    return (await this.call('GET', '/api/analysis')).analysis;
  }

  async flexes(): Promise<{ nullity: number; flexes: number[][][] }> {
    const doc = await this.call('GET', '/api/flexes');
    return { nullity: doc.nullity, flexes: doc.flexes };
  }

  async wagonWheels(): Promise<WagonWheel[]> {
    return (await this.call('GET', '/api/wagonwheels')).wheels;
  }

  async history(): Promise<HistoryEntry[]> {
    return (await this.call('GET', '/api/history')).history;
  }

  // ── mutations ──────────────────────────────────────────────────────

  toggle(edge: number): Promise<{ action: string; analysis: Analysis }> {
    return this.enqueue(async () => {
      for (let attempt = 0; ; attempt++) {
        try {
          const doc = await this.call('POST', `/api/edges/${edge}/toggle`, {
            snapshot: this.snapshot,
          });
          return { action: doc.action, analysis: doc.analysis };
        } catch (err) {
          if (!(err instanceof ApiError) || err.status !== 409
              || attempt >= TOGGLE_RETRIES) {
            throw err;
          }
          await sleep(BACKOFF_MS * (attempt + 1));
          await this.call('GET', '/api/analysis');   // refresh snapshot
        }
      }
    });
  }

  generate(req: GenerateRequest): Promise<Analysis> {
    return this.enqueue(async () =>
      (await this.call('POST', '/api/generate', req)).analysis);
  }

  reset(): Promise<Analysis> {
    return this.enqueue(async () =>
      (await this.call('POST', '/api/reset')).analysis);
  }

  putTruss(doc: TrussDoc): Promise<Analysis> {
    return this.enqueue(async () =>
      (await this.call('PUT', '/api/truss', doc)).analysis);
  }
}
