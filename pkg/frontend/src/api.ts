/**
 * Typed client for the writing-assistant JSON API.
 *
 * The fetch implementation is injectable so tests can stub the transport
 * or point at a locally spawned service.
 */

export type SuggestCandidate = {
  text: string;
  verb_before: string | null;
  verb_after: string | null;
  nll: number;
  disc: number;
  combined: number;
  similarity: number;
};

export type SuggestResponse = {
  input: string;
  seed: number;
  candidates: SuggestCandidate[];
  chosen_index: number;
};

export type SuggestRequest = {
  text: string;
  lambda?: number;
  k?: number;
  num_hypotheses?: number;
  seed?: number;
};

export type EnhanceDiff = {
  line_index: number;
  before: string;
  after: string;
  verb_before: string;
  verb_after: string | null;
};

export type EnhanceQuatrain = {
  before: string[];
  after: string[];
  diff: EnhanceDiff[];
};

export type EnhanceResponse = {
  seed: number;
  quatrains: EnhanceQuatrain[];
  dropped_lines: number;
};

export type LiteralizeResponse = {
  pair: {
    literal: string;
    metaphor: string;
    verb_index: number;
    literal_verb: string;
    metaphor_verb: string;
    symbols: string[];
    p_literal: number;
  } | null;
  reason: string | null;
};

export type HealthResponse = {
  status: string;
  adapters: Record<string, string>;
};

export type ApiErrorBody = { code: string; message: string; detail?: string };

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody | null,
  ) {
    super(body ? `${body.code}: ${body.message}` : `HTTP ${status}`);
    this.name = "ServiceError";
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<T> {
    let response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (err) {
      throw new ServiceError(0, {
        code: "unreachable",
        message: `service unreachable: ${String(err)}`,
      });
    }
    const data = (await response.json()) as unknown;
    if (response.status >= 400) {
      throw new ServiceError(response.status, data as ApiErrorBody);
    }
    return data as T;
  }

  suggest(request: SuggestRequest): Promise<SuggestResponse> {
    return this.post<SuggestResponse>("/suggest", request);
  }

  enhance(poem: string, seed?: number): Promise<EnhanceResponse> {
    return this.post<EnhanceResponse>("/enhance", { poem, seed });
  }

  literalize(text: string): Promise<LiteralizeResponse> {
    return this.post<LiteralizeResponse>("/literalize", { text });
  }

  async health(): Promise<HealthResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/health`);
    return (await response.json()) as HealthResponse;
  }
}
