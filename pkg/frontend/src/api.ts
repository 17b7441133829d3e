// Typed client for the gateway's /v1 endpoints.  The UI never computes
// ranking numbers itself; everything displayed comes from these responses.

import type {
  ApiErrorBody,
  HealthResponse,
  ModelSummary,
  RankingResponse,
  ResearchQuestionsRequest,
  SeedAbstractRequest,
} from './types.js';

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail?: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.detail = body.detail;
  }
}

// Human-readable hints shown next to gateway error codes.
export const ERROR_HINTS: Record<string, string> = {
  UnknownModel: 'Pick one of the models listed in the selector.',
  NoCoverage: 'None of the query terms are in the model vocabulary; '
    + 'try different wording.',
  EmptyQuery: 'Enter at least one research question or a seed abstract.',
  MalformedRequest: 'The request was not understood; check the inputs.',
};

export function hintFor(code: string): string {
  return ERROR_HINTS[code] ?? 'Unexpected error; check the service logs.';
}

async function request<T>(base: string, path: string,
                          init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  const text = await response.text();
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    throw new ApiError(response.status, {
      code: 'MalformedRequest',
      message: `non-JSON response (${response.status})`,
    });
  }
  if (!response.ok) {
    throw new ApiError(response.status, parsed as ApiErrorBody);
  }
  return parsed as T;
}

export class GatewayClient {
  constructor(readonly baseUrl: string = '') {}

  health(): Promise<HealthResponse> {
    return request<HealthResponse>(this.baseUrl, '/v1/health');
  }

  models(): Promise<ModelSummary[]> {
    return request<ModelSummary[]>(this.baseUrl, '/v1/models');
  }

  similarByResearchQuestions(body: ResearchQuestionsRequest,
                             signal?: AbortSignal): Promise<RankingResponse> {
    return request<RankingResponse>(
      this.baseUrl, '/v1/similarity/research-questions', {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(body),
        signal,
      });
  }

  similarBySeedAbstract(body: SeedAbstractRequest,
                        signal?: AbortSignal): Promise<RankingResponse> {
    return request<RankingResponse>(
      this.baseUrl, '/v1/similarity/seed-abstract', {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(body),
        signal,
      });
  }
}
