// Wire types for the /v1 gateway API.

export type Aggregation = 'concat' | 'max_per_question';

export interface ResultRow {
  doc_id: string;
  similarity: number;
  distance: number;
  rank: number;
  coverage: number;
  // present only for documents served from the loaded corpus
  title?: string;
  year?: number;
}

export interface SkippedDoc {
  doc_id: string;
  reason: string;
}

export interface RankingResponse {
  model: string;
  mode: 'research_questions' | 'seed_abstract';
  results: ResultRow[];
  skipped: SkippedDoc[];
}

export interface ModelSummary {
  name: string;
  dimension: number;
  vocab_size: number;
}

export interface HealthResponse {
  status: string;
  corpus_size: number;
  models: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: string;
}

export interface ResearchQuestionsRequest {
  model?: string;
  aggregation?: Aggregation;
  questions: string[];
  abstracts?: { doc_id: string; abstract: string }[];
}

export interface SeedAbstractRequest {
  model?: string;
  seed: string;
  abstracts?: { doc_id: string; abstract: string }[];
}
