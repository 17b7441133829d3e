// Planning session state: the editable query, the last response, and an
// append-only history of submitted queries with their top-k doc ids.
// Rank deltas against the previous submission drive the refine loop.

import { GatewayClient } from './api.js';
import type { Aggregation, RankingResponse } from './types.js';

export type QueryMode = 'rq' | 'seed';

export interface QuerySnapshot {
  mode: QueryMode;
  questions: string[];
  seed_abstract: string;
  model: string;
  aggregation: Aggregation;
}

export interface HistoryEntry {
  query: QuerySnapshot;
  top_doc_ids: string[];
  submitted_at: string;
}

export interface PlanningSessionState {
  questions: string[];
  seed_abstract: string;
  selected_model: string;
  aggregation: Aggregation;
  mode: QueryMode;
  last_response: RankingResponse | null;
  history: HistoryEntry[];
}

export type DeltaKind = 'entered' | 'left' | 'moved' | 'unchanged';

export interface RankDelta {
  doc_id: string;
  kind: DeltaKind;
  previous_rank: number | null;
  current_rank: number | null;
}

export function emptyState(): PlanningSessionState {
  return {
    questions: [''],
    seed_abstract: '',
    selected_model: '',
    aggregation: 'concat',
    mode: 'rq',
    last_response: null,
    history: [],
  };
}

/** Rank movements between two top-k doc id lists. */
export function computeDeltas(previous: string[],
                              current: string[]): RankDelta[] {
  const prevRank = new Map(previous.map((d, i) => [d, i + 1]));
  const currRank = new Map(current.map((d, i) => [d, i + 1]));
  const deltas: RankDelta[] = [];
  for (const doc of current) {
    const before = prevRank.get(doc);
    if (before === undefined) {
      deltas.push({ doc_id: doc, kind: 'entered', previous_rank: null,
                    current_rank: currRank.get(doc)! });
    } else if (before === currRank.get(doc)) {
      deltas.push({ doc_id: doc, kind: 'unchanged', previous_rank: before,
                    current_rank: before });
    } else {
      deltas.push({ doc_id: doc, kind: 'moved', previous_rank: before,
                    current_rank: currRank.get(doc)! });
    }
  }
  for (const doc of previous) {
    if (!currRank.has(doc)) {
      deltas.push({ doc_id: doc, kind: 'left',
                    previous_rank: prevRank.get(doc)!, current_rank: null });
    }
  }
  return deltas;
}

export const HISTORY_TOP_K = 10;
const STORAGE_KEY = 'slrank-planning-session';

export class PlanningSession {
  state: PlanningSessionState;
  private inflight: AbortController | null = null;
  private storage: Storage | null;

  constructor(private client: GatewayClient,
              storage: Storage | null = null) {
    this.storage = storage;
    this.state = this.restore() ?? emptyState();
  }

  private restore(): PlanningSessionState | null {
    if (!this.storage) return null;
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) return null;
    try {
      return JSON.parse(raw) as PlanningSessionState;
    } catch {
      return null;
    }
  }

  persist(): void {
    this.storage?.setItem(STORAGE_KEY, JSON.stringify(this.state));
  }

  hasSubmittableQuery(): boolean {
    if (this.state.mode === 'rq') {
      return this.state.questions.some((q) => q.trim() !== '');
    }
    return this.state.seed_abstract.trim() !== '';
  }

  snapshot(): QuerySnapshot {
    return {
      mode: this.state.mode,
      questions: [...this.state.questions],
      seed_abstract: this.state.seed_abstract,
      model: this.state.selected_model,
      aggregation: this.state.aggregation,
    };
  }

  /**
   * Submit the current query.  Only one request is in flight per session:
   * a new submission aborts the active one, so responses always apply in
   * submission order.
   */
  async submitQuery(): Promise<RankingResponse> {
    if (!this.hasSubmittableQuery()) {
      throw new Error('enter at least one question or a seed abstract');
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const model = this.state.selected_model || undefined;
    let response: RankingResponse;
    try {
      if (this.state.mode === 'rq') {
        response = await this.client.similarByResearchQuestions({
          model,
          aggregation: this.state.aggregation,
          questions: this.state.questions.filter((q) => q.trim() !== ''),
        }, controller.signal);
      } else {
        response = await this.client.similarBySeedAbstract({
          model,
          seed: this.state.seed_abstract,
        }, controller.signal);
      }
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
    this.state.last_response = response;
    this.state.history.push({
      query: this.snapshot(),
      top_doc_ids: response.results
        .slice(0, HISTORY_TOP_K)
        .map((r) => r.doc_id),
      submitted_at: new Date().toISOString(),
    });
    this.persist();
    return response;
  }

  /**
   * Re-run the (edited) query and report rank deltas against the previous
   * submission's top-k.  Requires a prior response.
   */
  async refineAndCompare(): Promise<{ response: RankingResponse;
                                      deltas: RankDelta[] }> {
    const history = this.state.history;
    if (history.length === 0) {
      throw new Error('no previous query to compare against');
    }
    const previousTop = history[history.length - 1]!.top_doc_ids;
    const response = await this.submitQuery();
    const currentTop = response.results
      .slice(0, HISTORY_TOP_K)
      .map((r) => r.doc_id);
    return { response, deltas: computeDeltas(previousTop, currentTop) };
  }
}
