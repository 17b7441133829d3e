// Page wiring: query form, model selector, results table, refine loop.

import { ApiError, GatewayClient, hintFor } from './api.js';
import { PlanningSession } from './session.js';
import { renderError, renderResultsTable, SortKey } from './table.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function boot(): void {
  const client = new GatewayClient('');
  const session = new PlanningSession(client, window.localStorage);

  const questionsInput = el<HTMLTextAreaElement>('questions');
  const seedInput = el<HTMLTextAreaElement>('seed');
  const modeSelect = el<HTMLSelectElement>('mode');
  const modelSelect = el<HTMLSelectElement>('model');
  const aggregationSelect = el<HTMLSelectElement>('aggregation');
  const submitButton = el<HTMLButtonElement>('submit');
  const refineButton = el<HTMLButtonElement>('refine');
  const resultsBox = el<HTMLDivElement>('results');
  const statusBox = el<HTMLDivElement>('status');

  questionsInput.value = session.state.questions.join('\n');
  seedInput.value = session.state.seed_abstract;
  modeSelect.value = session.state.mode;
  aggregationSelect.value = session.state.aggregation;

  let currentSort: SortKey | undefined;
  let descending = false;

  client.models().then((models) => {
    modelSelect.innerHTML = models
      .map((m) => `<option value="${m.name}">${m.name} `
        + `(d=${m.dimension}, |V|=${m.vocab_size})</option>`)
      .join('');
    if (session.state.selected_model) {
      modelSelect.value = session.state.selected_model;
    }
  }).catch(() => {
    statusBox.textContent = 'Cannot reach the slrank service.';
  });

  function syncStateFromForm(): void {
    session.state.questions = questionsInput.value.split('\n');
    session.state.seed_abstract = seedInput.value;
    session.state.mode = modeSelect.value === 'seed' ? 'seed' : 'rq';
    session.state.selected_model = modelSelect.value;
    session.state.aggregation =
      aggregationSelect.value === 'max_per_question'
        ? 'max_per_question' : 'concat';
  }

  function showResponse(deltas?: import('./session.js').RankDelta[]): void {
    if (!session.state.last_response) return;
    renderResultsTable(resultsBox, session.state.last_response,
                       { sortKey: currentSort, descending, deltas });
    for (const th of resultsBox.querySelectorAll<HTMLElement>('th')) {
      th.addEventListener('click', () => {
        const key = th.dataset.sort as SortKey;
        descending = currentSort === key ? !descending : false;
        currentSort = key;
        showResponse(deltas);
      });
    }
  }

  function showError(error: unknown): void {
    if (error instanceof ApiError) {
      renderError(resultsBox, error.code, error.message, hintFor(error.code));
    } else if (error instanceof Error && error.name !== 'AbortError') {
      renderError(resultsBox, 'Error', error.message, '');
    }
  }

  submitButton.addEventListener('click', async () => {
    syncStateFromForm();
    statusBox.textContent = 'Searching…';
    try {
      await session.submitQuery();
      currentSort = undefined;
      showResponse();
      statusBox.textContent =
        `${session.state.last_response?.results.length ?? 0} reviews ranked`;
    } catch (error) {
      statusBox.textContent = '';
      showError(error);
    }
  });

  refineButton.addEventListener('click', async () => {
    syncStateFromForm();
    statusBox.textContent = 'Comparing with the previous query…';
    try {
      const { deltas } = await session.refineAndCompare();
      currentSort = undefined;
      showResponse(deltas);
      const moved = deltas.filter((d) => d.kind !== 'unchanged').length;
      statusBox.textContent = `${moved} rank changes vs previous query`;
    } catch (error) {
      statusBox.textContent = '';
      showError(error);
    }
  });
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  boot();
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', boot);
}
