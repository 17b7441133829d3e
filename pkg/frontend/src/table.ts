// Results table: one row per ranked document, in response rank order,
// with a distance bar.  Numbers are taken verbatim from the response;
// the UI does no ranking arithmetic.  Clicking a header re-sorts rows by
// that column (a presentation-only reordering of the same data).

import type { RankingResponse, ResultRow, SkippedDoc } from './types.js';
import type { RankDelta } from './session.js';

export type SortKey = 'rank' | 'title' | 'year' | 'distance' | 'coverage';

export const TABLE_COLUMNS: { key: SortKey; label: string }[] = [
  { key: 'rank', label: 'Rank' },
  { key: 'title', label: 'Title' },
  { key: 'year', label: 'Year' },
  { key: 'distance', label: 'Distance' },
  { key: 'coverage', label: 'Coverage' },
];

export function sortRows(rows: ResultRow[], key: SortKey,
                         descending = false): ResultRow[] {
  const sorted = [...rows].sort((a, b) => {
    const va = a[key] ?? '';
    const vb = b[key] ?? '';
    if (va < vb) return -1;
    if (va > vb) return 1;
    return a.rank - b.rank; // stable fallback on the response order
  });
  return descending ? sorted.reverse() : sorted;
}

function deltaBadge(delta: RankDelta | undefined): string {
  if (!delta) return '';
  switch (delta.kind) {
    case 'entered':
      return '<span class="delta entered" title="new in top results">new</span>';
    case 'moved': {
      const up = (delta.previous_rank ?? 0) > (delta.current_rank ?? 0);
      const step = Math.abs((delta.previous_rank ?? 0)
        - (delta.current_rank ?? 0));
      return `<span class="delta moved" title="moved from rank `
        + `${delta.previous_rank}">${up ? '↑' : '↓'}${step}</span>`;
    }
    case 'unchanged':
      return '<span class="delta unchanged" title="same rank">=</span>';
    default:
      return '';
  }
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (c) => ({
    '&': '&amp;', '<': '&lt;', '>': '&gt;', '"': '&quot;', "'": '&#39;',
  }[c] as string));
}

/**
 * Render the ranked results into ``container``.  Rows follow the response
 * rank order unless a sort key is given; distance and coverage cells show
 * the response values unmodified (full precision in the title attribute,
 * as received in the cell).
 */
export function renderResultsTable(
  container: HTMLElement,
  response: RankingResponse,
  options: { sortKey?: SortKey; descending?: boolean;
             deltas?: RankDelta[] } = {},
): void {
  const rows = options.sortKey
    ? sortRows(response.results, options.sortKey, options.descending)
    : response.results;
  const deltaById = new Map(
    (options.deltas ?? []).map((d) => [d.doc_id, d]));

  const head = TABLE_COLUMNS
    .map((c) => `<th data-sort="${c.key}">${c.label}</th>`)
    .join('');
  const body = rows.map((row) => {
    const width = Math.max(0, Math.min(1, row.distance / 2)) * 100;
    const title = row.title !== undefined ? row.title : row.doc_id;
    const year = row.year !== undefined ? String(row.year) : '';
    return `<tr data-doc-id="${escapeHtml(row.doc_id)}">`
      + `<td class="rank">${row.rank}${deltaBadge(deltaById.get(row.doc_id))}</td>`
      + `<td class="title">${escapeHtml(title)}</td>`
      + `<td class="year">${year}</td>`
      + `<td class="distance"><span class="value">${row.distance}</span>`
      + `<span class="bar" style="width:${width.toFixed(2)}%"></span></td>`
      + `<td class="coverage">${row.coverage}</td>`
      + '</tr>';
  }).join('');

  const skipped = response.skipped.length
    ? `<p class="skipped">Skipped: ${response.skipped
      .map((s: SkippedDoc) => `${escapeHtml(s.doc_id)} (${escapeHtml(s.reason)})`)
      .join(', ')}</p>`
    : '';

  container.innerHTML =
    `<table class="results"><thead><tr>${head}</tr></thead>`
    + `<tbody>${body}</tbody></table>${skipped}`;
}

export function renderError(container: HTMLElement, code: string,
                            message: string, hint: string): void {
  container.innerHTML = `<div class="error"><strong>${escapeHtml(code)}
    </strong>: ${escapeHtml(message)}<br><em>${escapeHtml(hint)}</em></div>`;
}
