// @vitest-environment happy-dom
//
// UI contract: the table renders rows in response rank order and shows
// distance values exactly as received; it never recomputes numbers.

import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { renderError, renderResultsTable, sortRows } from '../src/table.js';
import type { RankingResponse } from '../src/types.js';

const FIXTURES = join(__dirname, 'fixtures');

function loadResponse(name: string): RankingResponse {
  return JSON.parse(readFileSync(join(FIXTURES, name), 'utf-8'));
}

function raw(name: string): string {
  return readFileSync(join(FIXTURES, name), 'utf-8');
}

describe('results table contract', () => {
  const response = loadResponse('rq_response.json');

  it('renders rows in response rank order', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    const ids = [...container.querySelectorAll('tbody tr')]
      .map((tr) => tr.getAttribute('data-doc-id'));
    expect(ids).toEqual(response.results.map((r) => r.doc_id));
    const ranks = [...container.querySelectorAll('td.rank')]
      .map((td) => Number(td.textContent));
    expect(ranks).toEqual(response.results.map((r) => r.rank));
  });

  it('displays distance values unmodified', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    const shown = [...container.querySelectorAll('td.distance .value')]
      .map((el) => el.textContent);
    expect(shown).toEqual(response.results.map((r) => String(r.distance)));
    // the rendered strings parse back to the exact response floats, and
    // those floats appear verbatim in the recorded wire bytes
    const wire = raw('rq_response.json');
    for (const text of shown) {
      expect(wire).toContain(`"distance":${text}`);
      expect(String(Number(text))).toBe(text);
    }
  });

  it('displays coverage values unmodified', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    const shown = [...container.querySelectorAll('td.coverage')]
      .map((el) => el.textContent);
    expect(shown).toEqual(response.results.map((r) => String(r.coverage)));
  });

  it('shows title and year from the response', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    const firstTitle = container.querySelector('td.title')!.textContent;
    expect(firstTitle).toBe(response.results[0]!.title);
  });

  it('lists skipped documents with reasons', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    expect(container.querySelector('.skipped')!.textContent)
      .toContain('d10 (no_coverage)');
  });

  it('distance bars scale by distance/2 of the response value', () => {
    const container = document.createElement('div');
    renderResultsTable(container, response);
    const widths = [...container.querySelectorAll('td.distance .bar')]
      .map((el) => (el as HTMLElement).style.width);
    response.results.forEach((r, i) => {
      expect(widths[i]).toBe(`${((r.distance / 2) * 100).toFixed(2)}%`);
    });
  });

  it('renders the seed-abstract fixture the same way', () => {
    const seed = loadResponse('seed_response.json');
    const container = document.createElement('div');
    renderResultsTable(container, seed);
    const ids = [...container.querySelectorAll('tbody tr')]
      .map((tr) => tr.getAttribute('data-doc-id'));
    expect(ids).toEqual(seed.results.map((r) => r.doc_id));
  });
});

describe('presentation-only sorting', () => {
  const response = loadResponse('rq_response.json');

  it('sorting by year reorders without changing values', () => {
    const sorted = sortRows(response.results, 'year');
    const years = sorted.map((r) => r.year ?? 0);
    expect([...years].sort((a, b) => a - b)).toEqual(years);
    expect(new Set(sorted.map((r) => r.doc_id)))
      .toEqual(new Set(response.results.map((r) => r.doc_id)));
  });

  it('sorting by rank restores response order', () => {
    const shuffled = [...response.results].reverse();
    expect(sortRows(shuffled, 'rank').map((r) => r.doc_id))
      .toEqual(response.results.map((r) => r.doc_id));
  });
});

describe('error rendering', () => {
  it('surfaces the gateway error code verbatim', () => {
    const error = JSON.parse(raw('error_unknown_model.json'));
    const container = document.createElement('div');
    renderError(container, error.code, error.message, 'hint text');
    expect(container.textContent).toContain('UnknownModel');
    expect(container.textContent).toContain(error.message);
  });
});
