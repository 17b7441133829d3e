"""Score rankings against human annotations and compare embedding models.

Spearman's rank correlation uses fractional (average) ranks for ties, then
Pearson on the rank lists.  Precision/recall are computed at rank cutoffs;
documents skipped during vectorization count as not retrieved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Corpus
from .embeddings import ModelRegistry
from .errors import (ConstantInput, KOutOfRange, LengthMismatch, NoPositives,
                     SlrankError, TooFew)
from .pipeline import LemmaDictionary, default_lemma_dictionary
from .similarity import (MODE_RESEARCH_QUESTIONS, MODE_SEED_ABSTRACT,
                         RankedList, rank_by_research_questions,
                         rank_by_seed_abstract)

DEFAULT_K_VALUES = (5, 10, 20)


def fractional_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the average of their positions."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho: Pearson correlation of the fractional-rank lists."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise TooFew("need at least two pairs")
    rx = fractional_ranks(x)
    ry = fractional_ranks(y)
    n = len(rx)
    mean_x = math.fsum(rx) / n
    mean_y = math.fsum(ry) / n
    sxy = math.fsum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    sxx = math.fsum((a - mean_x) ** 2 for a in rx)
    syy = math.fsum((b - mean_y) ** 2 for b in ry)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInput("a rank list is constant; rho is undefined")
    rho = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def precision_recall_at_k(ranked: RankedList, labels: Mapping[str, int],
                          k: int) -> tuple[float, float]:
    """Precision and recall over the top k ranked documents.

    The recall denominator counts every positively labeled document,
    including those skipped during vectorization.
    """
    if not 1 <= k <= len(ranked.results):
        raise KOutOfRange(
            f"k={k} outside [1, {len(ranked.results)}]")
    relevant_total = sum(1 for label in labels.values() if label == 1)
    if relevant_total == 0:
        raise NoPositives("no positively labeled documents")
    relevant_top = sum(1 for r in ranked.results[:k]
                       if labels.get(r.doc_id, 0) == 1)
    return relevant_top / k, relevant_top / relevant_total


@dataclass(frozen=True)
class AnnotatedCorpus:
    """Corpus plus human judgments: binary labels, optional graded ratings."""

    corpus: Corpus
    labels: Mapping[str, int]
    ratings: Mapping[str, float] | None = None

    def __post_init__(self):
        known = {record.doc_id for record in self.corpus.records}
        stray = set(self.labels) - known
        if stray:
            raise ValueError(f"labeled doc_ids not in corpus: {sorted(stray)}")
        if self.ratings and not set(self.ratings) <= set(self.labels):
            raise ValueError("ratings must be a subset of labeled doc_ids")


@dataclass(frozen=True)
class ModelEvaluation:
    """One model's row: rho is None when undefined; error is set when the
    whole model failed and the metric fields are empty."""

    model_name: str
    spearman_rho: float | None
    precision_at_k: Mapping[int, float]
    recall_at_k: Mapping[int, float]
    n_scored: int
    n_skipped: int
    error: str | None = None


@dataclass(frozen=True)
class EvaluationReport:
    mode: str
    per_model: tuple[ModelEvaluation, ...]
    k_values: tuple[int, ...]


def _evaluate_one(annotated: AnnotatedCorpus, model, mode: str,
                  query_inputs, k_values: Sequence[int],
                  dictionary: LemmaDictionary,
                  aggregation: str) -> ModelEvaluation:
    config = annotated.corpus.pipeline_config
    if mode == MODE_RESEARCH_QUESTIONS:
        ranked = rank_by_research_questions(
            list(query_inputs), annotated.corpus, model, dictionary, config,
            aggregation=aggregation)
    elif mode == MODE_SEED_ABSTRACT:
        ranked = rank_by_seed_abstract(
            str(query_inputs), annotated.corpus, model, dictionary, config)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    target: Mapping[str, float] = (
        annotated.ratings if annotated.ratings else annotated.labels)
    pairs = [(r.similarity, float(target[r.doc_id]))
             for r in ranked.results if r.doc_id in target]
    try:
        rho = spearman([p[0] for p in pairs], [p[1] for p in pairs])
    except (TooFew, ConstantInput):
        rho = None

    precision = {}
    recall = {}
    for k in k_values:
        try:
            p, r = precision_recall_at_k(ranked, annotated.labels, k)
        except KOutOfRange:
            continue
        precision[k] = p
        recall[k] = r
    return ModelEvaluation(model_name=model.name, spearman_rho=rho,
                           precision_at_k=precision, recall_at_k=recall,
                           n_scored=len(ranked.results),
                           n_skipped=len(ranked.skipped_docs))


def evaluate_models(annotated: AnnotatedCorpus, registry: ModelRegistry,
                    mode: str, query_inputs,
                    k_values: Sequence[int] = DEFAULT_K_VALUES,
                    dictionary: LemmaDictionary | None = None,
                    aggregation: str = "concat") -> EvaluationReport:
    """Rank and score the annotated corpus under every registered model.

    Rows come back in model-name order; a model that fails yields an error
    row instead of aborting the comparison.  Spearman compares similarity
    scores to graded ratings when present, else to the binary labels.
    """
    if len(registry) == 0:
        raise ValueError("registry holds no models")
    dictionary = dictionary or default_lemma_dictionary()
    rows = []
    for name in registry.names():
        model = registry.get(name)
        try:
            rows.append(_evaluate_one(annotated, model, mode, query_inputs,
                                      k_values, dictionary, aggregation))
        except SlrankError as exc:
            rows.append(ModelEvaluation(
                model_name=name, spearman_rho=None, precision_at_k={},
                recall_at_k={}, n_scored=0, n_skipped=0,
                error=f"{type(exc).__name__}: {exc}"))
    return EvaluationReport(mode=mode, per_model=tuple(rows),
                            k_values=tuple(k_values))


def render_report(report: EvaluationReport) -> str:
    """Canonical line-delimited JSON rendering of a report."""
    header = {
        "format": "slr-eval-report",
        "version": 1,
        "mode": report.mode,
        "k_values": list(report.k_values),
    }
    lines = [json.dumps(header, ensure_ascii=False, separators=(",", ":"))]
    for row in report.per_model:
        payload = {
            "model": row.model_name,
            "spearman_rho": row.spearman_rho,
            "precision_at_k": {str(k): row.precision_at_k[k]
                               for k in sorted(row.precision_at_k)},
            "recall_at_k": {str(k): row.recall_at_k[k]
                            for k in sorted(row.recall_at_k)},
            "n_scored": row.n_scored,
            "n_skipped": row.n_skipped,
            "error": row.error,
        }
        lines.append(json.dumps(payload, ensure_ascii=False,
                                separators=(",", ":")))
    return "\n".join(lines) + "\n"


def render_table(report: EvaluationReport) -> str:
    """Aligned plain-text table for terminals."""
    ks = list(report.k_values)
    headers = (["model", "rho"]
               + [f"P@{k}" for k in ks] + [f"R@{k}" for k in ks]
               + ["scored", "skipped", "error"])
    rows = []
    for row in report.per_model:
        rho = "n/a" if row.spearman_rho is None else f"{row.spearman_rho:.4f}"
        cells = [row.model_name, rho]
        cells += [f"{row.precision_at_k[k]:.3f}" if k in row.precision_at_k
                  else "-" for k in ks]
        cells += [f"{row.recall_at_k[k]:.3f}" if k in row.recall_at_k
                  else "-" for k in ks]
        cells += [str(row.n_scored), str(row.n_skipped), row.error or ""]
        rows.append(cells)
    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) if rows
              else len(headers[i]) for i in range(len(headers))]
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([fmt(headers)] + [fmt(r) for r in rows]) + "\n"
