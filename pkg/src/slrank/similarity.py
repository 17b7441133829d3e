"""Cosine-distance ranking of a vectorized corpus against a query.

Distance is 1 - cos(a, b); similarity is clamped to [-1, 1] before the
subtraction so the distance always lands in [0, 2] regardless of
floating-point overshoot.  Ranking output is a deterministic total order:
ties in distance break by ascending doc_id.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .embeddings import DocumentVector, EmbeddingModel, vectorize_document
from .errors import (DimensionMismatch, EmptyCorpus, EmptyQuery, NoCoverage,
                     ZeroVector)
from .pipeline import LemmaDictionary, PipelineConfig, preprocess

AGGREGATIONS = ("concat", "max_per_question")

MODE_RESEARCH_QUESTIONS = "research_questions"
MODE_SEED_ABSTRACT = "seed_abstract"


def cosine(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(
            f"vectors have shapes {a.shape} and {b.shape}")
    norm2_a = float(np.dot(a, a))
    norm2_b = float(np.dot(b, b))
    if norm2_a == 0.0 or norm2_b == 0.0:
        raise ZeroVector("cosine is undefined for a zero vector")
    # one square root of the product loses less precision than two
    value = float(np.dot(a, b)) / math.sqrt(norm2_a * norm2_b)
    return max(-1.0, min(1.0, value))


def distance(a, b) -> float:
    """Cosine distance 1 - cos(a, b), in [0, 2]."""
    return 1.0 - cosine(a, b)


@dataclass(frozen=True)
class SimilarityResult:
    doc_id: str
    similarity: float
    distance: float
    rank: int
    coverage: float
    skipped: bool = False
    reason: str | None = None


@dataclass(frozen=True)
class QueryDescriptor:
    mode: str
    model_name: str
    query_digest: str
    aggregation: str | None = None


@dataclass(frozen=True)
class RankedList:
    query_descriptor: QueryDescriptor | None
    results: tuple[SimilarityResult, ...]
    skipped_docs: tuple[tuple[str, str], ...]


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def rank_by_query(query: DocumentVector,
                  corpus_vectors: Sequence[DocumentVector],
                  skipped: Sequence[tuple[str, str]] = (),
                  descriptor: QueryDescriptor | None = None) -> RankedList:
    """Score every corpus vector against the query and sort by
    (distance, doc_id) ascending.  Documents that failed vectorization
    arrive pre-flagged in ``skipped`` and are reported, not dropped."""
    if not corpus_vectors and not skipped:
        raise EmptyCorpus("no documents to rank")
    if float(np.dot(query.vector, query.vector)) == 0.0:
        raise ZeroVector("query vector has zero norm")
    scored = []
    for doc in corpus_vectors:
        if doc.vector.shape != query.vector.shape:
            raise DimensionMismatch(
                f"document {doc.source_id!r} has dimension "
                f"{doc.vector.shape[0]}, query has {query.vector.shape[0]}")
        sim = cosine(query.vector, doc.vector)
        scored.append((1.0 - sim, doc.source_id, sim, doc.coverage))
    scored.sort(key=lambda item: (item[0], item[1]))
    results = tuple(
        SimilarityResult(doc_id=doc_id, similarity=sim, distance=dist,
                         rank=position, coverage=coverage)
        for position, (dist, doc_id, sim, coverage) in enumerate(scored, 1))
    return RankedList(query_descriptor=descriptor, results=results,
                      skipped_docs=tuple(sorted(skipped)))


def vectorize_corpus(model: EmbeddingModel,
                     docs: Sequence[tuple[str, Sequence[str]]]
                     ) -> tuple[list[DocumentVector], list[tuple[str, str]]]:
    """Vectorize (doc_id, ngrams) pairs, collecting per-document failures
    instead of aborting."""
    vectors: list[DocumentVector] = []
    skipped: list[tuple[str, str]] = []
    for doc_id, ngrams in docs:
        try:
            vectors.append(vectorize_document(model, ngrams, doc_id))
        except NoCoverage:
            skipped.append((doc_id, "no_coverage"))
    return vectors, skipped


def _as_ngram_docs(corpus) -> list[tuple[str, Sequence[str]]]:
    if isinstance(corpus, Corpus):
        return [(r.doc_id, r.curated_keywords) for r in corpus.records]
    return [(doc_id, ngrams) for doc_id, ngrams in corpus]


def rank_by_research_questions(questions: Sequence[str], corpus,
                               model: EmbeddingModel,
                               dictionary: LemmaDictionary,
                               config: PipelineConfig,
                               aggregation: str = "concat") -> RankedList:
    """Rank corpus documents by similarity to draft research questions.

    ``concat`` joins all questions into one query document; with
    ``max_per_question`` each document is scored by its best similarity
    over the individual questions.
    """
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"aggregation must be one of {AGGREGATIONS}, "
                         f"got {aggregation!r}")
    cleaned = [q.strip() for q in questions if q and q.strip()]
    if not cleaned:
        raise EmptyQuery("no non-empty research question supplied")
    descriptor = QueryDescriptor(mode=MODE_RESEARCH_QUESTIONS,
                                 model_name=model.name,
                                 query_digest=_digest("\n".join(cleaned)),
                                 aggregation=aggregation)
    vectors, skipped = vectorize_corpus(model, _as_ngram_docs(corpus))

    if aggregation == "concat":
        doc = preprocess(" ".join(cleaned), "query", dictionary, config)
        query_vector = vectorize_document(model, doc.ngrams, "query")
        return rank_by_query(query_vector, vectors, skipped, descriptor)

    question_vectors = []
    for index, question in enumerate(cleaned, 1):
        doc = preprocess(question, f"question-{index}", dictionary, config)
        try:
            question_vectors.append(
                vectorize_document(model, doc.ngrams, doc.source_id))
        except NoCoverage:
            continue
    if not question_vectors:
        raise NoCoverage("no research question has in-vocabulary terms")
    if not vectors and not skipped:
        raise EmptyCorpus("no documents to rank")
    scored = []
    for doc in vectors:
        best = max(cosine(qv.vector, doc.vector) for qv in question_vectors)
        scored.append((1.0 - best, doc.source_id, best, doc.coverage))
    scored.sort(key=lambda item: (item[0], item[1]))
    results = tuple(
        SimilarityResult(doc_id=doc_id, similarity=sim, distance=dist,
                         rank=position, coverage=coverage)
        for position, (dist, doc_id, sim, coverage) in enumerate(scored, 1))
    return RankedList(query_descriptor=descriptor, results=results,
                      skipped_docs=tuple(sorted(skipped)))


def rank_by_seed_abstract(seed: str, corpus, model: EmbeddingModel,
                          dictionary: LemmaDictionary,
                          config: PipelineConfig) -> RankedList:
    """Rank corpus documents by similarity to a seed abstract."""
    if not seed or not seed.strip():
        raise EmptyQuery("seed abstract is empty")
    seed = seed.strip()
    descriptor = QueryDescriptor(mode=MODE_SEED_ABSTRACT,
                                 model_name=model.name,
                                 query_digest=_digest(seed))
    vectors, skipped = vectorize_corpus(model, _as_ngram_docs(corpus))
    doc = preprocess(seed, "seed", dictionary, config)
    query_vector = vectorize_document(model, doc.ngrams, "seed")
    return rank_by_query(query_vector, vectors, skipped, descriptor)
