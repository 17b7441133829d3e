"""slrank: rank published systematic reviews by semantic similarity to
draft research questions or a seed abstract, using pre-trained word
embeddings and cosine distance."""

__version__ = "0.1.0"

from .corpus import Corpus, SlrRecord, get, ingest, load, load_annotations, save
from .embeddings import (DocumentVector, EmbeddingModel, ModelRegistry,
                         list_models, load_text_model, lookup,
                         save_text_model, vectorize_document)
from .evaluation import (AnnotatedCorpus, EvaluationReport, ModelEvaluation,
                         evaluate_models, precision_recall_at_k, spearman)
from .pipeline import (LemmaDictionary, PipelineConfig, TokenizedDocument,
                       build_ngrams, extract_keywords, lemmatize, normalize,
                       preprocess, remove_stopwords, tokenize)
from .similarity import (QueryDescriptor, RankedList, SimilarityResult,
                         cosine, distance, rank_by_query,
                         rank_by_research_questions, rank_by_seed_abstract)

__all__ = [
    "__version__",
    "Corpus", "SlrRecord", "get", "ingest", "load", "load_annotations", "save",
    "DocumentVector", "EmbeddingModel", "ModelRegistry", "list_models",
    "load_text_model", "lookup", "save_text_model", "vectorize_document",
    "AnnotatedCorpus", "EvaluationReport", "ModelEvaluation",
    "evaluate_models", "precision_recall_at_k", "spearman",
    "LemmaDictionary", "PipelineConfig", "TokenizedDocument", "build_ngrams",
    "extract_keywords", "lemmatize", "normalize", "preprocess",
    "remove_stopwords", "tokenize",
    "QueryDescriptor", "RankedList", "SimilarityResult", "cosine", "distance",
    "rank_by_query", "rank_by_research_questions", "rank_by_seed_abstract",
]
