"""Load, validate, and serve immutable pre-trained word-embedding models,
and compose document vectors from n-grams.

Only the whitespace-separated text format is supported (one token plus d
decimal reals per line, optional "count dim" header), matching common
published GloVe-style and word2vec-text exports.  Models are immutable
after load and safe to share across threads.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (DimensionMismatch, EmptyModel, MalformedNumber,
                     NoCoverage, UnknownModel)


@dataclass(frozen=True)
class EmbeddingModel:
    """A named, immutable token -> vector table of fixed dimension."""

    name: str
    dimension: int
    vocabulary: Mapping[str, np.ndarray]
    source_path: str = ""
    duplicate_tokens: int = 0

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not self.vocabulary:
            raise EmptyModel(f"model {self.name!r} has an empty vocabulary")

    def lookup(self, token: str) -> np.ndarray | None:
        return self.vocabulary.get(token)

    def __len__(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class DocumentVector:
    """VSM representation of one document under one model.

    ``vector`` is the arithmetic mean of the per-n-gram vectors that
    matched; ``coverage`` is the fraction of n-grams that matched.
    """

    source_id: str
    model_name: str
    vector: np.ndarray
    matched_ngrams: int
    total_ngrams: int
    coverage: float = field(init=False)

    def __post_init__(self):
        cov = (self.matched_ngrams / self.total_ngrams
               if self.total_ngrams > 0 else 0.0)
        object.__setattr__(self, "coverage", cov)


def _frozen(vec: np.ndarray) -> np.ndarray:
    out = np.asarray(vec, dtype=np.float64)
    out.setflags(write=False)
    return out


_INT_CHARS = frozenset("0123456789")


def _is_plain_int(token: str) -> bool:
    return bool(token) and set(token) <= _INT_CHARS


def load_text_model(path: str, name: str) -> EmbeddingModel:
    """Parse a whitespace-separated embedding text file.

    A first line of exactly two integers is treated as a "count dim" header
    and skipped.  Dimension is inferred from the first data line.  On
    duplicate tokens the last occurrence wins; the number of overwrites is
    recorded on the model.
    """
    vocabulary: dict[str, np.ndarray] = {}
    dimension: int | None = None
    duplicates = 0
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            if line_no == 1 and len(fields) == 2 and all(
                    _is_plain_int(f) for f in fields):
                continue  # count/dim header
            token, components = fields[0], fields[1:]
            if dimension is None:
                dimension = len(components)
                if dimension == 0:
                    raise DimensionMismatch(
                        f"{path}:{line_no}: token {token!r} has no components",
                        line_no=line_no)
            if len(components) != dimension:
                raise DimensionMismatch(
                    f"{path}:{line_no}: expected {dimension} components, "
                    f"got {len(components)}", line_no=line_no)
            try:
                values = [float(c) for c in components]
            except ValueError as exc:
                raise MalformedNumber(f"{path}:{line_no}: {exc}",
                                      line_no=line_no) from None
            if not all(math.isfinite(v) for v in values):
                raise MalformedNumber(
                    f"{path}:{line_no}: non-finite component", line_no=line_no)
            if token in vocabulary:
                duplicates += 1
            vocabulary[token] = _frozen(values)
    if dimension is None:
        raise EmptyModel(f"{path}: no data lines")
    return EmbeddingModel(name=name, dimension=dimension,
                          vocabulary=vocabulary, source_path=path,
                          duplicate_tokens=duplicates)


def save_text_model(model: EmbeddingModel, path: str) -> None:
    """Write the model back out in the text format; floats use repr so a
    reload reproduces every component bit-exactly."""
    with open(path, "w", encoding="utf-8") as handle:
        for token, vec in model.vocabulary.items():
            handle.write(token + " "
                         + " ".join(repr(float(v)) for v in vec) + "\n")


def lookup(model: EmbeddingModel, token: str) -> np.ndarray | None:
    """Exact-match lookup; absence is a value, not an error."""
    return model.lookup(token)


def vectorize_document(model: EmbeddingModel, ngrams: Sequence[str],
                       source_id: str = "") -> DocumentVector:
    """Compose a document vector from its n-grams.

    Per n-gram: (1) look the phrase up with spaces replaced by underscores;
    (2) otherwise average whichever constituent unigrams are in vocabulary;
    (3) otherwise count a miss.  The document vector is the mean of all
    per-n-gram vectors.  Misses are skipped, never zero-filled, and a fully
    uncovered document raises NoCoverage rather than yielding a zero vector.
    """
    parts = []
    matched = 0
    for ngram in ngrams:
        vec = model.lookup(ngram.replace(" ", "_"))
        if vec is None:
            found = [model.lookup(t) for t in ngram.split(" ")]
            found = [v for v in found if v is not None]
            if not found:
                continue
            vec = np.mean(found, axis=0)
        parts.append(vec)
        matched += 1
    if matched == 0:
        raise NoCoverage(
            f"document {source_id!r}: none of {len(ngrams)} n-grams matched "
            f"model {model.name!r}")
    return DocumentVector(source_id=source_id, model_name=model.name,
                          vector=_frozen(np.mean(parts, axis=0)),
                          matched_ngrams=matched, total_ngrams=len(ngrams))


class ModelRegistry:
    """Named collection of loaded models; names are unique."""

    def __init__(self, models: Iterable[EmbeddingModel] = ()):
        self._models: dict[str, EmbeddingModel] = {}
        for model in models:
            self.add(model)

    def add(self, model: EmbeddingModel) -> None:
        if model.name in self._models:
            raise ValueError(f"model name {model.name!r} already registered")
        self._models[model.name] = model

    def get(self, name: str) -> EmbeddingModel:
        try:
            return self._models[name]
        except KeyError:
            raise UnknownModel(f"no model named {name!r}; available: "
                               f"{sorted(self._models)}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._models

    def __len__(self) -> int:
        return len(self._models)

    def names(self) -> list[str]:
        return sorted(self._models)


def list_models(registry: ModelRegistry) -> list[tuple[str, int, int]]:
    """(name, dimension, vocabulary size) summaries in name order."""
    return [(name, registry.get(name).dimension, len(registry.get(name)))
            for name in registry.names()]


MODEL_FILE_SUFFIXES = (".txt", ".vec")


def load_models_dir(directory: str) -> ModelRegistry:
    """Load every *.txt / *.vec file in a directory; the file stem is the
    model name."""
    registry = ModelRegistry()
    for entry in sorted(os.listdir(directory)):
        stem, ext = os.path.splitext(entry)
        if ext in MODEL_FILE_SUFFIXES:
            registry.add(load_text_model(os.path.join(directory, entry), stem))
    return registry


def find_model_file(directory: str, name: str) -> str:
    """Resolve a model name to its file inside a models directory."""
    for ext in MODEL_FILE_SUFFIXES:
        candidate = os.path.join(directory, name + ext)
        if os.path.isfile(candidate):
            return candidate
    raise UnknownModel(f"no model file for {name!r} in {directory}")
