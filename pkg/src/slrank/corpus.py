"""Ingest, validate, curate, and persist SLR records.

The store is a single UTF-8 file of line-delimited JSON: a header object
recording the pipeline configuration and curation timestamp, then one
record per line sorted by doc_id.  Serialization is canonical (stable key
and record order), so saving the same corpus twice yields identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from .errors import (DuplicateId, IoFailure, MalformedRecord, MissingField)
from .pipeline import LemmaDictionary, PipelineConfig, preprocess

CORPUS_FORMAT = "slr-corpus"
CORPUS_VERSION = 1

REQUIRED_KEYS = ("doc_id", "title", "year", "abstract")
OPTIONAL_KEYS = ("authors", "venue", "research_questions",
                 "curated_keywords", "source")
ALL_KEYS = set(REQUIRED_KEYS) | set(OPTIONAL_KEYS)


@dataclass(frozen=True)
class SlrRecord:
    """One published systematic review with its curated keyword n-grams."""

    doc_id: str
    title: str
    year: int
    abstract: str
    authors: tuple[str, ...] = ()
    venue: str | None = None
    research_questions: tuple[str, ...] = ()
    curated_keywords: tuple[str, ...] = ()
    source: str | None = None


@dataclass(frozen=True)
class Corpus:
    """Immutable record collection plus the config its curation used."""

    records: tuple[SlrRecord, ...]
    pipeline_config: PipelineConfig
    curation_timestamp: str
    _by_id: Mapping[str, SlrRecord] = field(init=False, repr=False,
                                            compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.records, key=lambda r: r.doc_id))
        object.__setattr__(self, "records", ordered)
        index = {}
        for record in ordered:
            if record.doc_id in index:
                raise DuplicateId(record.doc_id)
            index[record.doc_id] = record
        object.__setattr__(self, "_by_id", index)

    def __len__(self) -> int:
        return len(self.records)


def get(corpus: Corpus, doc_id: str) -> SlrRecord | None:
    return corpus._by_id.get(doc_id)


def _string_list(raw, line_no: int, key: str) -> tuple[str, ...]:
    if not isinstance(raw, list) or any(not isinstance(x, str) for x in raw):
        raise MalformedRecord(line_no, f"{key} must be a list of strings")
    return tuple(raw)


def _parse_record(raw: dict, line_no: int) -> dict:
    unknown = set(raw) - ALL_KEYS
    if unknown:
        raise MalformedRecord(line_no, f"unexpected keys {sorted(unknown)}")
    for key in REQUIRED_KEYS:
        if key not in raw or raw[key] in ("", None):
            raise MissingField(line_no, key)
    if not isinstance(raw["doc_id"], str):
        raise MalformedRecord(line_no, "doc_id must be a string")
    if not isinstance(raw["title"], str):
        raise MalformedRecord(line_no, "title must be a string")
    if not isinstance(raw["abstract"], str):
        raise MalformedRecord(line_no, "abstract must be a string")
    if not isinstance(raw["year"], int) or isinstance(raw["year"], bool):
        raise MalformedRecord(line_no, "year must be an integer")
    parsed = {
        "doc_id": raw["doc_id"],
        "title": raw["title"],
        "year": raw["year"],
        "abstract": raw["abstract"],
        "authors": _string_list(raw.get("authors", []), line_no, "authors"),
        "venue": raw.get("venue"),
        "research_questions": _string_list(
            raw.get("research_questions", []), line_no, "research_questions"),
        "curated_keywords": _string_list(
            raw.get("curated_keywords", []), line_no, "curated_keywords"),
        "source": raw.get("source"),
    }
    for key in ("venue", "source"):
        if parsed[key] is not None and not isinstance(parsed[key], str):
            raise MalformedRecord(line_no, f"{key} must be a string")
    return parsed


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read().splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def ingest(path: str, pipeline_config: PipelineConfig,
           dictionary: LemmaDictionary) -> Corpus:
    """Read raw line-delimited records, validate them, and curate each by
    attaching the keyword n-grams of its abstract."""
    records = []
    seen = set()
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid record: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise MalformedRecord(line_no, "record must be an object")
        parsed = _parse_record(raw, line_no)
        if parsed["doc_id"] in seen:
            raise DuplicateId(parsed["doc_id"], line_no)
        seen.add(parsed["doc_id"])
        curated = preprocess(parsed["abstract"], parsed["doc_id"],
                             dictionary, pipeline_config)
        parsed["curated_keywords"] = curated.ngrams
        records.append(SlrRecord(**parsed))
    timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Corpus(records=tuple(records), pipeline_config=pipeline_config,
                  curation_timestamp=timestamp)


def _config_to_json(config: PipelineConfig) -> dict:
    return {
        "lowercase": config.lowercase,
        "strip_numbers": config.strip_numbers,
        "ngram_max": config.ngram_max,
        "keyword_mode": config.keyword_mode,
        "stopword_list": sorted(config.stopword_list),
    }


def _config_from_json(raw: dict) -> PipelineConfig:
    return PipelineConfig(
        lowercase=raw["lowercase"],
        strip_numbers=raw["strip_numbers"],
        stopword_list=frozenset(raw["stopword_list"]),
        ngram_max=raw["ngram_max"],
        keyword_mode=raw["keyword_mode"],
    )


def _record_to_json(record: SlrRecord) -> dict:
    return {
        "doc_id": record.doc_id,
        "title": record.title,
        "authors": list(record.authors),
        "year": record.year,
        "venue": record.venue,
        "abstract": record.abstract,
        "research_questions": list(record.research_questions),
        "curated_keywords": list(record.curated_keywords),
        "source": record.source,
    }


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def save(corpus: Corpus, path: str) -> None:
    """Write the corpus canonically: header line, then records by doc_id."""
    header = {
        "format": CORPUS_FORMAT,
        "version": CORPUS_VERSION,
        "curation_timestamp": corpus.curation_timestamp,
        "pipeline_config": _config_to_json(corpus.pipeline_config),
    }
    lines = [_dumps(header)]
    lines += [_dumps(_record_to_json(r)) for r in corpus.records]
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load(path: str) -> Corpus:
    """Read a saved corpus; load(save(c)) is structurally identical to c."""
    lines = _read_lines(path)
    if not lines or not lines[0].strip():
        raise MalformedRecord(1, "missing corpus header")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise MalformedRecord(1, f"invalid header: {exc.msg}") from None
    if (not isinstance(header, dict)
            or header.get("format") != CORPUS_FORMAT
            or header.get("version") != CORPUS_VERSION):
        raise MalformedRecord(1, "not a slr-corpus file")
    try:
        config = _config_from_json(header["pipeline_config"])
        timestamp = header["curation_timestamp"]
    except (KeyError, TypeError) as exc:
        raise MalformedRecord(1, f"incomplete header: {exc}") from None
    records = []
    seen = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid record: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise MalformedRecord(line_no, "record must be an object")
        parsed = _parse_record(raw, line_no)
        if parsed["doc_id"] in seen:
            raise DuplicateId(parsed["doc_id"], line_no)
        seen.add(parsed["doc_id"])
        records.append(SlrRecord(**parsed))
    return Corpus(records=tuple(records), pipeline_config=config,
                  curation_timestamp=timestamp)


ANNOTATION_HEADER = "doc_id,label,rating"


def load_annotations(path: str) -> tuple[dict[str, int], dict[str, float]]:
    """Annotation CSV: required header 'doc_id,label,rating', then
    'doc_id,label[,rating]' rows with label in {0,1} and rating a finite
    real.  Returns (labels, ratings); ratings may cover fewer docs."""
    lines = _read_lines(path)
    if not lines or lines[0].strip() != ANNOTATION_HEADER:
        raise MalformedRecord(1, f"expected header {ANNOTATION_HEADER!r}")
    labels: dict[str, int] = {}
    ratings: dict[str, float] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) not in (2, 3):
            raise MalformedRecord(line_no, "expected doc_id,label[,rating]")
        doc_id = fields[0].strip()
        if not doc_id:
            raise MalformedRecord(line_no, "empty doc_id")
        if doc_id in labels:
            raise DuplicateId(doc_id, line_no)
        if fields[1].strip() not in ("0", "1"):
            raise MalformedRecord(line_no, "label must be 0 or 1")
        labels[doc_id] = int(fields[1])
        if len(fields) == 3 and fields[2].strip():
            try:
                rating = float(fields[2])
            except ValueError:
                raise MalformedRecord(line_no, "rating must be a real") from None
            if not math.isfinite(rating):
                raise MalformedRecord(line_no, "rating must be finite")
            ratings[doc_id] = rating
    return labels, ratings
