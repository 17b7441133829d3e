"""HTTP gateway exposing the two similarity services.

Corpus and models load once at startup and are never mutated, so any
number of requests may run concurrently.  Responses are serialized
canonically: identical state and request always produce identical bytes.

Endpoints (all under /v1):
  POST /v1/similarity/research-questions
  POST /v1/similarity/seed-abstract
  GET  /v1/models
  GET  /v1/health
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from . import corpus as corpus_store
from .embeddings import ModelRegistry, list_models, load_text_model
from .errors import (EmptyQuery, NoCoverage, SlrankError, UnknownModel)
from .pipeline import (LemmaDictionary, PipelineConfig,
                       default_lemma_dictionary, default_stopwords,
                       load_stopwords, preprocess)
from .similarity import (AGGREGATIONS, RankedList, rank_by_research_questions,
                         rank_by_seed_abstract)

DEFAULT_REQUEST_SIZE_LIMIT = 1_048_576


class ServiceStartupError(Exception):
    """A startup resource failed to load; the message names it."""


@dataclass(frozen=True)
class ServiceConfig:
    listen_address: str
    port: int
    corpus_path: str
    model_paths: tuple[tuple[str, str], ...]
    default_model: str
    pipeline_config_path: str | None = None
    request_size_limit: int = DEFAULT_REQUEST_SIZE_LIMIT

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port must be in [1, 65535], got {self.port}")
        names = [name for name, _ in self.model_paths]
        if len(names) != len(set(names)):
            raise ValueError("model names must be unique")
        if self.default_model not in names:
            raise ValueError(
                f"default_model {self.default_model!r} not among {names}")
        if self.request_size_limit < 1:
            raise ValueError("request_size_limit must be positive")


def load_service_config(path: str) -> ServiceConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ServiceStartupError(f"service config {path}: {exc}") from exc
    try:
        return ServiceConfig(
            listen_address=raw.get("listen_address", "127.0.0.1"),
            port=raw.get("port", 8000),
            corpus_path=raw["corpus_path"],
            model_paths=tuple((m["name"], m["path"]) for m in raw["models"]),
            default_model=raw["default_model"],
            pipeline_config_path=raw.get("pipeline_config_path"),
            request_size_limit=raw.get("request_size_limit",
                                       DEFAULT_REQUEST_SIZE_LIMIT),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ServiceStartupError(f"service config {path}: {exc}") from exc


def load_pipeline_config(path: str) -> PipelineConfig:
    """Pipeline config JSON: lowercase, strip_numbers, ngram_max,
    keyword_mode, optional stopword_file."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    stopword_file = raw.get("stopword_file")
    stopwords = (load_stopwords(stopword_file) if stopword_file
                 else default_stopwords())
    return PipelineConfig(
        lowercase=raw.get("lowercase", True),
        strip_numbers=raw.get("strip_numbers", True),
        stopword_list=stopwords,
        ngram_max=raw.get("ngram_max", 2),
        keyword_mode=raw.get("keyword_mode", "pos_filtered"),
    )


@dataclass(frozen=True)
class ServiceState:
    """Everything a request needs, loaded once and shared read-only."""

    corpus: corpus_store.Corpus
    registry: ModelRegistry
    dictionary: LemmaDictionary
    pipeline_config: PipelineConfig
    default_model: str
    request_size_limit: int = DEFAULT_REQUEST_SIZE_LIMIT


def load_state(config: ServiceConfig) -> ServiceState:
    """Load corpus and models; abort with a diagnostic naming the failing
    resource."""
    try:
        corpus = corpus_store.load(config.corpus_path)
    except SlrankError as exc:
        raise ServiceStartupError(
            f"corpus {config.corpus_path}: {exc}") from exc
    if len(corpus) == 0:
        raise ServiceStartupError(f"corpus {config.corpus_path}: empty")
    registry = ModelRegistry()
    for name, path in config.model_paths:
        try:
            registry.add(load_text_model(path, name))
        except (SlrankError, OSError) as exc:
            raise ServiceStartupError(f"model {name} ({path}): {exc}") from exc
    if config.pipeline_config_path:
        try:
            pipeline_config = load_pipeline_config(config.pipeline_config_path)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise ServiceStartupError(
                f"pipeline config {config.pipeline_config_path}: {exc}"
            ) from exc
    else:
        pipeline_config = corpus.pipeline_config
    return ServiceState(corpus=corpus, registry=registry,
                        dictionary=default_lemma_dictionary(),
                        pipeline_config=pipeline_config,
                        default_model=config.default_model,
                        request_size_limit=config.request_size_limit)


class _RequestError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 detail: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _json_response(payload, status: int = 200) -> Response:
    body = json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
    return Response(content=body, status_code=status,
                    media_type="application/json")


def _error_response(status: int, code: str, message: str,
                    detail: str | None = None) -> Response:
    payload = {"code": code, "message": message}
    if detail is not None:
        payload["detail"] = detail
    return _json_response(payload, status)


def _ranking_payload(state: ServiceState, ranked: RankedList,
                     model_name: str, mode: str,
                     inline: bool) -> dict:
    results = []
    for r in ranked.results:
        row = {
            "doc_id": r.doc_id,
            "similarity": r.similarity,
            "distance": r.distance,
            "rank": r.rank,
            "coverage": r.coverage,
        }
        if not inline:
            record = corpus_store.get(state.corpus, r.doc_id)
            if record is not None:
                row["title"] = record.title
                row["year"] = record.year
        results.append(row)
    return {
        "model": model_name,
        "mode": mode,
        "results": results,
        "skipped": [{"doc_id": doc_id, "reason": reason}
                    for doc_id, reason in ranked.skipped_docs],
    }


def _resolve_model(state: ServiceState, body: dict):
    name = body.get("model", state.default_model)
    if not isinstance(name, str):
        raise _RequestError(400, "MalformedRequest", "model must be a string")
    try:
        return state.registry.get(name)
    except UnknownModel as exc:
        raise _RequestError(404, "UnknownModel", str(exc)) from None


def _resolve_docs(state: ServiceState, body: dict):
    """Inline abstracts if given, else the loaded corpus.  Returns
    (docs, inline) where docs feed the ranking functions."""
    abstracts = body.get("abstracts")
    if abstracts is None:
        return state.corpus, False
    if not isinstance(abstracts, list) or not abstracts:
        raise _RequestError(400, "MalformedRequest",
                            "abstracts must be a non-empty list")
    docs = []
    seen = set()
    for item in abstracts:
        if (not isinstance(item, dict)
                or not isinstance(item.get("doc_id"), str)
                or not item["doc_id"]
                or not isinstance(item.get("abstract"), str)
                or not item["abstract"]):
            raise _RequestError(
                400, "MalformedRequest",
                "each abstract needs a doc_id and an abstract string")
        if item["doc_id"] in seen:
            raise _RequestError(400, "MalformedRequest",
                                f"duplicate doc_id {item['doc_id']!r}")
        seen.add(item["doc_id"])
        doc = preprocess(item["abstract"], item["doc_id"],
                         state.dictionary, state.pipeline_config)
        docs.append((item["doc_id"], doc.ngrams))
    return docs, True


async def _read_body(request: Request, state: ServiceState) -> dict:
    length = request.headers.get("content-length")
    if length and length.isdigit() and int(length) > state.request_size_limit:
        raise _RequestError(413, "MalformedRequest",
                            f"request body exceeds "
                            f"{state.request_size_limit} bytes")
    raw = await request.body()
    if len(raw) > state.request_size_limit:
        raise _RequestError(413, "MalformedRequest",
                            f"request body exceeds "
                            f"{state.request_size_limit} bytes")
    try:
        body = json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise _RequestError(400, "MalformedRequest",
                            "body is not valid JSON") from None
    if not isinstance(body, dict):
        raise _RequestError(400, "MalformedRequest",
                            "body must be a JSON object")
    return body


def build_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="slrank", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(_RequestError)
    async def handle_request_error(_, exc: _RequestError):
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    @app.get("/v1/health")
    async def health():
        return _json_response({
            "status": "ok",
            "corpus_size": len(state.corpus),
            "models": state.registry.names(),
        })

    @app.get("/v1/models")
    async def models():
        return _json_response([
            {"name": name, "dimension": dim, "vocab_size": size}
            for name, dim, size in list_models(state.registry)
        ])

    @app.post("/v1/similarity/research-questions")
    async def research_questions(request: Request):
        body = await _read_body(request, state)
        model = _resolve_model(state, body)
        questions = body.get("questions")
        if (not isinstance(questions, list)
                or any(not isinstance(q, str) for q in questions)):
            raise _RequestError(400, "MalformedRequest",
                                "questions must be a list of strings")
        aggregation = body.get("aggregation", "concat")
        if aggregation not in AGGREGATIONS:
            raise _RequestError(400, "MalformedRequest",
                                f"aggregation must be one of {AGGREGATIONS}")
        docs, inline = _resolve_docs(state, body)
        try:
            ranked = rank_by_research_questions(
                questions, docs, model, state.dictionary,
                state.pipeline_config, aggregation=aggregation)
        except EmptyQuery as exc:
            raise _RequestError(400, "EmptyQuery", str(exc)) from None
        except NoCoverage as exc:
            raise _RequestError(422, "NoCoverage", str(exc)) from None
        return _json_response(_ranking_payload(
            state, ranked, model.name, "research_questions", inline))

    @app.post("/v1/similarity/seed-abstract")
    async def seed_abstract(request: Request):
        body = await _read_body(request, state)
        model = _resolve_model(state, body)
        seed = body.get("seed")
        if seed is not None and not isinstance(seed, str):
            raise _RequestError(400, "MalformedRequest",
                                "seed must be a string")
        docs, inline = _resolve_docs(state, body)
        try:
            ranked = rank_by_seed_abstract(
                seed or "", docs, model, state.dictionary,
                state.pipeline_config)
        except EmptyQuery as exc:
            raise _RequestError(400, "EmptyQuery", str(exc)) from None
        except NoCoverage as exc:
            raise _RequestError(422, "NoCoverage", str(exc)) from None
        return _json_response(_ranking_payload(
            state, ranked, model.name, "seed_abstract", inline))

    return app


def serve(config: ServiceConfig) -> None:
    """Load state, then serve until interrupted."""
    import uvicorn

    state = load_state(config)
    app = build_app(state)
    uvicorn.run(app, host=config.listen_address, port=config.port,
                log_level="info")
