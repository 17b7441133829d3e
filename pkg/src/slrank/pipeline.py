"""Deterministic text pipeline: normalization, lemmatization, stop-word
removal, keyword selection, and n-gram construction.

Everything here is a pure function of its inputs.  The lemma dictionary and
the pipeline configuration are immutable after construction, so they can be
shared freely across threads.  Instead of an external tagger/lemmatizer the
pipeline ships its own data files (lemma dictionary, suffix rules, POS
lexicon, stop-word list) so the same input always yields the same output.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

KEYWORD_MODES = ("pos_filtered", "all_content_words")

POS_TAGS = frozenset({"N", "V", "ADJ", "ADV", "OTHER"})

# Ordered rewrite rules applied when no dictionary entry matches.  First
# match wins; a rule whose replacement equals its suffix acts as a guard
# that stops later, greedier rules (e.g. "ss" protects "process" from the
# bare "s" rule).  Kept data-like so the bundled dictionary can stay small.
DEFAULT_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    # present participles
    ("nning", "n"), ("tting", "t"), ("pping", "p"), ("gging", "g"),
    ("mming", "m"), ("bbing", "b"), ("rring", "r"),
    ("aining", "ain"), ("oining", "oin"), ("ating", "ate"),
    ("izing", "ize"), ("ising", "ise"), ("uting", "ute"),
    ("ucing", "uce"), ("rging", "rge"), ("asing", "ase"),
    ("osing", "ose"), ("uring", "ure"), ("oring", "ore"),
    ("earing", "ear"), ("aring", "are"), ("iring", "ire"),
    ("ibing", "ibe"), ("oiding", "oid"), ("iding", "ide"),
    ("uding", "ude"), ("aming", "ame"), ("bling", "ble"),
    ("ailing", "ail"), ("iling", "ile"), ("aging", "age"),
    ("ining", "ine"), ("uing", "ue"), ("ving", "ve"), ("ying", "y"),
    ("ing", ""),
    # plurals and third-person forms
    ("sses", "ss"), ("shes", "sh"), ("ches", "ch"), ("xes", "x"),
    ("zes", "ze"), ("ies", "y"), ("ves", "ve"), ("oes", "o"),
    ("ss", "ss"), ("us", "us"), ("is", "is"),
    ("s", ""),
    # past forms
    ("tted", "t"), ("nned", "n"), ("pped", "p"), ("gged", "g"),
    ("mmed", "m"), ("bbed", "b"), ("rred", "r"),
    ("ained", "ain"), ("oined", "oin"), ("ated", "ate"),
    ("ized", "ize"), ("ised", "ise"), ("uted", "ute"),
    ("ured", "ure"), ("ored", "ore"), ("eared", "ear"),
    ("ared", "are"), ("ired", "ire"), ("ibed", "ibe"),
    ("oided", "oid"), ("ided", "ide"), ("uded", "ude"),
    ("amed", "ame"), ("bled", "ble"), ("ailed", "ail"),
    ("iled", "ile"), ("ined", "ine"), ("ued", "ue"),
    ("ssed", "ss"), ("sed", "se"), ("ved", "ve"), ("ced", "ce"),
    ("ged", "ge"), ("zed", "ze"), ("ied", "y"), ("eed", "eed"),
    ("ed", ""),
)

_MIN_LEMMA_LEN = 2
_MAX_REWRITE_PASSES = 8


def _is_normalized_token(token: str) -> bool:
    return (token != ""
            and token == token.lower()
            and all(ch.isalpha() or ch.isdigit() for ch in token))


@dataclass(frozen=True)
class PipelineConfig:
    """Immutable knobs for the whole pipeline.

    ``stopword_list`` entries must already be normalized (lowercase, no
    punctuation); ``ngram_max`` is the longest n-gram produced.
    """

    lowercase: bool = True
    strip_numbers: bool = True
    stopword_list: frozenset[str] = field(
        default_factory=lambda: default_stopwords())
    ngram_max: int = 2
    keyword_mode: str = "pos_filtered"

    def __post_init__(self):
        if self.ngram_max < 1:
            raise ValueError(f"ngram_max must be >= 1, got {self.ngram_max}")
        if self.keyword_mode not in KEYWORD_MODES:
            raise ValueError(f"keyword_mode must be one of {KEYWORD_MODES}, "
                             f"got {self.keyword_mode!r}")
        object.__setattr__(self, "stopword_list", frozenset(self.stopword_list))
        for word in self.stopword_list:
            if not _is_normalized_token(word):
                raise ValueError(f"stopword {word!r} is not normalized")


@dataclass(frozen=True)
class TokenizedDocument:
    """One document after the full pipeline.

    ``lemmas`` is the stop-word-free lemma stream, ``keywords`` the
    POS-filtered subset of it, ``ngrams`` every contiguous 1..n-gram of the
    keywords (tokens joined by single spaces).
    """

    source_id: str
    lemmas: tuple[str, ...]
    keywords: tuple[str, ...]
    ngrams: tuple[str, ...]


class LemmaDictionary:
    """Total, idempotent token -> base-form mapping.

    Explicit entries win over suffix rules.  Rewrites iterate until a fixed
    point so that the result of a lookup is itself a valid lookup result
    (``lemma(lemma(t)) == lemma(t)`` for every token).  At construction,
    entry chains (a->b, b->c) are collapsed and every base form receives an
    implicit identity entry shielding it from the suffix rules.
    """

    def __init__(self, entries: Mapping[str, str],
                 suffix_rules: Sequence[tuple[str, str]] = DEFAULT_SUFFIX_RULES):
        resolved = _resolve_chains(dict(entries))
        for base in list(resolved.values()):
            resolved.setdefault(base, base)
        self._entries = MappingProxyType(resolved)
        self._rules = tuple((str(s), str(r)) for s, r in suffix_rules)

    @property
    def entries(self) -> Mapping[str, str]:
        return self._entries

    @property
    def suffix_rules(self) -> tuple[tuple[str, str], ...]:
        return self._rules

    def lemma(self, token: str) -> str:
        current = token
        for _ in range(_MAX_REWRITE_PASSES):
            hit = self._entries.get(current)
            if hit is not None:
                return hit
            rewritten = self._apply_first_rule(current)
            if rewritten == current:
                return current
            current = rewritten
        return current

    def _apply_first_rule(self, token: str) -> str:
        for suffix, replacement in self._rules:
            if len(token) > len(suffix) and token.endswith(suffix):
                candidate = token[:-len(suffix)] + replacement
                if len(candidate) >= _MIN_LEMMA_LEN:
                    return candidate
        return token

    def __len__(self) -> int:
        return len(self._entries)


def _resolve_chains(entries: dict[str, str]) -> dict[str, str]:
    """Collapse entry chains; members of a cycle all map to its minimum."""
    resolved: dict[str, str] = {}
    for start in entries:
        seen = [start]
        current = start
        while current in entries and entries[current] != current:
            current = entries[current]
            if current in seen:
                current = min(seen[seen.index(current):])
                break
            seen.append(current)
        resolved[start] = current
    return resolved


# --- operations ---------------------------------------------------------


def normalize(text: str, config: PipelineConfig) -> str:
    """Collapse raw text to letters, optional digits, and single spaces.

    Canonical composition (NFC) runs before and after lowercasing so that
    decomposed accents survive as single letters; every other character is
    replaced by a space and runs of spaces collapse.
    """
    text = unicodedata.normalize("NFC", text)
    if config.lowercase:
        text = unicodedata.normalize("NFC", text.lower())
    kept = []
    for ch in text:
        if ch.isalpha():
            kept.append(ch)
        elif ch.isdigit() and not config.strip_numbers:
            kept.append(ch)
        else:
            kept.append(" ")
    return " ".join("".join(kept).split())


def tokenize(normalized: str) -> list[str]:
    """Split normalized text on spaces; never yields empty tokens."""
    return normalized.split()


def lemmatize(token: str, dictionary: LemmaDictionary) -> str:
    """Map one normalized token to its base form (identity if unknown)."""
    return dictionary.lemma(token)


def remove_stopwords(tokens: Iterable[str], config: PipelineConfig) -> list[str]:
    """Order-preserving filter against the configured stop-word set."""
    return [t for t in tokens if t not in config.stopword_list]


def extract_keywords(tokens: Iterable[str], config: PipelineConfig,
                     lexicon: Mapping[str, frozenset[str]] | None = None) -> list[str]:
    """Keep noun/verb tokens (pos_filtered) or everything (all_content_words).

    Tokens absent from the lexicon are kept: for discovery, recall beats
    precision.
    """
    if config.keyword_mode == "all_content_words":
        return list(tokens)
    lex = default_pos_lexicon() if lexicon is None else lexicon
    kept = []
    for token in tokens:
        tags = lex.get(token)
        if tags is None or "N" in tags or "V" in tags:
            kept.append(token)
    return kept


def build_ngrams(keywords: Sequence[str], ngram_max: int) -> list[str]:
    """All contiguous n-grams for n = 1..ngram_max, shortest first, each in
    order of appearance, tokens joined by single spaces."""
    if ngram_max < 1:
        raise ValueError(f"ngram_max must be >= 1, got {ngram_max}")
    out = []
    for n in range(1, ngram_max + 1):
        for i in range(len(keywords) - n + 1):
            out.append(" ".join(keywords[i:i + n]))
    return out


def preprocess(raw: str, source_id: str, dictionary: LemmaDictionary,
               config: PipelineConfig) -> TokenizedDocument:
    """Full pipeline: normalize, tokenize, lemmatize, drop stop words,
    select keywords, build n-grams."""
    tokens = tokenize(normalize(raw, config))
    lemmas = remove_stopwords(
        (dictionary.lemma(t) for t in tokens), config)
    keywords = extract_keywords(lemmas, config)
    ngrams = build_ngrams(keywords, config.ngram_max)
    return TokenizedDocument(source_id=source_id,
                             lemmas=tuple(lemmas),
                             keywords=tuple(keywords),
                             ngrams=tuple(ngrams))


# --- bundled data -------------------------------------------------------


def _read_bundled(filename: str) -> str:
    return (resources.files("slrank") / "data" / filename).read_text("utf-8")


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def load_stopwords(path: str) -> frozenset[str]:
    """Stop-word file: one token per line, '#' comments."""
    with open(path, encoding="utf-8") as handle:
        return _parse_stopwords(handle.read())


def _parse_lemma_entries(text: str, origin: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(
                f"{origin}:{line_no}: expected 'inflected<TAB>base', got {line!r}")
        entries[parts[0]] = parts[1]
    return entries


def load_lemma_dictionary(path: str,
                          suffix_rules: Sequence[tuple[str, str]] = DEFAULT_SUFFIX_RULES
                          ) -> LemmaDictionary:
    """Lemma dictionary file: 'inflected<TAB>base' per line, '#' comments."""
    with open(path, encoding="utf-8") as handle:
        entries = _parse_lemma_entries(handle.read(), path)
    return LemmaDictionary(entries, suffix_rules)


def _parse_pos_lexicon(text: str, origin: str) -> dict[str, frozenset[str]]:
    lexicon: dict[str, frozenset[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(
                f"{origin}:{line_no}: expected 'token<TAB>tags', got {line!r}")
        tags = frozenset(tag.strip() for tag in parts[1].split(","))
        if not tags <= POS_TAGS:
            raise ValueError(
                f"{origin}:{line_no}: unknown tags {sorted(tags - POS_TAGS)}")
        lexicon[parts[0]] = tags
    return lexicon


def load_pos_lexicon(path: str) -> dict[str, frozenset[str]]:
    """POS lexicon file: 'token<TAB>tags', tags comma-separated from
    {N, V, ADJ, ADV, OTHER}."""
    with open(path, encoding="utf-8") as handle:
        return _parse_pos_lexicon(handle.read(), path)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return _parse_stopwords(_read_bundled("stopwords.txt"))


@lru_cache(maxsize=1)
def default_lemma_dictionary() -> LemmaDictionary:
    return LemmaDictionary(
        _parse_lemma_entries(_read_bundled("lemmas.tsv"), "lemmas.tsv"))


@lru_cache(maxsize=1)
def default_pos_lexicon() -> Mapping[str, frozenset[str]]:
    return MappingProxyType(
        _parse_pos_lexicon(_read_bundled("pos_lexicon.tsv"), "pos_lexicon.tsv"))
