"""Corpus ingest, lookup, persistence, and annotation parsing."""

import json

import pytest

from slrank.corpus import (Corpus, SlrRecord, get, ingest, load,
                           load_annotations, save)
from slrank.errors import (DuplicateId, IoFailure, MalformedRecord,
                           MissingField)
from slrank.pipeline import preprocess


def write_records(tmp_path, lines, name="records.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def record_line(doc_id="d1", title="T", year=2020, abstract="A review.",
                **extra):
    payload = {"doc_id": doc_id, "title": title, "year": year,
               "abstract": abstract, **extra}
    return json.dumps(payload)


class TestIngest:
    def test_two_records_curated(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [
            record_line("a", abstract="Screening reviews with tools."),
            record_line("b", abstract="Bird migration and habitats."),
        ])
        corpus = ingest(path, config, dictionary)
        assert len(corpus) == 2
        for record in corpus.records:
            expected = preprocess(record.abstract, record.doc_id,
                                  dictionary, config)
            assert record.curated_keywords == expected.ngrams

    def test_duplicate_id(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("a"), record_line("a")])
        with pytest.raises(DuplicateId) as info:
            ingest(path, config, dictionary)
        assert info.value.doc_id == "a"

    def test_empty_abstract(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("a", abstract="")])
        with pytest.raises(MissingField) as info:
            ingest(path, config, dictionary)
        assert info.value.field == "abstract"

    def test_missing_required_field(self, tmp_path, config, dictionary):
        path = write_records(
            tmp_path, ['{"doc_id":"a","title":"T","year":2020}'])
        with pytest.raises(MissingField) as info:
            ingest(path, config, dictionary)
        assert info.value.field == "abstract"

    def test_bad_json(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("a"), "{nope"])
        with pytest.raises(MalformedRecord) as info:
            ingest(path, config, dictionary)
        assert info.value.line_no == 2

    def test_bad_year(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("a", year="2020")])
        with pytest.raises(MalformedRecord):
            ingest(path, config, dictionary)

    def test_unknown_key_rejected(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("a", publisher="X")])
        with pytest.raises(MalformedRecord):
            ingest(path, config, dictionary)

    def test_missing_file(self, tmp_path, config, dictionary):
        with pytest.raises(IoFailure):
            ingest(str(tmp_path / "absent.jsonl"), config, dictionary)

    def test_records_sorted_by_doc_id(self, tmp_path, config, dictionary):
        path = write_records(tmp_path, [record_line("b"), record_line("a")])
        corpus = ingest(path, config, dictionary)
        assert [r.doc_id for r in corpus.records] == ["a", "b"]


class TestGet:
    def test_present(self, fixture_corpus):
        record = get(fixture_corpus, "d03")
        assert record is not None and record.doc_id == "d03"

    def test_absent(self, fixture_corpus):
        assert get(fixture_corpus, "nope") is None

    def test_empty_corpus(self, config):
        corpus = Corpus(records=(), pipeline_config=config,
                        curation_timestamp="2026-01-01T00:00:00+00:00")
        assert get(corpus, "d1") is None


class TestSaveLoad:
    def test_round_trip(self, tmp_path, fixture_corpus):
        path = str(tmp_path / "store.jsonl")
        save(fixture_corpus, path)
        loaded = load(path)
        assert loaded == fixture_corpus

    def test_byte_stable(self, tmp_path, fixture_corpus):
        path_a = tmp_path / "a.jsonl"
        path_b = tmp_path / "b.jsonl"
        save(fixture_corpus, str(path_a))
        save(fixture_corpus, str(path_b))
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_round_trip_preserves_config(self, tmp_path, fixture_corpus):
        path = str(tmp_path / "store.jsonl")
        save(fixture_corpus, path)
        loaded = load(path)
        assert loaded.pipeline_config == fixture_corpus.pipeline_config
        assert loaded.curation_timestamp == fixture_corpus.curation_timestamp

    def test_truncated_file(self, tmp_path, fixture_corpus):
        path = tmp_path / "store.jsonl"
        save(fixture_corpus, str(path))
        content = path.read_text("utf-8")
        path.write_text(content[:len(content) // 2], encoding="utf-8")
        with pytest.raises(MalformedRecord):
            load(str(path))

    def test_not_a_corpus_file(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text('{"something":"else"}\n', encoding="utf-8")
        with pytest.raises(MalformedRecord) as info:
            load(str(path))
        assert info.value.line_no == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(MalformedRecord):
            load(str(path))

    def test_save_failure(self, fixture_corpus, tmp_path):
        with pytest.raises(IoFailure):
            save(fixture_corpus, str(tmp_path / "missing" / "store.jsonl"))

    def test_curation_reproducible(self, fixture_corpus, dictionary):
        for record in fixture_corpus.records:
            redone = preprocess(record.abstract, record.doc_id, dictionary,
                                fixture_corpus.pipeline_config)
            assert record.curated_keywords == redone.ngrams


class TestAnnotations:
    def test_labels_and_ratings(self, fixture_dir):
        labels, ratings = load_annotations(
            str(fixture_dir / "annotations.csv"))
        assert len(labels) == 10
        assert labels["d01"] == 1 and labels["d09"] == 0
        assert ratings["d01"] == 9.0
        assert set(ratings) <= set(labels)

    def test_header_required(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("d1,1,5\n", encoding="utf-8")
        with pytest.raises(MalformedRecord) as info:
            load_annotations(str(path))
        assert info.value.line_no == 1

    def test_rating_optional(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("doc_id,label,rating\nd1,1\nd2,0,3.5\n",
                        encoding="utf-8")
        labels, ratings = load_annotations(str(path))
        assert labels == {"d1": 1, "d2": 0}
        assert ratings == {"d2": 3.5}

    def test_bad_label(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("doc_id,label,rating\nd1,2,1\n", encoding="utf-8")
        with pytest.raises(MalformedRecord):
            load_annotations(str(path))

    def test_bad_rating(self, tmp_path):
        path = tmp_path / "ann.csv"
        for bad in ("d1,1,x", "d1,1,inf"):
            path.write_text(f"doc_id,label,rating\n{bad}\n", encoding="utf-8")
            with pytest.raises(MalformedRecord):
                load_annotations(str(path))

    def test_duplicate_doc_id(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("doc_id,label,rating\nd1,1,1\nd1,0,0\n",
                        encoding="utf-8")
        with pytest.raises(DuplicateId):
            load_annotations(str(path))
