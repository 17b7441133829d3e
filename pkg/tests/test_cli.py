"""Command-line interface: commands, exit codes, canonical output."""

import json

import pytest

from slrank.cli import main
from slrank.corpus import load, save


@pytest.fixture()
def corpus_file(tmp_path, fixture_corpus):
    path = tmp_path / "corpus.jsonl"
    save(fixture_corpus, str(path))
    return str(path)


@pytest.fixture()
def models_dir(fixture_dir):
    return str(fixture_dir / "models")


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIngest:
    def test_success(self, tmp_path, fixture_dir, capsys):
        out_path = tmp_path / "store.jsonl"
        code, out, err = run([
            "ingest", "--input", str(fixture_dir / "records.jsonl"),
            "--output", str(out_path)], capsys)
        assert code == 0
        assert "10 records" in out
        corpus = load(str(out_path))
        assert len(corpus) == 10

    def test_missing_input_fails_with_diagnostic(self, tmp_path, capsys):
        code, out, err = run([
            "ingest", "--input", str(tmp_path / "absent.jsonl"),
            "--output", str(tmp_path / "out.jsonl")], capsys)
        assert code == 1
        assert "absent.jsonl" in err

    def test_duplicate_id_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        line = json.dumps({"doc_id": "a", "title": "T", "year": 2020,
                           "abstract": "A."})
        bad.write_text(line + "\n" + line + "\n", encoding="utf-8")
        code, _, err = run(["ingest", "--input", str(bad),
                            "--output", str(tmp_path / "o.jsonl")], capsys)
        assert code == 1 and "duplicate" in err


class TestRank:
    def test_seed_mode_canonical_document(self, corpus_file, models_dir,
                                          fixture_dir, tmp_path, capsys):
        out_path = tmp_path / "ranked.jsonl"
        code, _, _ = run([
            "rank", "--mode", "seed",
            "--seed-file", str(fixture_dir / "seed.txt"),
            "--corpus", corpus_file, "--model", "toy-a",
            "--models-dir", models_dir, "--output", str(out_path)], capsys)
        assert code == 0
        lines = out_path.read_text("utf-8").strip().split("\n")
        header = json.loads(lines[0])
        assert header["format"] == "slr-ranking"
        assert header["mode"] == "seed_abstract"
        assert header["model"] == "toy-a"
        rows = [json.loads(line) for line in lines[1:]]
        ranked = [r for r in rows if not r.get("skipped")]
        skipped = [r for r in rows if r.get("skipped")]
        assert [r["doc_id"] for r in ranked] == [
            "d01", "d02", "d04", "d03", "d08", "d06", "d09", "d05", "d07"]
        assert [r["rank"] for r in ranked] == list(range(1, 10))
        assert skipped == [{"doc_id": "d10", "skipped": True,
                            "reason": "no_coverage"}]

    def test_rank_matches_library(self, corpus_file, models_dir, fixture_dir,
                                  tmp_path, capsys, fixture_corpus,
                                  toy_model, dictionary, config, seed_text):
        from slrank.similarity import rank_by_seed_abstract
        out_path = tmp_path / "ranked.jsonl"
        run(["rank", "--mode", "seed",
             "--seed-file", str(fixture_dir / "seed.txt"),
             "--corpus", corpus_file, "--model", "toy-a",
             "--models-dir", models_dir, "--output", str(out_path)], capsys)
        rows = [json.loads(line) for line
                in out_path.read_text("utf-8").strip().split("\n")[1:]
                if not json.loads(line).get("skipped")]
        expected = rank_by_seed_abstract(seed_text, fixture_corpus, toy_model,
                                         dictionary, config)
        assert [(r["doc_id"], r["distance"], r["rank"]) for r in rows] == [
            (r.doc_id, r.distance, r.rank) for r in expected.results]

    def test_rq_mode_to_stdout(self, corpus_file, models_dir, fixture_dir,
                               capsys):
        code, out, _ = run([
            "rank", "--mode", "rq",
            "--questions-file", str(fixture_dir / "questions.txt"),
            "--corpus", corpus_file, "--model", "toy-a",
            "--models-dir", models_dir], capsys)
        assert code == 0
        header = json.loads(out.split("\n")[0])
        assert header["mode"] == "research_questions"
        assert header["aggregation"] == "concat"

    def test_top_k_truncation(self, corpus_file, models_dir, fixture_dir,
                              capsys):
        code, out, _ = run([
            "rank", "--mode", "rq",
            "--questions-file", str(fixture_dir / "questions.txt"),
            "--corpus", corpus_file, "--model", "toy-a",
            "--models-dir", models_dir, "--k", "3"], capsys)
        rows = [json.loads(line) for line in out.strip().split("\n")[1:]]
        ranked = [r for r in rows if not r.get("skipped")]
        assert len(ranked) == 3

    def test_byte_identical_across_runs(self, corpus_file, models_dir,
                                        fixture_dir, tmp_path, capsys):
        paths = [tmp_path / "run1.jsonl", tmp_path / "run2.jsonl"]
        for path in paths:
            code, _, _ = run([
                "rank", "--mode", "rq",
                "--questions-file", str(fixture_dir / "questions.txt"),
                "--corpus", corpus_file, "--model", "toy-a",
                "--models-dir", models_dir, "--output", str(path)], capsys)
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_unknown_model_fails(self, corpus_file, models_dir, fixture_dir,
                                 capsys):
        code, _, err = run([
            "rank", "--mode", "seed",
            "--seed-file", str(fixture_dir / "seed.txt"),
            "--corpus", corpus_file, "--model", "nope",
            "--models-dir", models_dir], capsys)
        assert code == 1
        assert "nope" in err

    def test_usage_error_exits_2(self, corpus_file, models_dir, capsys):
        with pytest.raises(SystemExit) as info:
            main(["rank", "--mode", "rq", "--corpus", corpus_file,
                  "--model", "toy-a", "--models-dir", models_dir])
        assert info.value.code == 2


class TestEvaluate:
    def test_report_document(self, corpus_file, models_dir, fixture_dir,
                             tmp_path, capsys):
        out_path = tmp_path / "report.jsonl"
        code, _, _ = run([
            "evaluate", "--corpus", corpus_file,
            "--annotations", str(fixture_dir / "annotations.csv"),
            "--models-dir", models_dir, "--mode", "rq",
            "--questions-file", str(fixture_dir / "questions.txt"),
            "--k", "3,5", "--output", str(out_path)], capsys)
        assert code == 0
        lines = out_path.read_text("utf-8").strip().split("\n")
        header = json.loads(lines[0])
        assert header["format"] == "slr-eval-report"
        rows = [json.loads(line) for line in lines[1:]]
        assert [r["model"] for r in rows] == ["toy-a", "toy-b"]
        assert rows[0]["spearman_rho"] == rows[1]["spearman_rho"]

    def test_table_output(self, corpus_file, models_dir, fixture_dir,
                          capsys):
        code, out, _ = run([
            "evaluate", "--corpus", corpus_file,
            "--annotations", str(fixture_dir / "annotations.csv"),
            "--models-dir", models_dir, "--mode", "seed",
            "--seed-file", str(fixture_dir / "seed.txt"),
            "--k", "3,5", "--table"], capsys)
        assert code == 0
        assert "toy-a" in out and "P@3" in out

    def test_missing_annotation_file_names_path(self, corpus_file,
                                                models_dir, fixture_dir,
                                                tmp_path, capsys):
        missing = str(tmp_path / "nope.csv")
        code, _, err = run([
            "evaluate", "--corpus", corpus_file,
            "--annotations", missing,
            "--models-dir", models_dir, "--mode", "rq",
            "--questions-file", str(fixture_dir / "questions.txt")], capsys)
        assert code == 1
        assert "nope.csv" in err

    def test_bad_k_is_usage_error(self, corpus_file, models_dir, fixture_dir,
                                  capsys):
        with pytest.raises(SystemExit) as info:
            main(["evaluate", "--corpus", corpus_file,
                  "--annotations", str(fixture_dir / "annotations.csv"),
                  "--models-dir", models_dir, "--mode", "rq",
                  "--questions-file", str(fixture_dir / "questions.txt"),
                  "--k", "three"])
        assert info.value.code == 2


class TestModels:
    def test_lists_name_sorted_rows(self, models_dir, capsys):
        code, out, _ = run(["models", "--models-dir", models_dir], capsys)
        assert code == 0
        assert out.splitlines() == ["toy-a\t6\t34", "toy-b\t6\t34"]

    def test_missing_dir(self, tmp_path, capsys):
        code, _, err = run(["models", "--models-dir",
                            str(tmp_path / "void")], capsys)
        assert code == 1


class TestServe:
    def test_bad_config_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "svc.json"
        bad.write_text("{}", encoding="utf-8")
        code, _, err = run(["serve", "--config", str(bad)], capsys)
        assert code == 1
        assert "svc.json" in err
