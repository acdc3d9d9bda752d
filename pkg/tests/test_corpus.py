"""Loader and round-trip behavior for corpora, queries, and qrels."""

import pytest

from udl.corpus import (
    Corpus,
    Document,
    Qrels,
    Query,
    load_corpus,
    load_qrels,
    load_queries,
    save_corpus,
    save_qrels,
    save_queries,
)
from udl.errors import FormatError, ParseError, ValidationError


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCorpus:
    def test_jsonl_round_trip(self, tmp_path):
        docs = [
            Document(id="d1", title="First", text="alpha beta"),
            Document(id="d2", title="", text="gamma delta"),
            Document(id="d3", title="Third", text="uber ünïcode"),
        ]
        path = tmp_path / "corpus.jsonl"
        save_corpus(Corpus(documents=docs), path)
        loaded = load_corpus(path)
        assert list(loaded) == docs

    def test_tsv_glue(self, tmp_path):
        path = write(tmp_path / "corpus.tsv", "d1\tTitle\tbody text\nd2\t\tmore text\n")
        corpus = load_corpus(path)
        assert corpus["d1"].title == "Title"
        assert corpus["d2"].text == "more text"

    def test_malformed_json_names_line(self, tmp_path):
        path = write(tmp_path / "c.jsonl", '{"_id": "a", "text": "x"}\nnot json\n')
        with pytest.raises(ParseError, match=r":2"):
            load_corpus(path)

    def test_missing_id_rejected(self, tmp_path):
        path = write(tmp_path / "c.jsonl", '{"title": "t", "text": "x"}\n')
        with pytest.raises(ParseError, match="_id"):
            load_corpus(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = write(
            tmp_path / "c.jsonl",
            '{"_id": "a", "text": "x"}\n{"_id": "a", "text": "y"}\n',
        )
        with pytest.raises(ValidationError, match="'a'"):
            load_corpus(path)

    def test_empty_title_and_text_rejected(self, tmp_path):
        path = write(tmp_path / "c.jsonl", '{"_id": "a", "title": " ", "text": ""}\n')
        with pytest.raises(ValidationError, match="no title and no text"):
            load_corpus(path)

    def test_doc_cap_truncates_in_order(self, tmp_path):
        lines = "".join(f'{{"_id": "d{i}", "text": "t{i}"}}\n' for i in range(10))
        path = write(tmp_path / "c.jsonl", lines)
        corpus = load_corpus(path, doc_cap=4)
        assert corpus.ids() == ["d0", "d1", "d2", "d3"]

    def test_doc_cap_must_be_positive(self, tmp_path):
        path = write(tmp_path / "c.jsonl", '{"_id": "a", "text": "x"}\n')
        with pytest.raises(ValueError):
            load_corpus(path, doc_cap=0)

    def test_blank_lines_skipped(self, tmp_path):
        path = write(tmp_path / "c.jsonl", '{"_id": "a", "text": "x"}\n\n{"_id": "b", "text": "y"}\n')
        assert load_corpus(path).ids() == ["a", "b"]


class TestCorpusContainer:
    def test_lookup_and_order(self):
        docs = [Document(id=i, title="", text=i) for i in ("b", "a", "c")]
        corpus = Corpus(documents=docs)
        assert corpus.ids() == ["b", "a", "c"]
        assert corpus["a"].text == "a"
        assert len(corpus) == 3

    def test_duplicate_ids_rejected_at_construction(self):
        docs = [Document(id="x", title="", text="1"), Document(id="x", title="", text="2")]
        with pytest.raises(ValidationError):
            Corpus(documents=docs)


class TestQueries:
    def test_round_trip(self, tmp_path):
        queries = [Query(id="q1", text="hello"), Query(id="q2", text="wörld")]
        path = tmp_path / "q.jsonl"
        save_queries(queries, path)
        assert load_queries(path) == queries

    def test_duplicate_query_id_rejected(self, tmp_path):
        path = write(tmp_path / "q.jsonl", '{"_id": "q", "text": "a"}\n{"_id": "q", "text": "b"}\n')
        with pytest.raises(ValidationError):
            load_queries(path)

    def test_missing_text_rejected(self, tmp_path):
        path = write(tmp_path / "q.jsonl", '{"_id": "q"}\n')
        with pytest.raises(ParseError):
            load_queries(path)


class TestQrels:
    def test_round_trip_and_lookup(self, tmp_path):
        qrels = Qrels(entries={("q1", "d1"): 2, ("q1", "d2"): 0, ("q2", "d1"): 1})
        path = tmp_path / "qrels.tsv"
        save_qrels(qrels, path)
        loaded = load_qrels(path)
        assert loaded.entries == qrels.entries
        assert loaded.grade("q1", "d1") == 2
        assert loaded.grade("q1", "missing") == 0
        assert loaded.relevant_docs("q1") == {"d1": 2}
        assert loaded.by_query()["q1"] == {"d1": 2, "d2": 0}

    def test_header_is_mandatory(self, tmp_path):
        path = write(tmp_path / "qrels.tsv", "qid\tdid\trel\nq1\td1\t1\n")
        with pytest.raises(FormatError, match="header"):
            load_qrels(path)

    def test_non_integer_score_names_row(self, tmp_path):
        path = write(tmp_path / "qrels.tsv", "query-id\tcorpus-id\tscore\nq1\td1\thigh\n")
        with pytest.raises(ParseError, match=r":2"):
            load_qrels(path)

    def test_negative_grade_rejected(self, tmp_path):
        path = write(tmp_path / "qrels.tsv", "query-id\tcorpus-id\tscore\nq1\td1\t-1\n")
        with pytest.raises(ValidationError, match="negative"):
            load_qrels(path)

    def test_duplicate_entry_rejected(self, tmp_path):
        path = write(
            tmp_path / "qrels.tsv",
            "query-id\tcorpus-id\tscore\nq1\td1\t1\nq1\td1\t2\n",
        )
        with pytest.raises(ValidationError, match="duplicate"):
            load_qrels(path)
