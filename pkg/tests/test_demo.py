"""Bundled synthetic corpus generator."""

import pytest

from udl.demo import make_demo, write_demo
from udl.lexical import decide_similarity_model, fit_tfidf, term_entropy, SimilarityModel


class TestMakeDemo:
    def test_deterministic_for_a_seed(self):
        a = make_demo(seed=7, n_docs=16)
        b = make_demo(seed=7, n_docs=16)
        assert [d.text for d in a.corpus.documents] == [d.text for d in b.corpus.documents]
        assert a.qrels.entries == b.qrels.entries

    def test_seed_changes_the_text(self):
        a = make_demo(seed=7, n_docs=16)
        b = make_demo(seed=8, n_docs=16)
        assert [d.text for d in a.corpus.documents] != [d.text for d in b.corpus.documents]

    def test_requested_size(self):
        assert len(make_demo(n_docs=32).corpus) == 32

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            make_demo(n_docs=7)

    def test_qrels_reference_real_ids(self):
        data = make_demo(seed=7, n_docs=24)
        doc_ids = set(data.corpus.ids())
        query_ids = {q.id for q in data.queries}
        for qid, doc_id in data.qrels.entries:
            assert qid in query_ids
            assert doc_id in doc_ids

    def test_corpus_is_built_to_stay_lexical(self):
        data = make_demo(seed=7, n_docs=200)
        decision = decide_similarity_model(term_entropy(fit_tfidf(data.corpus, 36000)), 0.7)
        assert decision.model is SimilarityModel.LEXICAL
        assert decision.d_m < 0.35  # wide margin below the 0.7 cutoff


class TestWriteDemo:
    def test_writes_three_files(self, tmp_path):
        paths = write_demo(tmp_path, seed=7, n_docs=12)
        assert sorted(p.name for p in paths.values()) == [
            "corpus.jsonl",
            "qrels.tsv",
            "queries.jsonl",
        ]
        for path in paths.values():
            assert path.is_file() and path.stat().st_size > 0
