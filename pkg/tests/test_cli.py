"""Command-line surface: artifacts, config layering, exit codes."""

import json

import pytest

from udl.cli import main
from udl.evalir import read_run
from udl.synthesis import load_generation_units, load_training_pairs


def run_cli(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def demo_dir(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("demo")
    assert run_cli("demo", "--outdir", outdir, "--n-docs", 24) == 0
    return outdir


@pytest.fixture(scope="module")
def linked_dir(demo_dir, tmp_path_factory):
    outdir = tmp_path_factory.mktemp("linked")
    code = run_cli("link", "--corpus", demo_dir / "corpus.jsonl", "--outdir", outdir)
    assert code == 0
    return outdir


class TestDemo:
    def test_writes_the_three_dataset_files(self, demo_dir):
        assert (demo_dir / "corpus.jsonl").is_file()
        assert (demo_dir / "queries.jsonl").is_file()
        assert (demo_dir / "qrels.tsv").is_file()
        n_docs = sum(1 for _ in (demo_dir / "corpus.jsonl").open())
        assert n_docs == 24


class TestLink:
    def test_exactly_three_artifacts_by_default(self, linked_dir):
        assert sorted(p.name for p in linked_dir.iterdir()) == [
            "decision_report.json",
            "links.jsonl",
            "units.jsonl",
        ]

    def test_decision_report_contents(self, linked_dir):
        report = json.loads((linked_dir / "decision_report.json").read_text())
        assert report["model"] == "tfidf"
        assert report["gamma"] == 0.7
        assert report["doc_type"] in {"general", "specialized"}
        assert report["threshold"] in {0.4, 0.6}
        assert report["n_pairs"] >= 1
        assert report["n_pairs"] + report["n_unlinked"] <= 24

    def test_units_cover_every_document(self, linked_dir, demo_dir):
        units = load_generation_units(linked_dir / "units.jsonl")
        covered = {d for u in units for d in u.doc_ids}
        corpus_ids = {json.loads(line)["_id"] for line in (demo_dir / "corpus.jsonl").open()}
        assert covered == corpus_ids
        assert all(u.n_queries == 3 for u in units)

    def test_figures_are_opt_in(self, demo_dir, tmp_path):
        assert run_cli(
            "link", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path, "--figures"
        ) == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert {"entropy_hist.png", "link_scores.png"} <= names

    def test_missing_corpus_flag(self, tmp_path, capsys):
        assert run_cli("link", "--outdir", tmp_path) == 1
        assert "--corpus is required" in capsys.readouterr().err

    def test_nonexistent_corpus(self, tmp_path, capsys):
        assert run_cli("link", "--corpus", tmp_path / "nope.jsonl", "--outdir", tmp_path) == 1
        assert "file not found" in capsys.readouterr().err

    def test_malformed_corpus_is_a_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"_id": "d1", "text": "x"}\nnot json\n')
        assert run_cli("link", "--corpus", bad, "--outdir", tmp_path) == 2
        assert "data error" in capsys.readouterr().err

    def test_unreachable_remote_ner_is_a_transport_error(self, demo_dir, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("UDL_ADAPTER_URL", "http://127.0.0.1:9")
        code = run_cli(
            "link",
            "--corpus", demo_dir / "corpus.jsonl",
            "--outdir", tmp_path,
            "--ner-backend", "remote",
        )
        assert code == 3
        err = capsys.readouterr().err
        assert "transport error" in err
        assert "127.0.0.1:9" in err

    def test_remote_ner_without_url_is_a_config_error(self, demo_dir, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("UDL_ADAPTER_URL", raising=False)
        code = run_cli(
            "link",
            "--corpus", demo_dir / "corpus.jsonl",
            "--outdir", tmp_path,
            "--ner-backend", "remote",
        )
        assert code == 1
        assert "config error" in capsys.readouterr().err


class TestAnalyze:
    def test_report_and_default_figure(self, demo_dir, tmp_path):
        assert run_cli("analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path) == 0
        assert (tmp_path / "analyze.json").is_file()
        assert (tmp_path / "entropy_hist.png").is_file()
        payload = json.loads((tmp_path / "analyze.json").read_text())
        assert payload["model"] in {"tfidf", "lm"}
        assert payload["n_docs"] == 24

    def test_no_figures_flag(self, demo_dir, tmp_path):
        code = run_cli(
            "analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path, "--no-figures"
        )
        assert code == 0
        assert [p.name for p in tmp_path.iterdir()] == ["analyze.json"]


class TestConfigLayering:
    def test_config_file_overrides_defaults(self, demo_dir, tmp_path):
        config = tmp_path / "udl.conf"
        config.write_text("gamma = 0.05  # aggressive\nmax_features = 500\n")
        out = tmp_path / "out"
        code = run_cli(
            "analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", out,
            "--config", config, "--no-figures",
        )
        assert code == 0
        assert json.loads((out / "analyze.json").read_text())["gamma"] == 0.05

    def test_flag_beats_config_file(self, demo_dir, tmp_path):
        config = tmp_path / "udl.conf"
        config.write_text("gamma = 0.05\n")
        out = tmp_path / "out"
        code = run_cli(
            "analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", out,
            "--config", config, "--gamma", 0.9, "--no-figures",
        )
        assert code == 0
        assert json.loads((out / "analyze.json").read_text())["gamma"] == 0.9

    def test_config_file_beats_environment(self, demo_dir, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("UDL_ADAPTER_URL", "http://127.0.0.1:9")
        config = tmp_path / "udl.conf"
        config.write_text("adapter_url = http://127.0.0.1:10\n")
        code = run_cli(
            "link", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path,
            "--config", config, "--ner-backend", "remote",
        )
        assert code == 3
        assert "127.0.0.1:10" in capsys.readouterr().err

    def test_unknown_key_rejected(self, demo_dir, tmp_path, capsys):
        config = tmp_path / "udl.conf"
        config.write_text("gama = 0.5\n")
        code = run_cli(
            "analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path,
            "--config", config,
        )
        assert code == 1
        assert "unknown config key 'gama'" in capsys.readouterr().err

    def test_non_assignment_line_rejected(self, demo_dir, tmp_path, capsys):
        config = tmp_path / "udl.conf"
        config.write_text("gamma\n")
        code = run_cli(
            "analyze", "--corpus", demo_dir / "corpus.jsonl", "--outdir", tmp_path,
            "--config", config,
        )
        assert code == 1
        assert "expected key=value" in capsys.readouterr().err


class TestUnitCommands:
    def test_export_units_restamps_the_budget(self, linked_dir, tmp_path):
        out = tmp_path / "units5.jsonl"
        code = run_cli(
            "export-units", "--units", linked_dir / "units.jsonl", "--out", out, "--n-queries", 5
        )
        assert code == 0
        assert all(u.n_queries == 5 for u in load_generation_units(out))

    def test_export_units_rejects_zero_budget(self, linked_dir, tmp_path, capsys):
        code = run_cli(
            "export-units", "--units", linked_dir / "units.jsonl",
            "--out", tmp_path / "u.jsonl", "--n-queries", 0,
        )
        assert code == 1
        assert "--n-queries" in capsys.readouterr().err

    def test_stub_then_import_builds_training_rows(self, linked_dir, tmp_path):
        units = load_generation_units(linked_dir / "units.jsonl")
        stub = tmp_path / "stub.jsonl"
        assert run_cli("stub-queries", "--units", linked_dir / "units.jsonl", "--out", stub) == 0
        assert sum(1 for _ in stub.open()) == sum(u.n_queries for u in units)

        pairs_path = tmp_path / "pairs.tsv"
        code = run_cli(
            "import-queries", "--units", linked_dir / "units.jsonl",
            "--queries", stub, "--out", pairs_path,
        )
        assert code == 0
        pairs = load_training_pairs(pairs_path)
        assert len(pairs) == sum(u.n_queries for u in units)
        expected_rows = sum(u.n_queries * len(u.doc_ids) for u in units)
        assert sum(len(p.positive_doc_ids) for p in pairs) == expected_rows


@pytest.fixture(scope="module")
def training_pairs_path(demo_dir, linked_dir, tmp_path_factory):
    workdir = tmp_path_factory.mktemp("pairs")
    stub = workdir / "stub.jsonl"
    assert run_cli("stub-queries", "--units", linked_dir / "units.jsonl", "--out", stub) == 0
    pairs_path = workdir / "pairs.tsv"
    code = run_cli(
        "import-queries", "--units", linked_dir / "units.jsonl", "--queries", stub, "--out", pairs_path
    )
    assert code == 0
    return pairs_path


class TestQuality:
    def test_writes_report_and_figure(self, demo_dir, training_pairs_path, tmp_path):
        code = run_cli(
            "quality",
            "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl",
            "--qrels", demo_dir / "qrels.tsv",
            "--pairs", training_pairs_path,
            "--outdir", tmp_path,
        )
        assert code == 0
        assert (tmp_path / "quality.png").is_file()
        payload = json.loads((tmp_path / "quality.json").read_text())
        assert payload["n_checked"] + payload["n_uncovered"] == sum(
            1 for _ in load_training_pairs(training_pairs_path)
        )
        counts = payload["verdict_counts"]
        assert sum(counts.values()) == payload["n_checked"]

    def test_no_figures(self, demo_dir, training_pairs_path, tmp_path):
        code = run_cli(
            "quality",
            "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl",
            "--qrels", demo_dir / "qrels.tsv",
            "--pairs", training_pairs_path,
            "--outdir", tmp_path,
            "--no-figures",
        )
        assert code == 0
        assert [p.name for p in tmp_path.iterdir()] == ["quality.json"]


class TestRankEval:
    def test_rank_writes_a_readable_run(self, demo_dir, tmp_path):
        out = tmp_path / "run.txt"
        code = run_cli(
            "rank", "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl", "--out", out, "--k", 5, "--tag", "mytag",
        )
        assert code == 0
        run = read_run(out)
        assert run.tag == "mytag"
        assert all(len(ranked) <= 5 for ranked in run.rankings.values())

    def test_eval_prints_and_writes_metrics(self, demo_dir, tmp_path, capsys):
        out = tmp_path / "run.txt"
        assert run_cli(
            "rank", "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl", "--out", out, "--k", 10,
        ) == 0
        capsys.readouterr()
        metrics = tmp_path / "metrics.json"
        code = run_cli(
            "eval", "--run", out, "--qrels", demo_dir / "qrels.tsv",
            "--k", "2,5", "--out", metrics, "--figures",
        )
        assert code == 0
        stdout = capsys.readouterr().out
        payload = json.loads(stdout)
        assert set(payload["ndcg"]) == {"2", "5"}
        assert json.loads(metrics.read_text()) == payload
        assert (tmp_path / "metrics.png").is_file()

    def test_eval_figures_need_an_output_path(self, demo_dir, tmp_path, capsys):
        out = tmp_path / "run.txt"
        assert run_cli(
            "rank", "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl", "--out", out,
        ) == 0
        code = run_cli("eval", "--run", out, "--qrels", demo_dir / "qrels.tsv", "--figures")
        assert code == 1
        assert "--figures needs --out" in capsys.readouterr().err

    @pytest.mark.parametrize("cutoffs", ["0", "a,b", ","])
    def test_eval_rejects_bad_cutoffs(self, demo_dir, tmp_path, capsys, cutoffs):
        out = tmp_path / "run.txt"
        assert run_cli(
            "rank", "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl", "--out", out,
        ) == 0
        assert run_cli("eval", "--run", out, "--qrels", demo_dir / "qrels.tsv", "--k", cutoffs) == 1
        assert "config error" in capsys.readouterr().err

    def test_rank_rejects_nonpositive_k(self, demo_dir, tmp_path, capsys):
        code = run_cli(
            "rank", "--corpus", demo_dir / "corpus.jsonl",
            "--queries", demo_dir / "queries.jsonl", "--out", tmp_path / "run.txt", "--k", 0,
        )
        assert code == 1
        assert "--k must be at least 1" in capsys.readouterr().err
