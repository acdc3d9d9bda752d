"""Subcommand front end for the linking pipeline.

Settings resolve in layers: built-in defaults, then UDL_ADAPTER_URL from the
environment, then a flat key=value config file, then explicit flags.  Exit
codes: 1 for configuration problems, 2 for bad input data, 3 for backend
transport failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from udl.corpus import load_corpus, load_qrels, load_queries
from udl.errors import ConfigError, DataError, TransportError
from udl.gazetteers import build_general_extractor, build_specialized_extractor
from udl.keywords import DEFAULT_DELTA, ExtractorKind, KeywordExtractor, RemoteNerBackend
from udl.lexical import (
    DEFAULT_GAMMA,
    DEFAULT_MAX_FEATURES,
    decide_similarity_model,
    fit_tfidf,
    term_entropy,
    transform_texts,
)
from udl.linker import DEFAULT_N_QUERIES, MergeStrategy, PipelineConfig, run_udl, write_links_jsonl
from udl.similarity import (
    FileEmbeddingProvider,
    RemoteEmbeddingProvider,
    VectorSet,
    lexical_vectors,
)

log = logging.getLogger(__name__)

ADAPTER_URL_ENV = "UDL_ADAPTER_URL"


@dataclass
class CliConfig:
    gamma: float = DEFAULT_GAMMA
    delta: float = DEFAULT_DELTA
    max_features: int = DEFAULT_MAX_FEATURES
    doc_cap: int | None = None
    merge: str = MergeStrategy.CONCATENATION.value
    seed: int = 42
    n_queries: int = DEFAULT_N_QUERIES
    threads: int = 1
    adapter_url: str | None = None
    embeddings: str | None = None
    general_gazetteer: str | None = None
    specialized_gazetteer: str | None = None

    def pipeline_config(self) -> PipelineConfig:
        try:
            strategy = MergeStrategy(self.merge)
        except ValueError:
            names = ", ".join(m.value for m in MergeStrategy)
            raise ConfigError(f"unknown merge strategy {self.merge!r} (choose from {names})")
        return PipelineConfig(
            gamma=self.gamma,
            delta=self.delta,
            max_features=self.max_features,
            doc_cap=self.doc_cap,
            merge_strategy=strategy,
            seed=self.seed,
            n_queries_per_unit=self.n_queries,
            threads=self.threads,
        )


_FIELD_PARSERS = {
    "gamma": float,
    "delta": float,
    "max_features": int,
    "doc_cap": int,
    "merge": str,
    "seed": int,
    "n_queries": int,
    "threads": int,
    "adapter_url": str,
    "embeddings": str,
    "general_gazetteer": str,
    "specialized_gazetteer": str,
}


def read_config_file(path: str | Path) -> dict:
    """Flat key=value lines; # starts a comment; unknown keys are rejected."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        parser = _FIELD_PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = parser(value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """defaults < environment < config file < explicit flags."""
    values: dict = {}
    env_url = os.environ.get(ADAPTER_URL_ENV)
    if env_url:
        values["adapter_url"] = env_url
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for name in _FIELD_PARSERS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    try:
        return CliConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _require_path(value: str | None, flag: str) -> Path:
    if not value:
        raise ConfigError(f"{flag} is required")
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"{flag}: file not found: {path}")
    return path


def _outdir(args: argparse.Namespace) -> Path:
    if not args.outdir:
        raise ConfigError("--outdir is required")
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _extractors(cfg: CliConfig, backend: str) -> tuple[KeywordExtractor, KeywordExtractor]:
    if backend == "remote":
        if not cfg.adapter_url:
            raise ConfigError(
                f"--ner-backend remote needs --adapter-url or {ADAPTER_URL_ENV}"
            )
        return (
            KeywordExtractor(
                kind=ExtractorKind.GENERAL,
                backend=RemoteNerBackend(cfg.adapter_url, model="general"),
            ),
            KeywordExtractor(
                kind=ExtractorKind.SPECIALIZED,
                backend=RemoteNerBackend(cfg.adapter_url, model="specialized"),
            ),
        )
    return (
        build_general_extractor(cfg.general_gazetteer),
        build_specialized_extractor(cfg.specialized_gazetteer),
    )


def _embedding_provider(cfg: CliConfig):
    if cfg.embeddings:
        return FileEmbeddingProvider(_require_path(cfg.embeddings, "--embeddings"))
    if cfg.adapter_url:
        return RemoteEmbeddingProvider(cfg.adapter_url)
    return None


def _dm_json(d_m: float):
    return d_m if d_m != float("inf") else "inf"


def cmd_analyze(args: argparse.Namespace) -> int:
    from udl import report

    cfg = resolve_config(args)
    corpus = load_corpus(_require_path(args.corpus, "--corpus"), doc_cap=cfg.doc_cap)
    model = fit_tfidf(corpus, cfg.max_features)
    entropy = term_entropy(model)
    decision = decide_similarity_model(entropy, cfg.gamma)
    out = _outdir(args)
    payload = {
        "d_m": _dm_json(decision.d_m),
        "gamma": decision.gamma,
        "model": decision.model.value,
        "n_above": entropy.n_above,
        "n_at_or_below": entropy.n_at_or_below,
        "n_docs": len(corpus),
        "n_terms": model.vocab_size,
        "top_high_entropy": [[t, e] for t, e in entropy.top_terms(10, highest=True)],
        "top_low_entropy": [[t, e] for t, e in entropy.top_terms(10, highest=False)],
    }
    report.write_json(payload, out / "analyze.json")
    if not args.no_figures:
        report.entropy_figure(entropy, out / "entropy_hist.png", gamma=cfg.gamma)
    print(f"d_m={decision.d_m:.4f} gamma={cfg.gamma} model={decision.model.value}")
    return 0


def cmd_link(args: argparse.Namespace) -> int:
    from udl.synthesis import export_generation_units

    cfg = resolve_config(args)
    pipeline = cfg.pipeline_config()
    corpus = load_corpus(_require_path(args.corpus, "--corpus"), doc_cap=cfg.doc_cap)
    result = run_udl(
        corpus,
        pipeline,
        extractors=_extractors(cfg, args.ner_backend),
        embedding_provider=_embedding_provider(cfg),
    )
    out = _outdir(args)
    from udl import report

    report.write_json(result.decision_report(), out / "decision_report.json")
    write_links_jsonl(result.links, out / "links.jsonl")
    export_generation_units(result.units, out / "units.jsonl", n_queries=cfg.n_queries)
    if args.figures:
        report.entropy_figure(result.entropy_report, out / "entropy_hist.png", gamma=cfg.gamma)
        report.link_score_figure(
            result.neighbor_scores, result.threshold_decision.threshold, out / "link_scores.png"
        )
    rep = result.decision_report()
    print(
        f"model={rep['model']} doc_type={rep['doc_type']} threshold={rep['threshold']} "
        f"pairs={rep['n_pairs']} unlinked={rep['n_unlinked']}"
    )
    return 0


def cmd_export_units(args: argparse.Namespace) -> int:
    from udl.synthesis import load_generation_units, write_units

    if args.n_queries is not None and args.n_queries < 1:
        raise ConfigError("--n-queries must be at least 1")
    units = load_generation_units(_require_path(args.units, "--units"))
    if args.n_queries is not None:
        units = [dataclasses.replace(u, n_queries=args.n_queries) for u in units]
    if not args.out:
        raise ConfigError("--out is required")
    write_units(units, args.out)
    print(f"wrote {len(units)} units to {args.out}")
    return 0


def cmd_import_queries(args: argparse.Namespace) -> int:
    from udl.synthesis import emit_training_pairs, import_synthetic_queries, load_generation_units

    units = load_generation_units(_require_path(args.units, "--units"))
    pairs = import_synthetic_queries(_require_path(args.queries, "--queries"), units)
    if not args.out:
        raise ConfigError("--out is required")
    rows = emit_training_pairs(pairs, args.out)
    print(f"imported {len(pairs)} queries, wrote {rows} training rows to {args.out}")
    return 0


def cmd_stub_queries(args: argparse.Namespace) -> int:
    from udl.synthesis import load_generation_units, stub_queries

    units = load_generation_units(_require_path(args.units, "--units"))
    if not args.out:
        raise ConfigError("--out is required")
    written = stub_queries(units, args.out)
    print(f"wrote {written} stub queries to {args.out}")
    return 0


def cmd_quality(args: argparse.Namespace) -> int:
    from udl import report
    from udl.quality import quality_check
    from udl.synthesis import load_training_pairs

    cfg = resolve_config(args)
    corpus = load_corpus(_require_path(args.corpus, "--corpus"), doc_cap=cfg.doc_cap)
    train = load_queries(_require_path(args.queries, "--queries"))
    qrels = load_qrels(_require_path(args.qrels, "--qrels"))
    pairs = load_training_pairs(_require_path(args.pairs, "--pairs"))
    model = fit_tfidf(corpus, cfg.max_features)
    doc_vectors = lexical_vectors(model, ids=corpus.ids())
    texts = [q.text for q in train] + [p.query_text for p in pairs]
    ids = [q.id for q in train] + [p.query_id for p in pairs]
    query_vectors = VectorSet(
        source=doc_vectors.source,
        dim=model.vocab_size,
        vectors=transform_texts(model, texts),
        ids=ids,
    )
    quality = quality_check(train, qrels, pairs, query_vectors, doc_vectors)
    out = _outdir(args)
    report.write_json(quality.to_dict(), out / "quality.json")
    if not args.no_figures:
        report.quality_figure(quality, out / "quality.png")
    print(
        f"checked={len(quality.verdicts)} uncovered={len(quality.uncovered)} "
        f"fraction_both={quality.fraction_both:.4f} "
        f"fraction_single_mapped={quality.fraction_single_mapped:.4f}"
    )
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    from udl.evalir import rank_documents, write_run
    from udl.similarity import semantic_vectors

    cfg = resolve_config(args)
    if args.k < 1:
        raise ConfigError("--k must be at least 1")
    corpus = load_corpus(_require_path(args.corpus, "--corpus"), doc_cap=cfg.doc_cap)
    queries = load_queries(_require_path(args.queries, "--queries"))
    if args.vectors == "remote":
        if not cfg.adapter_url:
            raise ConfigError(f"--vectors remote needs --adapter-url or {ADAPTER_URL_ENV}")
        provider = RemoteEmbeddingProvider(cfg.adapter_url)
        doc_vectors = semantic_vectors(provider, corpus)
        qmat = provider.embed_texts([q.text for q in queries])
        query_vectors = VectorSet(
            source=doc_vectors.source, dim=doc_vectors.dim, vectors=qmat, ids=[q.id for q in queries]
        )
    else:
        model = fit_tfidf(corpus, cfg.max_features)
        doc_vectors = lexical_vectors(model, ids=corpus.ids())
        query_vectors = VectorSet(
            source=doc_vectors.source,
            dim=model.vocab_size,
            vectors=transform_texts(model, [q.text for q in queries]),
            ids=[q.id for q in queries],
        )
    run = rank_documents(query_vectors, doc_vectors, args.k)
    run.tag = args.tag
    if not args.out:
        raise ConfigError("--out is required")
    write_run(run, args.out)
    print(f"ranked {len(queries)} queries over {len(corpus)} docs, wrote {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    from udl.evalir import evaluate_run

    try:
        ks = [int(k) for k in str(args.k).split(",") if k.strip()]
    except ValueError:
        raise ConfigError(f"--k must be a comma-separated list of integers, got {args.k!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise ConfigError("--k cutoffs must be positive integers")
    result = evaluate_run(
        _require_path(args.run, "--run"), _require_path(args.qrels, "--qrels"), ks
    )
    payload = result.to_dict()
    print(json.dumps(payload, indent=2, ensure_ascii=False))
    if args.out:
        from udl import report

        report.write_json(payload, args.out)
        if args.figures:
            report.metrics_figure(result, Path(args.out).with_name("metrics.png"))
    elif args.figures:
        raise ConfigError("--figures needs --out to anchor the figure path")
    return 0


def cmd_demo(args: argparse.Namespace) -> int:
    from udl.demo import write_demo

    if not args.outdir:
        raise ConfigError("--outdir is required")
    paths = write_demo(args.outdir, seed=args.seed, n_docs=args.n_docs)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key=value settings file")
    sub.add_argument("--gamma", type=float, help="entropy-ratio cutoff for the model decision")
    sub.add_argument("--delta", type=float, help="lenient link threshold; strict is 1-delta")
    sub.add_argument("--max-features", type=int, dest="max_features")
    sub.add_argument("--doc-cap", type=int, dest="doc_cap", help="read at most this many documents")
    sub.add_argument("--merge", choices=[m.value for m in MergeStrategy])
    sub.add_argument("--seed", type=int)
    sub.add_argument("--n-queries", type=int, dest="n_queries")
    sub.add_argument("--threads", type=int)
    sub.add_argument("--adapter-url", dest="adapter_url", help="remote model service base URL")
    sub.add_argument("--embeddings", help="precomputed embeddings file")
    sub.add_argument("--general-gazetteer", dest="general_gazetteer")
    sub.add_argument("--specialized-gazetteer", dest="specialized_gazetteer")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="udl", description=__doc__)
    parser.add_argument("--log-level", default="warning", help="debug, info, warning, or error")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("analyze", help="entropy report and similarity-model decision")
    _add_config_flags(p)
    p.add_argument("--corpus")
    p.add_argument("--outdir")
    p.add_argument("--no-figures", action="store_true", dest="no_figures")
    p.set_defaults(func=cmd_analyze)

    p = commands.add_parser("link", help="run the full pipeline and write artifacts")
    _add_config_flags(p)
    p.add_argument("--corpus")
    p.add_argument("--outdir")
    p.add_argument("--ner-backend", choices=["gazetteer", "remote"], default="gazetteer")
    p.add_argument("--figures", action="store_true", help="also render diagnostic figures")
    p.set_defaults(func=cmd_link)

    p = commands.add_parser("export-units", help="restamp a units file with a new query budget")
    p.add_argument("--units")
    p.add_argument("--out")
    p.add_argument("--n-queries", type=int, dest="n_queries")
    p.set_defaults(func=cmd_export_units)

    p = commands.add_parser("import-queries", help="turn generated queries into training pairs")
    p.add_argument("--units")
    p.add_argument("--queries")
    p.add_argument("--out")
    p.set_defaults(func=cmd_import_queries)

    p = commands.add_parser("stub-queries", help="generate offline placeholder queries for units")
    p.add_argument("--units")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stub_queries)

    p = commands.add_parser("quality", help="score synthetic queries against train queries")
    _add_config_flags(p)
    p.add_argument("--corpus")
    p.add_argument("--queries", help="real train queries JSONL")
    p.add_argument("--qrels")
    p.add_argument("--pairs", help="training pairs TSV from import-queries")
    p.add_argument("--outdir")
    p.add_argument("--no-figures", action="store_true", dest="no_figures")
    p.set_defaults(func=cmd_quality)

    p = commands.add_parser("rank", help="write a TREC-format run for a query set")
    _add_config_flags(p)
    p.add_argument("--corpus")
    p.add_argument("--queries")
    p.add_argument("--out")
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--tag", default="udl")
    p.add_argument("--vectors", choices=["tfidf", "remote"], default="tfidf")
    p.set_defaults(func=cmd_rank)

    p = commands.add_parser("eval", help="NDCG and Recall for a run against qrels")
    p.add_argument("--run")
    p.add_argument("--qrels")
    p.add_argument("--k", default="1,10,100", help="comma-separated cutoffs")
    p.add_argument("--out", help="also write the metric JSON here")
    p.add_argument("--figures", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = commands.add_parser("demo", help="write the bundled synthetic corpus")
    p.add_argument("--outdir")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n-docs", type=int, dest="n_docs", default=200)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
