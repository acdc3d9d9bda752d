"""End-to-end pipeline: model decision, threshold decision, linking, merging.

A document is linked to its single nearest neighbor when their cosine
similarity strictly exceeds the decided threshold.  Linked pairs are merged
into generation units (concatenation by default, seeded sentence permutation
as an alternative); every document outside any pair becomes a singleton unit.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from udl.corpus import Corpus, Document
from udl.errors import ConfigError
from udl.keywords import (
    DEFAULT_DELTA,
    KeywordExtractor,
    ThresholdDecision,
    count_keywords,
    decide_threshold,
    normalize_corpus,
)
from udl.lexical import (
    DEFAULT_GAMMA,
    DEFAULT_MAX_FEATURES,
    EntropyReport,
    ModelDecision,
    SimilarityModel,
    decide_similarity_model,
    fit_tfidf,
    term_entropy,
)
from udl.similarity import NeighborList, lexical_vectors, nearest_neighbors, semantic_vectors

# Corpora beyond this size are truncated to DEFAULT_DOC_CAP unless a cap is given.
LARGE_CORPUS_SIZE = 1_000_000
DEFAULT_DOC_CAP = 30000
DEFAULT_N_QUERIES = 3


class MergeStrategy(str, Enum):
    CONCATENATION = "concatenation"
    RANDOM_PERMUTATION = "random-permutation"


@dataclass
class PipelineConfig:
    gamma: float = DEFAULT_GAMMA
    delta: float = DEFAULT_DELTA
    max_features: int = DEFAULT_MAX_FEATURES
    doc_cap: int | None = None
    merge_strategy: MergeStrategy = MergeStrategy.CONCATENATION
    seed: int = 42
    n_queries_per_unit: int = DEFAULT_N_QUERIES
    threads: int = 1

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigError("gamma must be positive")
        if not 0 < self.delta < 0.5:
            raise ConfigError("delta must lie strictly between 0 and 0.5")
        if self.max_features < 1:
            raise ConfigError("max_features must be a positive integer")
        if self.doc_cap is not None and self.doc_cap < 1:
            raise ConfigError("doc_cap must be a positive integer")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.n_queries_per_unit < 1:
            raise ConfigError("n_queries_per_unit must be at least 1")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")


def effective_doc_cap(n_docs: int, doc_cap: int | None) -> int | None:
    """Explicit cap wins; very large corpora fall back to the default cap."""
    if doc_cap is not None:
        return doc_cap
    return DEFAULT_DOC_CAP if n_docs > LARGE_CORPUS_SIZE else None


@dataclass(frozen=True)
class LinkedPair:
    a: str  # proposing document
    b: str  # its nearest neighbor
    score: float


@dataclass
class LinkSet:
    pairs: list[LinkedPair]
    unlinked: list[str]


@dataclass(frozen=True)
class MergedDocument:
    unit_id: str
    source_ids: tuple[str, ...]
    text: str


def link_documents(nn: NeighborList, threshold: float) -> LinkSet:
    """Keep (doc, nearest-neighbor) pairs whose score strictly exceeds threshold.

    Mutual-nearest duplicates collapse to the proposal from the lower-ordinal
    document.  A document may sit in several pairs when it is the nearest
    neighbor of several proposers.
    """
    ids = nn.ids if nn.ids is not None else [str(i) for i in range(len(nn))]
    pairs: list[LinkedPair] = []
    seen: set[tuple[int, int]] = set()
    in_pair: set[int] = set()
    for i in range(len(nn)):
        score = float(nn.scores[i])
        j = int(nn.neighbor_indices[i])
        if score > threshold:
            key = (i, j) if i < j else (j, i)
            if key in seen:
                continue
            seen.add(key)
            pairs.append(LinkedPair(a=ids[i], b=ids[j], score=score))
            in_pair.update((i, j))
    unlinked = [ids[k] for k in range(len(nn)) if k not in in_pair]
    return LinkSet(pairs=pairs, unlinked=unlinked)


def titled_text(doc: Document) -> str:
    """Title-prefixed body: "<title>. <text>", or just the text when untitled."""
    title = doc.title.strip()
    return f"{title}. {doc.text}" if title else doc.text


_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+")


def _sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]


def merge_pair(
    a: Document,
    b: Document,
    strategy: MergeStrategy = MergeStrategy.CONCATENATION,
    seed: int = 0,
    unit_id: str | None = None,
) -> MergedDocument:
    """Merge two linked documents into one generation unit.

    Concatenation keeps each source intact and in order.  Random permutation
    pools both bodies' sentences, shuffles them with the seeded generator, and
    refills the two blocks at their original sizes; each title stays at the
    front of its own block.
    """
    if unit_id is None:
        unit_id = f"{a.id}+{b.id}"
    if strategy is MergeStrategy.CONCATENATION:
        text = f"{titled_text(a)} {titled_text(b)}"
    else:
        sa, sb = _sentences(a.text), _sentences(b.text)
        pool = sa + sb
        random.Random(seed).shuffle(pool)
        blocks = []
        for doc, chunk in ((a, pool[: len(sa)]), (b, pool[len(sa) :])):
            parts = ([doc.title.strip()] if doc.title.strip() else []) + chunk
            if parts:
                blocks.append(". ".join(parts) + ".")
        text = " ".join(blocks)
    return MergedDocument(unit_id=unit_id, source_ids=(a.id, b.id), text=text)


def merged_units(corpus: Corpus, links: LinkSet, config: PipelineConfig) -> list[MergedDocument]:
    """Pair units in link order, then singleton units in corpus order."""
    units: list[MergedDocument] = []
    counter = 0
    for pair in links.pairs:
        units.append(
            merge_pair(
                corpus[pair.a],
                corpus[pair.b],
                strategy=config.merge_strategy,
                seed=config.seed,
                unit_id=f"unit-{counter:06d}",
            )
        )
        counter += 1
    for doc_id in links.unlinked:
        doc = corpus[doc_id]
        units.append(
            MergedDocument(
                unit_id=f"unit-{counter:06d}", source_ids=(doc.id,), text=titled_text(doc)
            )
        )
        counter += 1
    return units


@dataclass
class UdlResult:
    model_decision: ModelDecision
    threshold_decision: ThresholdDecision
    links: LinkSet
    units: list[MergedDocument]
    entropy_report: EntropyReport = field(repr=False, default=None)
    neighbor_scores: list[float] = field(repr=False, default_factory=list)

    def decision_report(self) -> dict:
        d_m = self.model_decision.d_m
        return {
            "d_m": d_m if d_m != float("inf") else "inf",
            "gamma": self.model_decision.gamma,
            "model": self.model_decision.model.value,
            "k_general": self.threshold_decision.k_general,
            "k_specialized": self.threshold_decision.k_specialized,
            "v_general": self.threshold_decision.v_general,
            "v_specialized": self.threshold_decision.v_specialized,
            "delta": self.threshold_decision.delta,
            "doc_type": self.threshold_decision.doc_type.value,
            "threshold": self.threshold_decision.threshold,
            "n_pairs": len(self.links.pairs),
            "n_unlinked": len(self.links.unlinked),
        }


def run_udl(
    corpus: Corpus,
    config: PipelineConfig,
    extractors: tuple[KeywordExtractor, KeywordExtractor],
    embedding_provider=None,
    translator=None,
) -> UdlResult:
    """Run the full linking pipeline over one corpus.

    extractors is the (general, specialized) pair.  embedding_provider is
    only consulted when the entropy ratio selects semantic similarity; its
    absence in that case is a configuration error raised before any further
    compute.
    """
    if len(corpus) < 2:
        raise ValueError("pipeline needs a corpus of at least 2 documents")
    tfidf = fit_tfidf(corpus, config.max_features)
    report = term_entropy(tfidf)
    model_decision = decide_similarity_model(report, config.gamma)
    if model_decision.model is SimilarityModel.SEMANTIC and embedding_provider is None:
        raise ConfigError(
            "entropy ratio selected the semantic similarity model "
            f"(d_m={model_decision.d_m:.4f} > gamma={config.gamma}) "
            "but no embedding provider is configured"
        )

    general, specialized = extractors
    normalized = normalize_corpus(corpus, translator)
    k_general = count_keywords(general, normalized)
    k_specialized = count_keywords(specialized, normalized)
    threshold_decision = decide_threshold(
        k_general,
        k_specialized,
        general.effective_vocabulary_size(),
        specialized.effective_vocabulary_size(),
        config.delta,
    )

    if model_decision.model is SimilarityModel.SEMANTIC:
        vectors = semantic_vectors(embedding_provider, corpus)
    else:
        vectors = lexical_vectors(tfidf, ids=corpus.ids())
    nn = nearest_neighbors(vectors, threads=config.threads)
    links = link_documents(nn, threshold_decision.threshold)
    units = merged_units(corpus, links, config)
    return UdlResult(
        model_decision=model_decision,
        threshold_decision=threshold_decision,
        links=links,
        units=units,
        entropy_report=report,
        neighbor_scores=[float(s) for s in nn.scores],
    )


def write_links_jsonl(links: LinkSet, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for pair in links.pairs:
            fh.write(
                json.dumps({"a": pair.a, "b": pair.b, "score": pair.score}, ensure_ascii=False)
                + "\n"
            )


