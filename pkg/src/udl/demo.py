"""Deterministic bundled corpus for demos and end-to-end tests.

The generator builds 200 synthetic documents from pronounceable nonsense
words: the first block is near-duplicate pairs (heavy token overlap, so they
link under the lenient threshold), the rest are standalones whose vectors
only meet through a handful of shared filler words.  Documents mention
entities from the bundled gazetteers so the keyword-ratio step has signal,
and a small query set with graded qrels exercises ranking and metrics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from udl.corpus import Corpus, Document, Qrels, Query, save_corpus, save_qrels, save_queries
from udl.gazetteers import GENERAL_PHRASES, SPECIALIZED_PHRASES

DEMO_SEED = 7
DEMO_N_DOCS = 200

_SYLLABLES = (
    "ba", "re", "mi", "to", "ka", "lu", "ne", "so", "vi", "da",
    "po", "chu", "ren", "tal", "mor", "sil", "ven", "har", "lin", "dor",
    "fen", "gal", "nor", "pel", "ras", "tem", "ul", "wex", "yor", "zan",
)


@dataclass
class DemoData:
    corpus: Corpus
    queries: list[Query]
    qrels: Qrels


def _word(rng: random.Random) -> str:
    # 3-4 syllables keeps accidental cross-document collisions rare, so the
    # high-entropy vocabulary stays confined to fillers and entity mentions.
    return "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(3, 4)))


def _sentence(rng: random.Random, theme: list[str], fillers: list[str]) -> str:
    tokens = []
    for _ in range(rng.randint(7, 10)):
        roll = rng.random()
        if roll < 0.45:
            tokens.append(rng.choice(theme))
        elif roll < 0.55:
            tokens.append(rng.choice(fillers))
        else:
            tokens.append(_word(rng))
    if rng.random() < 0.9:
        tokens.insert(rng.randrange(len(tokens)), rng.choice(GENERAL_PHRASES))
    if rng.random() < 0.08:
        tokens.insert(rng.randrange(len(tokens)), rng.choice(SPECIALIZED_PHRASES))
    return " ".join(tokens).capitalize() + "."


def _base_doc(rng: random.Random, fillers: list[str]) -> tuple[list[str], list[str], str]:
    """Returns (theme words, sentences, title)."""
    theme = [_word(rng) for _ in range(6)]
    sentences = [_sentence(rng, theme, fillers) for _ in range(6)]
    title = " ".join(rng.sample(theme, 3))
    return theme, sentences, title


def make_demo(seed: int = DEMO_SEED, n_docs: int = DEMO_N_DOCS) -> DemoData:
    if n_docs < 8:
        raise ValueError("demo corpus needs at least 8 documents")
    rng = random.Random(seed)
    fillers = [_word(rng) for _ in range(12)]
    n_pairs = max(1, (n_docs * 3) // 20)

    docs: list[Document] = []
    themes: list[list[str]] = []

    def doc_id() -> str:
        return f"doc-{len(docs) + 1:04d}"

    for _ in range(n_pairs):
        theme, sentences, title = _base_doc(rng, fillers)
        docs.append(Document(id=doc_id(), title=title, text=" ".join(sentences)))
        themes.append(theme)
        twin = list(sentences)
        twin[rng.randrange(len(twin))] = _sentence(rng, theme, fillers)
        rng.shuffle(twin)
        twin_title = " ".join(rng.sample(theme, 2) + [_word(rng)])
        docs.append(Document(id=doc_id(), title=twin_title, text=" ".join(twin)))
        themes.append(theme)

    while len(docs) < n_docs:
        theme, sentences, title = _base_doc(rng, fillers)
        docs.append(Document(id=doc_id(), title=title, text=" ".join(sentences)))
        themes.append(theme)

    queries: list[Query] = []
    entries: dict[tuple[str, str], int] = {}

    def add_query(text: str, relevant: dict[str, int]) -> None:
        qid = f"q-{len(queries) + 1:03d}"
        queries.append(Query(id=qid, text=text))
        for did, grade in relevant.items():
            entries[(qid, did)] = grade

    n_pair_queries = min(18, n_pairs)
    for i in range(n_pair_queries):
        theme = themes[2 * i]
        text = " ".join(rng.sample(theme, 4) + [rng.choice(fillers)])
        a, b = docs[2 * i].id, docs[2 * i + 1].id
        add_query(text, {a: 1, b: 1})

    first_single = 2 * n_pairs
    n_single_queries = min(12, n_docs - first_single)
    for j in range(n_single_queries):
        pos = first_single + (j * 7) % (n_docs - first_single)
        text = " ".join(rng.sample(themes[pos], 4))
        add_query(text, {docs[pos].id: 1 + (j % 2)})

    return DemoData(corpus=Corpus(documents=docs), queries=queries, qrels=Qrels(entries=entries))


def write_demo(outdir: str | Path, seed: int = DEMO_SEED, n_docs: int = DEMO_N_DOCS) -> dict[str, Path]:
    """Materialize the demo corpus, queries, and qrels under outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = make_demo(seed=seed, n_docs=n_docs)
    paths = {
        "corpus": outdir / "corpus.jsonl",
        "queries": outdir / "queries.jsonl",
        "qrels": outdir / "qrels.tsv",
    }
    save_corpus(data.corpus, paths["corpus"])
    save_queries(data.queries, paths["queries"])
    save_qrels(data.qrels, paths["qrels"])
    return paths
