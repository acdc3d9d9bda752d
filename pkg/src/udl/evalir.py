"""Cosine ranking plus NDCG@k / Recall@k against graded qrels.

Rankings sort by descending score with ties broken by ascending doc id, so a
run file is byte-reproducible.  NDCG uses exponential gain (2^rel - 1) and is
averaged over every query that has a qrels entry; Recall is averaged over
queries with at least one positively graded document.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from udl.corpus import Qrels, load_qrels
from udl.errors import FormatError, ParseError, ValidationError
from udl.similarity import VectorSet, unit_rows

log = logging.getLogger(__name__)

DEFAULT_KS = (1, 10, 100)
DEFAULT_RUN_TAG = "udl"


@dataclass
class Run:
    """Per query: (doc_id, score) descending, ties by ascending doc_id."""

    rankings: dict[str, list[tuple[str, float]]]
    tag: str = DEFAULT_RUN_TAG


def rank_documents(query_vectors: VectorSet, doc_vectors: VectorSet, k: int) -> Run:
    """Top-k documents per query by cosine; k beyond the corpus means all."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if query_vectors.ids is None or doc_vectors.ids is None:
        raise ValueError("ranking needs id-carrying vector sets")
    if query_vectors.dim != doc_vectors.dim:
        raise ValueError(
            f"dimension mismatch: queries {query_vectors.dim}, documents {doc_vectors.dim}"
        )
    q = unit_rows(query_vectors.vectors)
    d = unit_rows(doc_vectors.vectors)
    sims = q @ (d.T.tocsc() if sparse.issparse(d) else d.T)
    if sparse.issparse(sims):
        sims = sims.toarray()
    sims = np.asarray(sims)
    doc_ids = doc_vectors.ids
    rankings: dict[str, list[tuple[str, float]]] = {}
    for qi, qid in enumerate(query_vectors.ids):
        row = sims[qi]
        order = sorted(range(len(doc_ids)), key=lambda j: (-row[j], doc_ids[j]))[:k]
        rankings[qid] = [(doc_ids[j], float(row[j])) for j in order]
    return Run(rankings=rankings)


def _dcg(gains: list[int]) -> float:
    return sum((2.0**g - 1.0) / math.log2(i + 2) for i, g in enumerate(gains))


def per_query_ndcg(run: Run, qrels: Qrels, k: int) -> dict[str, float]:
    """NDCG@k for every query with a qrels entry (0 when nothing relevant)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out: dict[str, float] = {}
    for qid, graded in qrels.by_query().items():
        ranked = run.rankings.get(qid, [])
        gains = [graded.get(doc_id, 0) for doc_id, _ in ranked[:k]]
        ideal = sorted(graded.values(), reverse=True)[:k]
        idcg = _dcg(ideal)
        out[qid] = _dcg(gains) / idcg if idcg > 0 else 0.0
    return out


def per_query_recall(run: Run, qrels: Qrels, k: int) -> dict[str, float]:
    """Recall@k for every query with at least one positively graded doc."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out: dict[str, float] = {}
    for qid, graded in qrels.by_query().items():
        relevant = {doc_id for doc_id, grade in graded.items() if grade > 0}
        if not relevant:
            continue
        ranked = run.rankings.get(qid, [])
        hits = sum(1 for doc_id, _ in ranked[:k] if doc_id in relevant)
        out[qid] = hits / len(relevant)
    return out


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def ndcg_at_k(run: Run, qrels: Qrels, k: int) -> float:
    return _mean(per_query_ndcg(run, qrels, k).values())


def recall_at_k(run: Run, qrels: Qrels, k: int) -> float:
    return _mean(per_query_recall(run, qrels, k).values())


@dataclass
class EvalResult:
    ks: list[int]
    ndcg: dict[int, float]
    recall: dict[int, float]
    per_query: dict[str, dict[str, float]]
    excluded_query_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ks": list(self.ks),
            "ndcg": {str(k): v for k, v in self.ndcg.items()},
            "recall": {str(k): v for k, v in self.recall.items()},
            "per_query": self.per_query,
            "excluded_query_ids": list(self.excluded_query_ids),
        }


def evaluate(run: Run, qrels: Qrels, ks=DEFAULT_KS) -> EvalResult:
    ks = sorted(set(int(k) for k in ks))
    if not ks:
        raise ValueError("need at least one cutoff")
    known = set(qrels.by_query())
    excluded = sorted(set(run.rankings) - known)
    if excluded:
        log.warning("run has %d query ids absent from qrels: %s", len(excluded), excluded[:10])
    per_query: dict[str, dict[str, float]] = {}
    ndcg: dict[int, float] = {}
    recall: dict[int, float] = {}
    for k in ks:
        nq = per_query_ndcg(run, qrels, k)
        rq = per_query_recall(run, qrels, k)
        ndcg[k] = _mean(nq.values())
        recall[k] = _mean(rq.values())
        for qid, value in nq.items():
            per_query.setdefault(qid, {})[f"ndcg@{k}"] = value
        for qid, value in rq.items():
            per_query.setdefault(qid, {})[f"recall@{k}"] = value
    return EvalResult(
        ks=ks, ndcg=ndcg, recall=recall, per_query=per_query, excluded_query_ids=excluded
    )


def evaluate_run(run_path: str | Path, qrels_path: str | Path, ks=DEFAULT_KS) -> EvalResult:
    return evaluate(read_run(run_path), load_qrels(qrels_path), ks)


def write_run(run: Run, path: str | Path) -> None:
    """TREC format: "query_id Q0 doc_id rank score tag", ranks from 1."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for qid, ranked in run.rankings.items():
            for rank, (doc_id, score) in enumerate(ranked, start=1):
                fh.write(f"{qid} Q0 {doc_id} {rank} {score:.6f} {run.tag}\n")


def read_run(path: str | Path) -> Run:
    by_query: dict[str, list[tuple[int, str, float]]] = {}
    seen: set[tuple[str, str]] = set()
    tag = DEFAULT_RUN_TAG
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cells = line.split()
            if len(cells) != 6:
                raise ParseError(f"{path}:{lineno}: expected 6 fields, got {len(cells)}")
            qid, _, doc_id, rank_str, score_str, tag = cells
            try:
                rank, score = int(rank_str), float(score_str)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad rank or score: {exc}") from exc
            if (qid, doc_id) in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate doc {doc_id!r} for query {qid!r}")
            seen.add((qid, doc_id))
            by_query.setdefault(qid, []).append((rank, doc_id, score))
    rankings: dict[str, list[tuple[str, float]]] = {}
    for qid, rows in by_query.items():
        rows.sort(key=lambda r: r[0])
        ranks = [r[0] for r in rows]
        if ranks != list(range(1, len(rows) + 1)):
            raise FormatError(f"{path}: ranks for query {qid!r} are not contiguous from 1")
        rankings[qid] = [(doc_id, score) for _, doc_id, score in rows]
    return Run(rankings=rankings, tag=tag)
