"""Check whether synthetic queries map their source documents.

Each synthetic query is compared against a real train query that is relevant
to the same document(s).  For a linked unit the comparator must be relevant
to both sources; among several such queries the one with the highest
min(score to a, score to b) is used.  All comparisons are strict, so equal
scores never count as mapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from udl.corpus import Qrels, Query
from udl.errors import CoverageError
from udl.similarity import VectorSet, cosine
from udl.synthesis import TrainingPair


class QualityVerdict(str, Enum):
    BOTH_MAPPED = "BothMapped"
    MAPS_A_ONLY = "MapsAOnly"
    MAPS_B_ONLY = "MapsBOnly"
    NEITHER = "Neither"
    SINGLE_MAPPED = "SingleMapped"
    SINGLE_NOT_MAPPED = "SingleNotMapped"


_PAIR_VERDICTS = frozenset(
    {QualityVerdict.BOTH_MAPPED, QualityVerdict.MAPS_A_ONLY, QualityVerdict.MAPS_B_ONLY, QualityVerdict.NEITHER}
)


def classify_pair(
    train_a: float, train_b: float, synthetic_a: float, synthetic_b: float
) -> QualityVerdict:
    """Strict-inequality branch table for a two-document unit."""
    beats_a = synthetic_a > train_a
    beats_b = synthetic_b > train_b
    if beats_a and beats_b:
        return QualityVerdict.BOTH_MAPPED
    if beats_a:
        return QualityVerdict.MAPS_A_ONLY
    if beats_b:
        return QualityVerdict.MAPS_B_ONLY
    return QualityVerdict.NEITHER


def classify_single(train_a: float, synthetic_a: float) -> QualityVerdict:
    return QualityVerdict.SINGLE_MAPPED if synthetic_a > train_a else QualityVerdict.SINGLE_NOT_MAPPED


@dataclass(frozen=True)
class UnitVerdict:
    query_id: str
    doc_ids: tuple[str, ...]
    comparator_query_id: str
    verdict: QualityVerdict
    train_score_a: float
    synthetic_score_a: float
    train_score_b: float | None = None
    synthetic_score_b: float | None = None


@dataclass
class QualityReport:
    verdicts: list[UnitVerdict]
    uncovered: list[str] = field(default_factory=list)  # query ids with no qualifying train query

    @property
    def fraction_both(self) -> float:
        pair = [v for v in self.verdicts if v.verdict in _PAIR_VERDICTS]
        if not pair:
            return 0.0
        both = sum(1 for v in pair if v.verdict is QualityVerdict.BOTH_MAPPED)
        return both / len(pair)

    @property
    def fraction_single_mapped(self) -> float:
        single = [v for v in self.verdicts if v.verdict not in _PAIR_VERDICTS]
        if not single:
            return 0.0
        mapped = sum(1 for v in single if v.verdict is QualityVerdict.SINGLE_MAPPED)
        return mapped / len(single)

    def to_dict(self) -> dict:
        return {
            "n_checked": len(self.verdicts),
            "n_uncovered": len(self.uncovered),
            "fraction_both": self.fraction_both,
            "fraction_single_mapped": self.fraction_single_mapped,
            "verdict_counts": self.verdict_counts(),
            "verdicts": [
                {
                    "query_id": v.query_id,
                    "doc_ids": list(v.doc_ids),
                    "comparator_query_id": v.comparator_query_id,
                    "verdict": v.verdict.value,
                    "train_score_a": v.train_score_a,
                    "synthetic_score_a": v.synthetic_score_a,
                    "train_score_b": v.train_score_b,
                    "synthetic_score_b": v.synthetic_score_b,
                }
                for v in self.verdicts
            ],
            "uncovered": list(self.uncovered),
        }

    def verdict_counts(self) -> dict[str, int]:
        counts = {v.value: 0 for v in QualityVerdict}
        for v in self.verdicts:
            counts[v.verdict.value] += 1
        return counts


def _vectors_by_id(vs: VectorSet, label: str) -> dict:
    if vs.ids is None:
        raise CoverageError(f"{label} vectors carry no ids")
    return {doc_id: vs.vectors[i] for i, doc_id in enumerate(vs.ids)}


def quality_check(
    train_queries: list[Query],
    qrels: Qrels,
    synthetic_pairs: list[TrainingPair],
    query_vectors: VectorSet,
    doc_vectors: VectorSet,
) -> QualityReport:
    """Score every synthetic query against the best-covering train query.

    query_vectors must cover both train and synthetic query ids; doc_vectors
    must cover every positive document.  Synthetic queries whose unit has no
    train query relevant to all of its documents are skipped and listed as
    uncovered.
    """
    qvec = _vectors_by_id(query_vectors, "query")
    dvec = _vectors_by_id(doc_vectors, "document")

    def vector_for(mapping: dict, key: str, label: str):
        try:
            return mapping[key]
        except KeyError:
            raise CoverageError(f"no vector for {label} {key!r}") from None

    verdicts: list[UnitVerdict] = []
    uncovered: list[str] = []
    for pair in synthetic_pairs:
        docs = pair.positive_doc_ids
        candidates = [
            q for q in train_queries if all(qrels.grade(q.id, d) > 0 for d in docs)
        ]
        if not candidates:
            uncovered.append(pair.query_id)
            continue
        doc_vecs = [vector_for(dvec, d, "document") for d in docs]

        def min_score(query: Query) -> float:
            qv = vector_for(qvec, query.id, "train query")
            return min(cosine(qv, dv) for dv in doc_vecs)

        comparator = max(candidates, key=min_score)
        cvec = vector_for(qvec, comparator.id, "train query")
        svec = vector_for(qvec, pair.query_id, "synthetic query")
        train_scores = [cosine(cvec, dv) for dv in doc_vecs]
        synth_scores = [cosine(svec, dv) for dv in doc_vecs]
        if len(docs) == 2:
            verdict = classify_pair(train_scores[0], train_scores[1], synth_scores[0], synth_scores[1])
            verdicts.append(
                UnitVerdict(
                    query_id=pair.query_id,
                    doc_ids=docs,
                    comparator_query_id=comparator.id,
                    verdict=verdict,
                    train_score_a=train_scores[0],
                    synthetic_score_a=synth_scores[0],
                    train_score_b=train_scores[1],
                    synthetic_score_b=synth_scores[1],
                )
            )
        else:
            verdict = classify_single(train_scores[0], synth_scores[0])
            verdicts.append(
                UnitVerdict(
                    query_id=pair.query_id,
                    doc_ids=docs,
                    comparator_query_id=comparator.id,
                    verdict=verdict,
                    train_score_a=train_scores[0],
                    synthetic_score_a=synth_scores[0],
                )
            )
    return QualityReport(verdicts=verdicts, uncovered=uncovered)
