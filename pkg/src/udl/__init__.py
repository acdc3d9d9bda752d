"""Entropy- and keyword-guided document linking for zero-shot retrieval.

The pipeline picks lexical or semantic document vectors from the corpus's
term-entropy profile, picks a link threshold from the ratio of general to
specialized keyword mentions, links each document to its nearest neighbor
above that threshold, and merges linked pairs into units for synthetic query
generation.
"""

from udl.corpus import Corpus, Document, Qrels, Query, load_corpus, load_qrels, load_queries
from udl.errors import ConfigError, CoverageError, DataError, TransportError, UdlError
from udl.evalir import Run, evaluate_run, ndcg_at_k, rank_documents, recall_at_k
from udl.keywords import (
    DocumentType,
    KeywordExtractor,
    ThresholdDecision,
    count_keywords,
    decide_threshold,
)
from udl.lexical import (
    EntropyReport,
    ModelDecision,
    SimilarityModel,
    TfidfModel,
    decide_similarity_model,
    fit_tfidf,
    term_entropy,
)
from udl.linker import (
    LinkSet,
    MergedDocument,
    MergeStrategy,
    PipelineConfig,
    UdlResult,
    link_documents,
    merge_pair,
    run_udl,
)
from udl.quality import QualityReport, QualityVerdict, quality_check
from udl.similarity import VectorSet, cosine, nearest_neighbors
from udl.synthesis import (
    GenerationUnit,
    TrainingPair,
    emit_training_pairs,
    export_generation_units,
    import_synthetic_queries,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Corpus",
    "CoverageError",
    "DataError",
    "Document",
    "DocumentType",
    "EntropyReport",
    "GenerationUnit",
    "KeywordExtractor",
    "LinkSet",
    "MergeStrategy",
    "MergedDocument",
    "ModelDecision",
    "PipelineConfig",
    "Qrels",
    "QualityReport",
    "QualityVerdict",
    "Query",
    "Run",
    "SimilarityModel",
    "TfidfModel",
    "ThresholdDecision",
    "TrainingPair",
    "TransportError",
    "UdlError",
    "UdlResult",
    "VectorSet",
    "cosine",
    "count_keywords",
    "decide_similarity_model",
    "decide_threshold",
    "emit_training_pairs",
    "evaluate_run",
    "export_generation_units",
    "fit_tfidf",
    "import_synthetic_queries",
    "link_documents",
    "load_corpus",
    "load_qrels",
    "load_queries",
    "merge_pair",
    "ndcg_at_k",
    "nearest_neighbors",
    "quality_check",
    "rank_documents",
    "recall_at_k",
    "run_udl",
    "term_entropy",
]
