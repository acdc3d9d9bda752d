"""Tokenization, TF-IDF fitting, per-term entropy, and the similarity-model decision.

The model decision works off the ratio of high-entropy to low-entropy terms:
terms whose weight mass is spread near-uniformly across many documents (most
function words) carry more than 1 bit of entropy, terms concentrated in a few
documents carry less.  A corpus dominated by the former is a poor fit for
lexical matching, so the pipeline switches to a semantic vector source.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse

from udl.corpus import Corpus

DEFAULT_MAX_FEATURES = 36000
DEFAULT_GAMMA = 0.7

# Unicode letters and digits, underscore excluded; applied after lowercasing.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop single-character tokens."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


def document_terms(title: str, text: str) -> list[str]:
    """Token stream of one document; titles participate in term statistics."""
    return tokenize(title + " " + text if title else text)


@dataclass
class TfidfModel:
    """Fitted term weights over one corpus.

    terms holds the vocabulary in column order (lexicographic); doc_vectors is
    a CSR matrix with one L2-normalized row per document (zero row when the
    document has no in-vocabulary token).
    """

    vocabulary: dict[str, int]
    terms: list[str]
    idf: np.ndarray
    df: np.ndarray
    doc_vectors: sparse.csr_matrix
    n_docs: int

    @property
    def vocab_size(self) -> int:
        return len(self.terms)


def _count_rows(token_lists: list[list[str]], vocabulary: dict[str, int]) -> sparse.csr_matrix:
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for tokens in token_lists:
        counts: dict[int, int] = {}
        for tok in tokens:
            col = vocabulary.get(tok)
            if col is not None:
                counts[col] = counts.get(col, 0) + 1
        for col in sorted(counts):
            indices.append(col)
            data.append(float(counts[col]))
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(token_lists), len(vocabulary)),
    )


def _l2_normalize_rows(mat: sparse.csr_matrix) -> sparse.csr_matrix:
    mat = mat.tocsr().astype(np.float64)
    norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sparse.diags(scale) @ mat


def fit_tfidf(corpus: Corpus, max_features: int = DEFAULT_MAX_FEATURES) -> TfidfModel:
    """Fit term weights: tf * (ln((1+N)/(1+df)) + 1), rows L2-normalized.

    When the raw vocabulary exceeds max_features, the terms with the highest
    total occurrence count are kept, ties broken lexicographically.
    """
    if len(corpus) == 0:
        raise ValueError("cannot fit term weights on an empty corpus")
    if max_features < 1:
        raise ValueError("max_features must be a positive integer")

    token_lists = [document_terms(d.title, d.text) for d in corpus]
    total_counts: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    for tokens in token_lists:
        seen_here: set[str] = set()
        for tok in tokens:
            total_counts[tok] = total_counts.get(tok, 0) + 1
            if tok not in seen_here:
                seen_here.add(tok)
                doc_freq[tok] = doc_freq.get(tok, 0) + 1

    if len(total_counts) > max_features:
        ranked = sorted(total_counts, key=lambda t: (-total_counts[t], t))
        kept = ranked[:max_features]
    else:
        kept = list(total_counts)
    terms = sorted(kept)
    vocabulary = {t: i for i, t in enumerate(terms)}

    n = len(corpus)
    df = np.array([doc_freq[t] for t in terms], dtype=np.int64)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0

    counts = _count_rows(token_lists, vocabulary)
    weighted = counts @ sparse.diags(idf)
    return TfidfModel(
        vocabulary=vocabulary,
        terms=terms,
        idf=idf,
        df=df,
        doc_vectors=_l2_normalize_rows(weighted),
        n_docs=n,
    )


def transform_texts(model: TfidfModel, texts: list[str]) -> sparse.csr_matrix:
    """Weight new texts (e.g. queries) in the fitted vocabulary."""
    token_lists = [tokenize(t) for t in texts]
    counts = _count_rows(token_lists, model.vocabulary)
    return _l2_normalize_rows(counts @ sparse.diags(model.idf))


@dataclass
class EntropyReport:
    per_term_entropy: dict[str, float]
    n_above: int
    n_at_or_below: int

    @property
    def d_m(self) -> float:
        if self.n_at_or_below == 0:
            return math.inf
        return self.n_above / self.n_at_or_below

    def top_terms(self, n: int = 20, highest: bool = True) -> list[tuple[str, float]]:
        key = (lambda kv: (-kv[1], kv[0])) if highest else (lambda kv: (kv[1], kv[0]))
        return sorted(self.per_term_entropy.items(), key=key)[:n]


def term_entropy(model: TfidfModel) -> EntropyReport:
    """Shannon entropy (bits) of each term's weight distribution across documents.

    For term t with weights w_i over the documents where it occurs,
    P_i = w_i / sum_j w_j and E = -sum_i P_i * log2(P_i).  A term confined to
    one document scores 0; one spread uniformly over df documents scores
    log2(df).
    """
    csc = model.doc_vectors.tocsc()
    data = csc.data
    starts = csc.indptr[:-1]
    lengths = np.diff(csc.indptr)
    entropies = np.zeros(model.vocab_size, dtype=np.float64)
    occupied = lengths > 0
    if data.size:
        col_sums = np.add.reduceat(data, starts[occupied])
        p = data / np.repeat(col_sums, lengths[occupied])
        contrib = -p * np.log2(p)
        entropies[occupied] = np.add.reduceat(contrib, starts[occupied])
        # -p*log2(p) rounds to -0.0 when p == 1; keep entropies non-negative
        np.maximum(entropies, 0.0, out=entropies)

    per_term = {t: float(entropies[i]) for i, t in enumerate(model.terms)}
    n_above = int(np.count_nonzero(entropies > 1.0))
    return EntropyReport(
        per_term_entropy=per_term,
        n_above=n_above,
        n_at_or_below=model.vocab_size - n_above,
    )


class SimilarityModel(str, Enum):
    LEXICAL = "tfidf"
    SEMANTIC = "lm"


@dataclass(frozen=True)
class ModelDecision:
    model: SimilarityModel
    d_m: float
    gamma: float


def decide_similarity_model(report: EntropyReport, gamma: float = DEFAULT_GAMMA) -> ModelDecision:
    """Semantic vectors iff the high/low entropy ratio strictly exceeds gamma."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    d_m = report.d_m
    model = SimilarityModel.SEMANTIC if d_m > gamma else SimilarityModel.LEXICAL
    return ModelDecision(model=model, d_m=d_m, gamma=gamma)
