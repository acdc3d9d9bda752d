"""Document vectors, cosine similarity, and exact nearest-neighbor search.

Nearest neighbors are computed by blocked exact all-pairs products rather
than an approximate index: at the 30K-60K document scale this pipeline caps
corpora to, the O(n^2) pass stays tractable and removes a source of error.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests
from scipy import sparse

from udl.corpus import Corpus
from udl.errors import CoverageError, FormatError, TransportError, ValidationError
from udl.lexical import SimilarityModel, TfidfModel

_BLOCK_BUDGET = 8_388_608  # floats per score block (~64 MB)


@dataclass
class VectorSet:
    """One vector per document, aligned to corpus order.

    vectors is a CSR matrix (lexical) or a dense float array (semantic); ids
    optionally carries the aligned document ids for downstream ranking.
    """

    source: SimilarityModel
    dim: int
    vectors: sparse.csr_matrix | np.ndarray
    ids: list[str] | None = None

    def __len__(self) -> int:
        return self.vectors.shape[0]


def lexical_vectors(model: TfidfModel, ids: list[str] | None = None) -> VectorSet:
    """The fitted model's L2-normalized document rows."""
    return VectorSet(
        source=SimilarityModel.LEXICAL,
        dim=model.vocab_size,
        vectors=model.doc_vectors,
        ids=ids,
    )


class FileEmbeddingProvider:
    """Precomputed embeddings: a dim/count header line, then id/vector records."""

    def __init__(self, path: str | Path):
        path = Path(path)
        self.dim: int | None = None
        self._by_id: dict[str, np.ndarray] = {}
        with path.open("r", encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            self.dim = int(header["dim"])
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                obj = json.loads(line)
                vec = np.asarray(obj["vector"], dtype=np.float64)
                if vec.shape != (self.dim,):
                    raise FormatError(
                        f"{path}:{lineno}: vector of dim {vec.shape[0]}, expected {self.dim}"
                    )
                if obj["id"] in self._by_id:
                    raise ValidationError(f"{path}:{lineno}: duplicate embedding id {obj['id']!r}")
                self._by_id[obj["id"]] = vec

    def corpus_vectors(self, corpus: Corpus) -> np.ndarray:
        missing = [d.id for d in corpus if d.id not in self._by_id]
        if missing:
            shown = ", ".join(repr(m) for m in missing[:10])
            more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
            raise CoverageError(f"embeddings file missing ids: {shown}{more}")
        return np.stack([self._by_id[d.id] for d in corpus])


class RemoteEmbeddingProvider:
    """Client for the sidecar's POST /embed endpoint."""

    def __init__(self, base_url: str, batch_size: int = 32, timeout: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.batch_size = batch_size
        self.timeout = timeout
        self.dim: int | None = None

    def embed_texts(self, texts: list[str]) -> np.ndarray:
        rows: list[np.ndarray] = []
        for start in range(0, len(texts), self.batch_size):
            batch = texts[start : start + self.batch_size]
            try:
                resp = requests.post(
                    f"{self.base_url}/embed", json={"texts": batch}, timeout=self.timeout
                )
                resp.raise_for_status()
                payload = resp.json()
            except requests.RequestException as exc:
                raise TransportError(f"embedding service at {self.base_url} failed: {exc}") from exc
            dim = int(payload["dim"])
            if self.dim is None:
                self.dim = dim
            elif dim != self.dim:
                raise FormatError(f"embedding dim changed across batches: {self.dim} -> {dim}")
            rows.extend(np.asarray(v, dtype=np.float64) for v in payload["vectors"])
        return np.stack(rows) if rows else np.zeros((0, self.dim or 0))

    def corpus_vectors(self, corpus: Corpus) -> np.ndarray:
        texts = [f"{d.title} {d.text}".strip() for d in corpus]
        return self.embed_texts(texts)


def semantic_vectors(provider, corpus: Corpus) -> VectorSet:
    """Dense vectors from a provider, re-normalized unless already unit norm."""
    mat = np.asarray(provider.corpus_vectors(corpus), dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != len(corpus):
        raise FormatError(
            f"provider returned shape {mat.shape}, expected ({len(corpus)}, dim)"
        )
    if not np.all(np.isfinite(mat)):
        raise FormatError("provider returned non-finite vector components")
    norms = np.linalg.norm(mat, axis=1)
    off_unit = np.abs(norms - 1.0) > 1e-6
    fix = off_unit & (norms > 0)
    if np.any(fix):
        mat = mat.copy()
        mat[fix] /= norms[fix, None]
    return VectorSet(
        source=SimilarityModel.SEMANTIC,
        dim=mat.shape[1],
        vectors=mat,
        ids=[d.id for d in corpus],
    )


def _as_dense_1d(v) -> np.ndarray:
    if sparse.issparse(v):
        return np.asarray(v.todense()).ravel().astype(np.float64)
    return np.asarray(v, dtype=np.float64).ravel()


def cosine(a, b) -> float:
    """dot(a, b) / (|a| |b|); 0.0 when either side is the zero vector."""
    av, bv = _as_dense_1d(a), _as_dense_1d(b)
    if av.shape != bv.shape:
        raise ValueError(f"dimension mismatch: {av.shape[0]} vs {bv.shape[0]}")
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(av, bv) / (na * nb))


@dataclass
class NeighborList:
    """Index and cosine score of each document's single nearest other document."""

    neighbor_indices: np.ndarray
    scores: np.ndarray
    ids: list[str] | None = None

    def __len__(self) -> int:
        return len(self.neighbor_indices)


def unit_rows(vectors):
    """Rows scaled to unit L2 norm; zero rows stay zero.

    Uses true division, not a reciprocal multiply, so rows that are scalar
    multiples of the same axis normalize to bitwise-identical unit vectors
    and later tie exactly instead of by rounding accident.
    """
    if sparse.issparse(vectors):
        mat = vectors.tocsr().astype(np.float64)
        norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
        per_entry = np.repeat(norms, np.diff(mat.indptr))
        mat.data = np.divide(
            mat.data, per_entry, out=np.zeros_like(mat.data), where=per_entry > 0
        )
        return mat
    mat = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(mat, axis=1)[:, None]
    return np.divide(mat, norms, out=np.zeros_like(mat), where=norms > 0)


# blocked matmul scores are only reliable to ~1e-14; anything this close to a
# row maximum is re-verified pairwise before the winner is chosen
_TIE_SLACK = 1e-9


def _pair_score(unit, i: int, j: int) -> float:
    if sparse.issparse(unit):
        return float(unit[i].multiply(unit[j]).sum())
    return float(np.sum(unit[i] * unit[j]))


def nearest_neighbors(vs: VectorSet, threads: int = 1) -> NeighborList:
    """Exact argmax-cosine neighbor per document; ties go to the lower ordinal.

    Matmul kernels may round the same mathematical dot product differently at
    different output positions, which would let rounding noise pick between
    equally similar documents.  Candidates within _TIE_SLACK of a row maximum
    are therefore rescored with one deterministic dot product per pair, making
    the winner (and its reported score) independent of block layout and
    thread schedule.
    """
    n = len(vs)
    if n < 2:
        raise ValueError("nearest neighbors need at least 2 documents")
    unit = unit_rows(vs.vectors)
    unit_t = unit.T.tocsc() if sparse.issparse(unit) else unit.T
    neighbor = np.zeros(n, dtype=np.int64)
    score = np.zeros(n, dtype=np.float64)
    block = max(1, min(n, _BLOCK_BUDGET // n))

    def run_block(start: int) -> None:
        stop = min(start + block, n)
        sims = unit[start:stop] @ unit_t
        if sparse.issparse(sims):
            sims = sims.toarray()
        sims[np.arange(stop - start), np.arange(start, stop)] = -np.inf
        row_max = sims.max(axis=1)
        for r in range(stop - start):
            i = start + r
            candidates = np.flatnonzero(sims[r] >= row_max[r] - _TIE_SLACK)
            best_j, best_score = -1, -np.inf
            for j in map(int, candidates):  # ascending, so the first maximum wins ties
                exact = _pair_score(unit, i, j)
                if exact > best_score:
                    best_j, best_score = j, exact
            neighbor[i] = best_j
            score[i] = best_score

    starts = range(0, n, block)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_block, starts))
    else:
        for s in starts:
            run_block(s)
    return NeighborList(neighbor_indices=neighbor, scores=score, ids=vs.ids)
