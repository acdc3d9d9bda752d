"""Deterministic stand-ins for the pretrained models behind the service.

A real deployment puts a sentence embedder, two entity recognizers, and a
query generator behind these classes.  The substitutes keep every wire
property the pipeline relies on (fixed dimension, unit norms, stable
vocabulary sizes, exact query counts, determinism) without shipping any
weights: embeddings are sums of seeded per-token random vectors, entity
counts come from phrase matching, and queries from salient-term templates.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from typing import Iterable

import numpy as np

from udl_adapter.phrases import BIOMEDICAL_ENTITIES, GENERAL_ENTITIES

GENERAL_VOCABULARY_SIZE = 50000
SPECIALIZED_VOCABULARY_SIZE = 785000

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)
_NON_ALNUM_RE = re.compile(r"[^\w ]|_", re.UNICODE)

# Sentinel token embedded in place of text that tokenizes to nothing.
_EMPTY_TOKEN = "\x00empty"


class HashEmbedder:
    """Bag of seeded random token vectors, L2-normalized per text.

    Each distinct token hashes to a seed, the seed draws a fixed Gaussian
    vector, and a text embeds as the normalized sum over its tokens.  Texts
    sharing vocabulary therefore land near each other, and identical texts
    embed identically across calls and across processes.
    """

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise ValueError(f"dim must be at least 1, got {dim}")
        self.dim = dim
        self.name = f"seeded-token-sum-{dim}"
        self._token_vectors: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_vectors.get(token)
        if vec is None:
            digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
            seed = int.from_bytes(digest, "big")
            vec = np.random.default_rng(seed).standard_normal(self.dim)
            # Concurrent fills recompute the same value, so the race is benign.
            self._token_vectors[token] = vec
        return vec

    def embed(self, texts: list[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            tokens = _TOKEN_RE.findall(text.lower()) or [_EMPTY_TOKEN]
            total = np.zeros(self.dim, dtype=np.float64)
            for token in tokens:
                total += self._token_vector(token)
            norm = float(np.linalg.norm(total))
            if norm == 0.0:
                total = self._token_vector(_EMPTY_TOKEN)
                norm = float(np.linalg.norm(total))
            out[i] = total / norm
        return out


class PhraseMatcher:
    """Counts entity mentions by greedy longest-phrase matching.

    vocabulary_size describes the recognizer this list stands in for, not
    the list length, and is what the service reports on the wire.
    """

    def __init__(self, name: str, phrases: Iterable[str], vocabulary_size: int):
        if vocabulary_size < 1:
            raise ValueError(f"vocabulary_size must be positive, got {vocabulary_size}")
        self.name = name
        self.vocabulary_size = vocabulary_size
        self._trie: dict = {}
        for phrase in phrases:
            tokens = _TOKEN_RE.findall(phrase.lower())
            if not tokens:
                continue
            node = self._trie
            for token in tokens:
                node = node.setdefault(token, {})
            node["$"] = True

    def count(self, text: str) -> int:
        tokens = _TOKEN_RE.findall(_NON_ALNUM_RE.sub(" ", text.lower()))
        count = 0
        i, n = 0, len(tokens)
        while i < n:
            node = self._trie
            best = 0
            j = i
            while j < n and tokens[j] in node:
                node = node[tokens[j]]
                j += 1
                if node.get("$"):
                    best = j - i
            if best:
                count += 1
                i += best
            else:
                i += 1
        return count


def general_matcher() -> PhraseMatcher:
    return PhraseMatcher("newswire-entities", GENERAL_ENTITIES, GENERAL_VOCABULARY_SIZE)


def specialized_matcher() -> PhraseMatcher:
    return PhraseMatcher("biomedical-entities", BIOMEDICAL_ENTITIES, SPECIALIZED_VOCABULARY_SIZE)


_STOPWORDS = frozenset(
    "a an and are as at be but by for from had has have in is it its of on or "
    "that the their this to was were which with".split()
)

_TEMPLATES = (
    "what is {}",
    "how does {} relate to {}",
    "which documents discuss {}",
    "{} compared with {}",
    "why does {} matter",
)


class TemplateGenerator:
    """Fills fixed question templates with a text's most salient terms.

    Purely functional, so repeated calls with the same text and budget
    return identical queries.  Stands in for a seq2seq query generator.
    """

    name = "salient-term-templates"

    def salient_terms(self, text: str) -> list[str]:
        freq: Counter[str] = Counter()
        first_seen: dict[str, int] = {}
        for pos, token in enumerate(_TOKEN_RE.findall(text.lower())):
            if token in _STOPWORDS or len(token) < 3:
                continue
            freq[token] += 1
            first_seen.setdefault(token, pos)
        ranked = sorted(freq, key=lambda t: (-freq[t], first_seen[t]))
        return ranked[:12] or ["this document"]

    def generate(self, text: str, n: int) -> list[str]:
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        terms = self.salient_terms(text)
        queries: list[str] = []
        for i in range(n):
            template = _TEMPLATES[i % len(_TEMPLATES)]
            slots = template.count("{}")
            picks = [terms[(i + j) % len(terms)] for j in range(slots)]
            queries.append(template.format(*picks))
        return queries
