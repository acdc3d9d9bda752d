"""Document normalization, keyword counting, and the link-threshold decision.

Two keyword extractors are compared: one trained on general text, one on
specialized (medical/scientific) text.  Their mention counts, scaled by each
extractor's vocabulary size, decide whether the corpus reads as general
(lenient link threshold delta) or specialized (strict threshold 1 - delta).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Protocol

import requests

from udl.corpus import Corpus
from udl.errors import ConfigError, TransportError

# Vocabulary sizes of the default general / specialized entity recognizers.
GENERAL_VOCABULARY_SIZE = 50000
SPECIALIZED_VOCABULARY_SIZE = 785000
DEFAULT_DELTA = 0.4

_NON_ALNUM_RE = re.compile(r"[^\w ]|_", re.UNICODE)
_SPACE_RUN_RE = re.compile(r"\s+")


class TranslationClient(Protocol):
    def translate(self, text: str, source_language: str) -> str: ...


def strip_special(text: str) -> str:
    """Replace non-alphanumeric characters with spaces and collapse runs."""
    return _SPACE_RUN_RE.sub(" ", _NON_ALNUM_RE.sub(" ", text)).strip()


def normalize_document(
    text: str,
    translator: TranslationClient | None = None,
    language: str = "en",
) -> str:
    """Translate non-English text when a translator is given, then clean it."""
    if translator is not None and not language.lower().startswith("en"):
        text = translator.translate(text, language)
    return strip_special(text)


def normalize_corpus(
    corpus: Corpus,
    translator: TranslationClient | None = None,
    on_translate_error: str = "raise",
) -> list[str]:
    """Normalized title+text of every document, in corpus order.

    on_translate_error="skip" keeps the untranslated text instead of failing;
    any other value re-raises with the offending document id.
    """
    out = []
    for doc in corpus:
        raw = f"{doc.title} {doc.text}" if doc.title else doc.text
        try:
            out.append(normalize_document(raw, translator, doc.language))
        except Exception as exc:
            if on_translate_error == "skip":
                out.append(strip_special(raw))
            else:
                raise TransportError(f"translation failed for document {doc.id!r}: {exc}") from exc
    return out


class GazetteerBackend:
    """Dictionary matcher: counts non-overlapping longest-match phrase mentions."""

    def __init__(self, phrases):
        self._trie: dict = {}
        self.n_phrases = 0
        for phrase in phrases:
            tokens = strip_special(phrase).lower().split()
            if not tokens:
                continue
            node = self._trie
            for tok in tokens:
                node = node.setdefault(tok, {})
            if not node.get("$", False):
                node["$"] = True
                self.n_phrases += 1

    @classmethod
    def from_file(cls, path: str | Path) -> "GazetteerBackend":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"gazetteer file not found: {path}")
        with path.open("r", encoding="utf-8") as fh:
            return cls(line.strip() for line in fh if line.strip())

    def count(self, docs: list[str]) -> int:
        return sum(self._count_one(doc) for doc in docs)

    def _count_one(self, doc: str) -> int:
        tokens = doc.lower().split()
        count = 0
        i = 0
        n = len(tokens)
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


class RemoteNerBackend:
    """Client for the sidecar's POST /ner endpoint."""

    def __init__(self, base_url: str, model: str, batch_size: int = 64, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.batch_size = batch_size
        self.timeout = timeout
        self.reported_vocabulary_size: int | None = None

    def count(self, docs: list[str]) -> int:
        total = 0
        for start in range(0, len(docs), self.batch_size):
            batch = docs[start : start + self.batch_size]
            try:
                resp = requests.post(
                    f"{self.base_url}/ner",
                    json={"texts": batch, "model": self.model},
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                payload = resp.json()
            except requests.RequestException as exc:
                raise TransportError(f"keyword service at {self.base_url} failed: {exc}") from exc
            total += sum(int(c) for c in payload["counts"])
            self.reported_vocabulary_size = int(payload["vocabulary_size"])
        return total


class ExtractorKind(str, Enum):
    GENERAL = "general"
    SPECIALIZED = "specialized"


@dataclass
class KeywordExtractor:
    kind: ExtractorKind
    backend: GazetteerBackend | RemoteNerBackend
    vocabulary_size: int = field(default=0)

    def __post_init__(self):
        if self.vocabulary_size <= 0:
            self.vocabulary_size = (
                GENERAL_VOCABULARY_SIZE
                if self.kind is ExtractorKind.GENERAL
                else SPECIALIZED_VOCABULARY_SIZE
            )

    def effective_vocabulary_size(self) -> int:
        reported = getattr(self.backend, "reported_vocabulary_size", None)
        return reported if reported else self.vocabulary_size


def count_keywords(extractor: KeywordExtractor, docs: list[str]) -> int:
    """Total keyword mentions found by the extractor across normalized docs."""
    return extractor.backend.count(docs)


class DocumentType(str, Enum):
    GENERAL = "general"
    SPECIALIZED = "specialized"


@dataclass(frozen=True)
class ThresholdDecision:
    k_general: int
    k_specialized: int
    v_general: int
    v_specialized: int
    doc_type: DocumentType
    threshold: float
    delta: float


def decide_threshold(
    k_general: int,
    k_specialized: int,
    v_general: int = GENERAL_VOCABULARY_SIZE,
    v_specialized: int = SPECIALIZED_VOCABULARY_SIZE,
    delta: float = DEFAULT_DELTA,
) -> ThresholdDecision:
    """General iff k_general*v_specialized strictly exceeds k_specialized*v_general.

    General documents link at the lenient threshold delta; specialized ones at
    the strict 1 - delta.  Exact product ties fall to specialized.
    """
    if k_general < 0 or k_specialized < 0:
        raise ValueError("keyword counts must be non-negative")
    if v_general <= 0 or v_specialized <= 0:
        raise ValueError("vocabulary sizes must be positive")
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie strictly between 0 and 0.5")
    if k_general * v_specialized > k_specialized * v_general:
        doc_type, threshold = DocumentType.GENERAL, delta
    else:
        doc_type, threshold = DocumentType.SPECIALIZED, 1.0 - delta
    return ThresholdDecision(
        k_general=k_general,
        k_specialized=k_specialized,
        v_general=v_general,
        v_specialized=v_specialized,
        doc_type=doc_type,
        threshold=threshold,
        delta=delta,
    )
