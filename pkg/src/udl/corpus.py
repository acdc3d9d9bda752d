"""Corpus, query, and relevance-judgment loading in BEIR-style formats.

corpus.jsonl: one JSON object per line with "_id", "title", "text".
queries.jsonl: "_id", "text".  qrels: UTF-8 TSV with the header row
"query-id<TAB>corpus-id<TAB>score".  A plain TSV corpus
(id<TAB>title<TAB>text) is accepted as glue for non-BEIR dumps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from udl.errors import FormatError, ParseError, ValidationError

QRELS_HEADER = ("query-id", "corpus-id", "score")


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    text: str
    language: str = "en"


@dataclass
class Corpus:
    """Ordered document collection with an id -> position index."""

    documents: list[Document]
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.index = {}
        for pos, doc in enumerate(self.documents):
            if doc.id in self.index:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            self.index[doc.id] = pos

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, doc_id: str) -> Document:
        return self.documents[self.index[doc_id]]

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]


@dataclass(frozen=True)
class Query:
    id: str
    text: str


@dataclass
class Qrels:
    """Relevance grades keyed by (query-id, doc-id)."""

    entries: dict[tuple[str, str], int]

    def grade(self, query_id: str, doc_id: str) -> int:
        return self.entries.get((query_id, doc_id), 0)

    def relevant_docs(self, query_id: str) -> dict[str, int]:
        """Docs with a positive grade for one query."""
        return {
            d: g for (q, d), g in self.entries.items() if q == query_id and g > 0
        }

    def by_query(self) -> dict[str, dict[str, int]]:
        """All entries regrouped as query-id -> {doc-id: grade}."""
        out: dict[str, dict[str, int]] = {}
        for (q, d), g in self.entries.items():
            out.setdefault(q, {})[d] = g
        return out


def _check_document(doc: Document, where: str) -> Document:
    if not doc.id:
        raise ValidationError(f"{where}: empty document id")
    if not doc.text.strip() and not doc.title.strip():
        raise ValidationError(f"{where}: document {doc.id!r} has no title and no text")
    return doc


def load_corpus(path: str | Path, doc_cap: int | None = None) -> Corpus:
    """Load a corpus in file order, truncated to the first doc_cap documents.

    JSONL by default; files ending in .tsv are parsed as id/title/text rows.
    """
    path = Path(path)
    if doc_cap is not None and doc_cap < 1:
        raise ValueError("doc_cap must be a positive integer")
    docs: list[Document] = []
    seen: set[str] = set()
    is_tsv = path.suffix.lower() == ".tsv"
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if is_tsv:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3:
                    raise ParseError(f"{path}:{lineno}: expected 3 tab-separated fields")
                doc = Document(id=parts[0], title=parts[1], text=parts[2])
            else:
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
                if "_id" not in obj:
                    raise ParseError(f"{path}:{lineno}: missing \"_id\" field")
                doc = Document(
                    id=str(obj["_id"]),
                    title=str(obj.get("title", "") or ""),
                    text=str(obj.get("text", "") or ""),
                    language=str(obj.get("language", "en") or "en"),
                )
            if doc.id in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(_check_document(doc, f"{path}:{lineno}"))
            if doc_cap is not None and len(docs) >= doc_cap:
                break
    return Corpus(documents=docs)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to JSONL; load_corpus round-trips it byte-for-byte."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus:
            record = {"_id": doc.id, "title": doc.title, "text": doc.text}
            if doc.language != "en":
                record["language"] = doc.language
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_queries(path: str | Path) -> list[Query]:
    """Load queries.jsonl in file order; ids must be unique."""
    path = Path(path)
    queries: list[Query] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            if "_id" not in obj or "text" not in obj:
                raise ParseError(f"{path}:{lineno}: missing \"_id\" or \"text\" field")
            qid = str(obj["_id"])
            if qid in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate query id {qid!r}")
            seen.add(qid)
            queries.append(Query(id=qid, text=str(obj["text"])))
    return queries


def load_qrels(path: str | Path) -> Qrels:
    """Load a qrels TSV; grades are non-negative integers."""
    path = Path(path)
    entries: dict[tuple[str, str], int] = {}
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline()
        cols = tuple(header.rstrip("\n").split("\t"))
        if cols != QRELS_HEADER:
            raise FormatError(
                f"{path}: expected header {chr(9).join(QRELS_HEADER)!r}, got {header.rstrip()!r}"
            )
        for rowno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ParseError(f"{path}:{rowno}: expected 3 tab-separated fields")
            qid, did, raw = parts
            try:
                grade = int(raw)
            except ValueError as exc:
                raise ParseError(f"{path}:{rowno}: non-integer score {raw!r}") from exc
            if grade < 0:
                raise ValidationError(f"{path}:{rowno}: negative grade {grade}")
            key = (qid, did)
            if key in entries:
                raise ValidationError(f"{path}:{rowno}: duplicate qrels entry {key!r}")
            entries[key] = grade
    return Qrels(entries=entries)


def save_qrels(qrels: Qrels, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(QRELS_HEADER) + "\n")
        for (qid, did), grade in qrels.entries.items():
            fh.write(f"{qid}\t{did}\t{grade}\n")


def save_queries(queries: list[Query], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(json.dumps({"_id": q.id, "text": q.text}, ensure_ascii=False) + "\n")
