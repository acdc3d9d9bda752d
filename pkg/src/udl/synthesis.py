"""Exchange generation units with an external query generator.

Units go out as JSONL annotated with how many queries to produce; generated
queries come back as JSONL records tied to a unit_id.  Each imported query
inherits every source document of its unit as a positive, which is what makes
linked pairs useful: one query becomes a positive for both documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from udl.errors import FormatError, ParseError, ValidationError
from udl.linker import DEFAULT_N_QUERIES, MergedDocument

TRAINING_PAIR_HEADER = ("query_id", "query_text", "doc_id")


@dataclass(frozen=True)
class GenerationUnit:
    unit_id: str
    doc_ids: tuple[str, ...]
    text: str
    n_queries: int = DEFAULT_N_QUERIES

    def __post_init__(self):
        if self.n_queries < 1:
            raise ValidationError(f"unit {self.unit_id}: n_queries must be at least 1")
        if not 1 <= len(self.doc_ids) <= 2:
            raise ValidationError(f"unit {self.unit_id}: expected 1 or 2 source documents")


@dataclass(frozen=True)
class TrainingPair:
    query_id: str
    query_text: str
    positive_doc_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.query_text.strip():
            raise ValidationError(f"query {self.query_id}: empty text")
        if not self.positive_doc_ids:
            raise ValidationError(f"query {self.query_id}: no positive documents")


def units_from_merged(merged: list[MergedDocument], n_queries: int = DEFAULT_N_QUERIES) -> list[GenerationUnit]:
    return [
        GenerationUnit(unit_id=m.unit_id, doc_ids=m.source_ids, text=m.text, n_queries=n_queries)
        for m in merged
    ]


def write_units(units: list[GenerationUnit], path: str | Path) -> None:
    """One JSONL record per unit, in the given order."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for unit in units:
            fh.write(
                json.dumps(
                    {
                        "unit_id": unit.unit_id,
                        "doc_ids": list(unit.doc_ids),
                        "text": unit.text,
                        "n_queries": unit.n_queries,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def export_generation_units(
    merged: list[MergedDocument], path: str | Path, n_queries: int = DEFAULT_N_QUERIES
) -> list[GenerationUnit]:
    """Annotate merged units with a query budget and write them out."""
    units = units_from_merged(merged, n_queries)
    write_units(units, path)
    return units


def load_generation_units(path: str | Path) -> list[GenerationUnit]:
    units: list[GenerationUnit] = []
    seen: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                unit = GenerationUnit(
                    unit_id=rec["unit_id"],
                    doc_ids=tuple(rec["doc_ids"]),
                    text=rec["text"],
                    n_queries=int(rec.get("n_queries", DEFAULT_N_QUERIES)),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: bad unit record: {exc}") from exc
            if unit.unit_id in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate unit_id {unit.unit_id!r}")
            seen.add(unit.unit_id)
            units.append(unit)
    return units


def import_synthetic_queries(path: str | Path, units: list[GenerationUnit]) -> list[TrainingPair]:
    """Read generated queries and attach each unit's doc_ids as positives.

    Query text is whitespace-collapsed on the way in so the pairs survive a
    TSV round trip.  Records naming a unit_id that is not in `units` are
    collected and rejected together.
    """
    by_unit = {u.unit_id: u for u in units}
    pairs: list[TrainingPair] = []
    seen_query_ids: set[str] = set()
    orphans: list[str] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                query_id, unit_id, text = rec["query_id"], rec["unit_id"], rec["text"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(f"{path}:{lineno}: bad query record: {exc}") from exc
            if query_id in seen_query_ids:
                raise ValidationError(f"{path}:{lineno}: duplicate query_id {query_id!r}")
            seen_query_ids.add(query_id)
            unit = by_unit.get(unit_id)
            if unit is None:
                orphans.append(unit_id)
                continue
            pairs.append(
                TrainingPair(
                    query_id=query_id,
                    query_text=" ".join(str(text).split()),
                    positive_doc_ids=unit.doc_ids,
                )
            )
    if orphans:
        shown = ", ".join(repr(u) for u in sorted(set(orphans))[:10])
        raise ValidationError(f"{len(orphans)} query records reference unknown unit ids: {shown}")
    return pairs


def emit_training_pairs(pairs: list[TrainingPair], path: str | Path) -> int:
    """Write a header and one TSV row per (query, positive doc); returns row count."""
    rows = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(TRAINING_PAIR_HEADER) + "\n")
        for pair in pairs:
            for doc_id in pair.positive_doc_ids:
                fh.write(f"{pair.query_id}\t{pair.query_text}\t{doc_id}\n")
                rows += 1
    return rows


def load_training_pairs(path: str | Path) -> list[TrainingPair]:
    """Read back an emit_training_pairs file, regrouping rows by query_id."""
    order: list[str] = []
    texts: dict[str, str] = {}
    positives: dict[str, list[str]] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != TRAINING_PAIR_HEADER:
            raise FormatError(
                f"{path}: expected header {'/'.join(TRAINING_PAIR_HEADER)}, got {'/'.join(header)}"
            )
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            cells = line.rstrip("\n").split("\t")
            if len(cells) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 columns, got {len(cells)}")
            query_id, text, doc_id = cells
            if query_id not in texts:
                order.append(query_id)
                texts[query_id] = text
                positives[query_id] = []
            elif texts[query_id] != text:
                raise ValidationError(f"{path}:{lineno}: query {query_id!r} has conflicting text")
            positives[query_id].append(doc_id)
    return [
        TrainingPair(query_id=q, query_text=texts[q], positive_doc_ids=tuple(positives[q]))
        for q in order
    ]


def stub_queries(units: list[GenerationUnit], path: str | Path) -> int:
    """Offline stand-in for the remote generator: prefix snippets as queries.

    Query i over a unit keeps the first 4 + 3i tokens of the unit text, so the
    n queries per unit are distinct, deterministic, and lexically anchored to
    their source.  Returns the number of query records written.
    """
    written = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for unit in units:
            tokens = unit.text.split()
            for i in range(unit.n_queries):
                snippet = " ".join(tokens[: 4 + 3 * i]) or unit.unit_id
                rec = {
                    "query_id": f"{unit.unit_id}-q{i + 1}",
                    "unit_id": unit.unit_id,
                    "text": snippet,
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
                written += 1
    return written
