"""Corpus ingestion: tab-separated mention files and the concept index.

Input files carry an Example / Term / General SNOMED Label header (matched
case-insensitively). Rows with empty fields are rejected but do not abort
the parse; rejects come back in a machine-readable report.
"""

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import MissingColumn
from .fileio import atomic_write_text

REQUIRED_COLUMNS = ("Example", "Term", "General SNOMED Label")


@dataclass(frozen=True)
class MentionRecord:
    row_id: int
    example: str
    term: str
    concept_label: str


@dataclass
class ParseResult:
    records: list  # list[MentionRecord]
    rejects: list = field(default_factory=list)  # [{"row_id", "field"}]


@dataclass
class ConceptIndex:
    """Gold synonym sets: concept label -> ordered unique terms.

    Every term belongs to exactly one concept; a term seen under a second
    label stays with its first label and is recorded as a conflict.
    """

    concepts: dict  # label -> list of terms, insertion order
    term_ids: dict  # term -> stable id "t<n>"
    conflicts: list = field(default_factory=list)

    def concept_of(self, term: str):
        for label, terms in self.concepts.items():
            if term in terms:
                return label
        return None

    @property
    def terms(self):
        out = []
        for ts in self.concepts.values():
            out.extend(ts)
        return out

    def to_json(self, rejects=None) -> str:
        doc = {
            "concepts": self.concepts,
            "term_ids": self.term_ids,
            "conflicts": self.conflicts,
            "rejects": rejects if rejects is not None else [],
        }
        return json.dumps(doc, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ConceptIndex":
        doc = json.loads(text)
        return cls(
            concepts={label: list(terms) for label, terms in doc["concepts"].items()},
            term_ids=dict(doc["term_ids"]),
            conflicts=list(doc.get("conflicts", [])),
        )

    def save(self, path, rejects=None) -> None:
        atomic_write_text(path, self.to_json(rejects))

    @classmethod
    def load(cls, path) -> "ConceptIndex":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def parse_corpus(stream) -> ParseResult:
    """Parse a tab-separated corpus with header into mention records.

    `stream` is a text-mode file object or a string. Raises MissingColumn if
    the header lacks a required column; rows with an empty Term or Label are
    rejected (reported, not fatal).
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream, delimiter="\t")
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("empty file: no header row", detail={"column": REQUIRED_COLUMNS[0]})

    lookup = {name.strip().lower(): i for i, name in enumerate(header)}
    col = {}
    for wanted in REQUIRED_COLUMNS:
        key = wanted.lower()
        if key not in lookup:
            raise MissingColumn(f"missing column: {wanted}", detail={"column": wanted})
        col[wanted] = lookup[key]

    records = []
    rejects = []
    for row_id, row in enumerate(reader):
        def cell(name):
            i = col[name]
            return row[i].strip() if i < len(row) else ""

        example = cell("Example")
        term = cell("Term")
        label = cell("General SNOMED Label")
        if not term:
            rejects.append({"row_id": row_id, "field": "Term"})
            continue
        if not label:
            rejects.append({"row_id": row_id, "field": "General SNOMED Label"})
            continue
        records.append(MentionRecord(row_id=row_id, example=example, term=term, concept_label=label))
    return ParseResult(records=records, rejects=rejects)


def build_concept_index(records) -> ConceptIndex:
    """Group unique terms under their gold concept label.

    Dedupe is case-sensitive; a term that reappears under a different label
    keeps its first label and the occurrence is reported as a conflict.
    """
    concepts = {}
    owner = {}  # term -> label of first occurrence
    conflicts = []
    for rec in records:
        if rec.term in owner:
            if owner[rec.term] != rec.concept_label:
                conflicts.append(
                    {
                        "term": rec.term,
                        "kept_label": owner[rec.term],
                        "conflicting_label": rec.concept_label,
                        "row_id": rec.row_id,
                    }
                )
            continue
        owner[rec.term] = rec.concept_label
        concepts.setdefault(rec.concept_label, []).append(rec.term)

    term_ids = {}
    n = 0
    for terms in concepts.values():
        for term in terms:
            term_ids[term] = f"t{n}"
            n += 1
    return ConceptIndex(concepts=concepts, term_ids=term_ids, conflicts=conflicts)
