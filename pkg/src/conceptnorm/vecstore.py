"""Term-vector store: load token embeddings, pool, normalize, persist.

Interchange is JSON lines. The first line is a meta object declaring the
vector dimension and the model that produced the tokens; every later line
is one record. Pooling is an unweighted elementwise sum of subword vectors.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import DimMismatch, MalformedLine, NonFiniteValue, ZeroVector
from .fileio import atomic_write_text


@dataclass(frozen=True)
class TokenEmbeddingRecord:
    term_id: str
    term: str
    concept_label: str | None
    dim: int
    tokens: list
    vectors: np.ndarray  # (n_tokens, dim) float64


@dataclass(frozen=True)
class TermVector:
    term_id: str
    term: str
    concept_label: str | None
    vector: np.ndarray  # (dim,) float64
    normalized: bool = False


def _lines(stream):
    if isinstance(stream, str):
        return stream.splitlines()
    return [line.rstrip("\n") for line in stream]


def load_token_embeddings(stream):
    """Parse a token-embedding JSON-lines stream.

    Returns (records, meta). Raises MalformedLine / DimMismatch /
    NonFiniteValue with the offending 1-based line number.
    """
    lines = [ln for ln in _lines(stream)]
    if not lines or not lines[0].strip():
        raise MalformedLine("missing meta line", detail={"line": 1})
    try:
        meta = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"bad meta line: {exc}", detail={"line": 1})
    if meta.get("type") != "meta" or "dim" not in meta:
        raise MalformedLine("first line must be a meta object with a dim", detail={"line": 1})
    dim = int(meta["dim"])

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(f"line {lineno}: {exc}", detail={"line": lineno})
        try:
            tokens = list(obj["tokens"])
            vectors = obj["vectors"]
            term = obj["term"]
            term_id = obj["term_id"]
        except (KeyError, TypeError) as exc:
            raise MalformedLine(f"line {lineno}: missing field {exc}", detail={"line": lineno})
        if len(tokens) != len(vectors) or len(tokens) == 0:
            raise MalformedLine(
                f"line {lineno}: {len(tokens)} tokens but {len(vectors)} vectors",
                detail={"line": lineno},
            )
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != dim:
            raise DimMismatch(
                f"line {lineno}: vectors are not all {dim}-dimensional",
                detail={"line": lineno, "dim": dim},
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue(f"line {lineno}: non-finite vector entry", detail={"line": lineno})
        records.append(
            TokenEmbeddingRecord(
                term_id=str(term_id),
                term=str(term),
                concept_label=obj.get("concept"),
                dim=dim,
                tokens=tokens,
                vectors=arr,
            )
        )
    return records, meta


def pool_term(record: TokenEmbeddingRecord) -> TermVector:
    """Pool subword vectors into one term vector by elementwise sum."""
    return TermVector(
        term_id=record.term_id,
        term=record.term,
        concept_label=record.concept_label,
        vector=record.vectors.sum(axis=0),
        normalized=False,
    )


def l2_normalize(tv: TermVector) -> TermVector:
    """Scale the vector to unit Euclidean norm."""
    norm = float(np.linalg.norm(tv.vector))
    if norm <= 1e-12:
        raise ZeroVector(f"cannot normalize zero vector for term {tv.term!r}")
    return replace(tv, vector=tv.vector / norm, normalized=True)


def _store_lines(vectors, meta=None):
    meta = dict(meta or {})
    meta.setdefault("type", "meta")
    if vectors:
        meta.setdefault("dim", int(vectors[0].vector.shape[0]))
    yield json.dumps(meta, ensure_ascii=False)
    for tv in vectors:
        yield json.dumps(
            {
                "term_id": tv.term_id,
                "term": tv.term,
                "concept": tv.concept_label,
                "vector": [float(x) for x in tv.vector],
                "normalized": bool(tv.normalized),
            },
            ensure_ascii=False,
        )


def save_store(vectors, path, meta=None) -> None:
    """Write term vectors as JSON lines, atomically.

    json's decimal float serialization is shortest-round-trip, so the store
    reloads bit-exactly.
    """
    atomic_write_text(path, "\n".join(_store_lines(vectors, meta)) + "\n")


def load_store(path):
    """Read a term-vector store written by save_store. Returns (vectors, meta)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MalformedLine("empty store file", detail={"line": 1})
    meta = json.loads(lines[0])
    if meta.get("type") != "meta":
        raise MalformedLine("first line must be a meta object", detail={"line": 1})
    dim = meta.get("dim")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(f"line {lineno}: {exc}", detail={"line": lineno})
        vec = np.asarray(obj["vector"], dtype=np.float64)
        if dim is not None and vec.shape[0] != dim:
            raise DimMismatch(f"line {lineno}: expected dim {dim}", detail={"line": lineno})
        if not np.all(np.isfinite(vec)):
            raise NonFiniteValue(f"line {lineno}: non-finite entry", detail={"line": lineno})
        out.append(
            TermVector(
                term_id=str(obj["term_id"]),
                term=str(obj["term"]),
                concept_label=obj.get("concept"),
                vector=vec,
                normalized=bool(obj.get("normalized", False)),
            )
        )
    return out, meta


def build_store(token_records, normalize=True):
    """Pool every token record; optionally L2-normalize the pooled vectors."""
    pooled = [pool_term(rec) for rec in token_records]
    if normalize:
        pooled = [l2_normalize(tv) for tv in pooled]
    return pooled
