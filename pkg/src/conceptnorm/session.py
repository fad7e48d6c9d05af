"""Human-in-the-loop annotation state, event-sourced for auditability.

Every mutation appends an event and bumps the version by exactly one; the
group/label state is always reproducible by replaying the log from empty.
A term belongs to at most one group.
"""

import hashlib
import json
import time
import warnings

from .errors import UnknownGroup, UnknownTerm
from .fileio import atomic_write_text


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class AnnotationSession:
    def __init__(self, session_id, known_terms, corpus_ref="", store_ref=""):
        self.session_id = session_id
        self.known_terms = set(known_terms)
        self.corpus_ref = corpus_ref
        self.store_ref = store_ref
        self.groups = {}  # group_id -> list of term_ids (insertion order)
        self.labels = {}  # group_id -> label
        self.events = []
        self.version = 0

    def group_of(self, term_id):
        for gid, members in self.groups.items():
            if term_id in members:
                return gid
        return None

    def _append(self, actor, action, payload):
        self.events.append(
            {
                "timestamp": time.time(),
                "actor": actor,
                "action": action,
                "payload": payload,
            }
        )
        self.version += 1

    def assign_terms(self, group_id, term_ids, actor="user"):
        """Move term_ids into group_id, removing them from any prior group.

        Atomic: an unknown term leaves the session untouched.
        """
        term_ids = list(term_ids)
        unknown = [t for t in term_ids if t not in self.known_terms]
        if unknown:
            raise UnknownTerm(f"unknown term ids: {unknown}", detail={"term_ids": unknown})
        self._apply_assign(group_id, term_ids)
        self._append(actor, "assign_terms", {"group_id": group_id, "term_ids": term_ids})
        return self.version

    def _apply_assign(self, group_id, term_ids):
        moving = set(term_ids)
        for gid in list(self.groups):
            self.groups[gid] = [t for t in self.groups[gid] if t not in moving]
            if not self.groups[gid] and gid != group_id:
                del self.groups[gid]
                self.labels.pop(gid, None)
        self.groups.setdefault(group_id, [])
        self.groups[group_id].extend(term_ids)

    def set_label(self, group_id, label, actor="user"):
        if group_id not in self.groups:
            raise UnknownGroup(f"unknown group {group_id!r}")
        self.labels[group_id] = label
        self._append(actor, "set_label", {"group_id": group_id, "label": label})
        return self.version

    # -- persistence ----------------------------------------------------

    def to_dict(self):
        return {
            "session_id": self.session_id,
            "corpus_ref": self.corpus_ref,
            "store_ref": self.store_ref,
            "known_terms": sorted(self.known_terms),
            "groups": {gid: list(ts) for gid, ts in self.groups.items()},
            "labels": dict(self.labels),
            "events": list(self.events),
            "version": self.version,
        }

    def save(self, path):
        atomic_write_text(path, json.dumps(self.to_dict(), ensure_ascii=False, indent=2))

    @classmethod
    def from_dict(cls, doc):
        s = cls(
            session_id=doc["session_id"],
            known_terms=doc["known_terms"],
            corpus_ref=doc.get("corpus_ref", ""),
            store_ref=doc.get("store_ref", ""),
        )
        s.groups = {gid: list(ts) for gid, ts in doc["groups"].items()}
        s.labels = dict(doc["labels"])
        s.events = list(doc["events"])
        s.version = int(doc["version"])
        return s

    @classmethod
    def load(cls, path, corpus_path=None, store_path=None):
        """Load a session file; warn if the referenced data files changed."""
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        s = cls.from_dict(doc)
        if corpus_path and s.corpus_ref and file_sha256(corpus_path) != s.corpus_ref:
            warnings.warn(f"corpus hash mismatch for session {s.session_id}")
        if store_path and s.store_ref and file_sha256(store_path) != s.store_ref:
            warnings.warn(f"store hash mismatch for session {s.session_id}")
        return s

    def replay(self):
        """Rebuild groups/labels from the event log alone (audit check)."""
        fresh = AnnotationSession(
            self.session_id, self.known_terms, self.corpus_ref, self.store_ref
        )
        for ev in self.events:
            p = ev["payload"]
            if ev["action"] == "assign_terms":
                fresh._apply_assign(p["group_id"], p["term_ids"])
            elif ev["action"] == "set_label":
                fresh.labels[p["group_id"]] = p["label"]
            fresh.events.append(ev)
            fresh.version += 1
        return fresh
