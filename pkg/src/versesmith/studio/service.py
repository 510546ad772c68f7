"""The machine-in-the-loop studio backend.

Sessions push batches of generated candidate lines to a human, who selects
lines, arranges them vertically into poems (with explicit stanza-break
entries), and may edit only capitalisation and punctuation. Every mutation
is appended to the event log before it is acknowledged, and full state is
reconstructed by replaying that log, so the machine/human division of
labor is auditable: each poem line normalizes back to a machine-generated
line of its session.
"""

from __future__ import annotations

import difflib
import threading
import unicodedata
import uuid
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from ..checkpoint import load_checkpoint
from ..corpus import load_corpus, segment_lines
from ..errors import (
    EditRuleViolation,
    EmptyPoem,
    InvalidArgument,
    InvalidCount,
    LineInUse,
    LineNotSelected,
    PoemFinalized,
    UnknownLine,
    UnknownPoem,
    UnknownSession,
)
from ..generator import CandidateLine, GenConfig, NgramIndex, generate_set
from ..rng import derive_seed
from .store import EventStore


def normalize_for_edit(text: str) -> list[str]:
    """Lowercase, strip all Unicode punctuation, collapse whitespace.

    The result is the word-token list the edit rule compares: two texts are
    edit-equivalent iff their normalizations are equal.
    """
    text = unicodedata.normalize("NFC", text).lower()
    stripped = "".join(
        " " if ch.isspace() else ch
        for ch in text
        if not unicodedata.category(ch).startswith("P")
    )
    return stripped.split()


@dataclass(frozen=True)
class EditCheck:
    accepted: bool
    summary: str
    changes: tuple[str, ...] = ()


def validate_edit(original: str, edited: str) -> EditCheck:
    """Accept iff the edit changes only capitalisation/punctuation/spacing."""
    a = normalize_for_edit(original)
    b = normalize_for_edit(edited)
    if a == b:
        return EditCheck(accepted=True, summary="capitalisation/punctuation only")
    changes = []
    matcher = difflib.SequenceMatcher(a=a, b=b, autojunk=False)
    for op, i1, i2, j1, j2 in matcher.get_opcodes():
        if op == "equal":
            continue
        was = " ".join(a[i1:i2]) or "(nothing)"
        now = " ".join(b[j1:j2]) or "(nothing)"
        changes.append(f"{op}: {was!r} -> {now!r}")
    return EditCheck(accepted=False, summary="words changed", changes=tuple(changes))


@dataclass(frozen=True)
class PoemEntry:
    kind: str  # "line" | "break"
    line_id: str | None = None
    display_text: str | None = None


@dataclass
class Session:
    id: str
    checkpoint_path: str
    gen: GenConfig
    created_at: str
    updated_at: str
    batch_cursor: int = 0
    offered: dict[str, CandidateLine] = field(default_factory=dict)
    selected: set[str] = field(default_factory=set)


@dataclass
class Poem:
    id: str
    session_id: str
    title: str
    entries: tuple[PoemEntry, ...]
    status: str  # "draft" | "final"
    created_at: str
    updated_at: str


def render_poem_text(title: str, entries) -> str:
    """Title, a blank line, then one row per entry; breaks render blank."""
    rows = [title, ""]
    for entry in entries:
        rows.append(entry.display_text if entry.kind == "line" else "")
    return "\n".join(rows) + "\n"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _line_to_dict(line: CandidateLine) -> dict:
    return {
        "id": line.line_id,
        "tokens": list(line.tokens),
        "surface": line.surface,
        "log_probs": list(line.log_probs),
        "overlap": line.overlap_score,
    }


def _line_from_dict(d: dict) -> CandidateLine:
    return CandidateLine(
        tokens=tuple(d["tokens"]),
        surface=d["surface"],
        log_probs=tuple(d["log_probs"]),
        overlap_score=d["overlap"],
        line_id=d["id"],
    )


def _entries_from_wire(entries: list[dict]) -> tuple[PoemEntry, ...]:
    out = []
    for e in entries:
        kind = e.get("kind") or e.get("type")
        if kind == "break":
            out.append(PoemEntry(kind="break"))
        elif kind == "line":
            out.append(PoemEntry(kind="line", line_id=e["line_id"],
                                 display_text=e.get("display_text", e.get("text"))))
        else:
            raise InvalidArgument(f"unknown entry kind {kind!r}")
    return tuple(out)


def _entries_to_wire(entries: tuple[PoemEntry, ...]) -> list[dict]:
    return [
        {"kind": e.kind, "line_id": e.line_id, "display_text": e.display_text}
        for e in entries
    ]


class Studio:
    """Session/poem registry over one loaded model plus the event log."""

    def __init__(
        self,
        checkpoint_path: str | Path,
        store_path: str | Path | None = None,
        corpus_path: str | Path | None = None,
    ):
        ckpt = load_checkpoint(checkpoint_path)
        self.checkpoint_path = str(checkpoint_path)
        self.params = ckpt.params
        self.vocab = ckpt.vocab
        self.corpus_index = None
        if corpus_path is not None:
            self.corpus_index = NgramIndex.from_corpus(segment_lines(load_corpus(corpus_path)))
        self.sessions: dict[str, Session] = {}
        self.poems: dict[str, Poem] = {}
        self._registry_lock = threading.RLock()
        self._session_locks: dict[str, threading.Lock] = {}
        self.store = EventStore(store_path) if store_path is not None else None
        if self.store is not None:
            for event in self.store.replay():
                self._apply(event)

    # -- event plumbing --------------------------------------------------

    def _record(self, event: dict) -> None:
        if self.store is not None:
            self.store.append(event)

    def _apply(self, event: dict) -> None:
        """Rebuild state from one logged event (no generation, no clocks)."""
        kind = event["event"]
        at = event["at"]
        if kind == "session_created":
            session = Session(
                id=event["session_id"],
                checkpoint_path=event["checkpoint"],
                gen=GenConfig(**event["gen"]),
                created_at=at,
                updated_at=at,
            )
            self.sessions[session.id] = session
            self._session_locks[session.id] = threading.Lock()
        elif kind == "lines_offered":
            session = self.sessions[event["session_id"]]
            for d in event["lines"]:
                line = _line_from_dict(d)
                session.offered[line.line_id] = line
            session.batch_cursor = event["cursor"]
            session.updated_at = at
        elif kind == "lines_selected":
            session = self.sessions[event["session_id"]]
            session.selected.update(event["ids"])
            session.updated_at = at
        elif kind == "lines_deselected":
            session = self.sessions[event["session_id"]]
            session.selected.difference_update(event["ids"])
            session.updated_at = at
        elif kind == "poem_created":
            poem = Poem(
                id=event["poem_id"],
                session_id=event["session_id"],
                title=event["title"],
                entries=_entries_from_wire(event["entries"]),
                status="draft",
                created_at=at,
                updated_at=at,
            )
            self.poems[poem.id] = poem
        elif kind == "poem_entries_updated":
            poem = self.poems[event["poem_id"]]
            poem.entries = _entries_from_wire(event["entries"])
            if event.get("title") is not None:
                poem.title = event["title"]
            poem.updated_at = at
        elif kind == "poem_finalized":
            poem = self.poems[event["poem_id"]]
            poem.status = "final"
            poem.updated_at = at
        else:
            raise InvalidArgument(f"unknown event type {kind!r}")

    def snapshot(self) -> dict:
        """Plain-data view of all state, for replay-equality checks."""
        return {
            "sessions": {
                sid: {
                    "gen": asdict(s.gen),
                    "cursor": s.batch_cursor,
                    "offered": {lid: _line_to_dict(l) for lid, l in s.offered.items()},
                    "selected": sorted(s.selected),
                    "created_at": s.created_at,
                    "updated_at": s.updated_at,
                }
                for sid, s in self.sessions.items()
            },
            "poems": {
                pid: {
                    "session_id": p.session_id,
                    "title": p.title,
                    "entries": _entries_to_wire(p.entries),
                    "status": p.status,
                    "created_at": p.created_at,
                    "updated_at": p.updated_at,
                }
                for pid, p in self.poems.items()
            },
        }

    # -- lookups ----------------------------------------------------------

    def _session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def _poem(self, poem_id: str) -> Poem:
        try:
            return self.poems[poem_id]
        except KeyError:
            raise UnknownPoem(poem_id) from None

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._session_locks[session_id]

    # -- operations ---------------------------------------------------------

    def create_session(self, gen: GenConfig | None = None) -> Session:
        gen = gen if gen is not None else GenConfig()
        at = _now()
        session_id = uuid.uuid4().hex[:12]
        event = {
            "event": "session_created",
            "session_id": session_id,
            "checkpoint": self.checkpoint_path,
            "gen": asdict(gen),
            "at": at,
        }
        with self._registry_lock:
            self._record(event)
            self._apply(event)
            return self.sessions[session_id]

    def request_lines(self, session_id: str, count: int) -> list[CandidateLine]:
        """Generate a fresh batch; line ids never repeat within a session."""
        if count < 1:
            raise InvalidCount(f"count must be >= 1, got {count}")
        session = self._session(session_id)
        with self._session_lock(session_id):
            batch_config = replace(
                session.gen,
                count=count,
                seed=derive_seed(session.gen.seed, session.batch_cursor),
            )
            lines = generate_set(
                self.params, self.vocab, self.corpus_index, batch_config,
                exclude_ids=set(session.offered),
            )
            event = {
                "event": "lines_offered",
                "session_id": session_id,
                "cursor": session.batch_cursor + 1,
                "lines": [_line_to_dict(l) for l in lines],
                "at": _now(),
            }
            with self._registry_lock:
                self._record(event)
                self._apply(event)
            return lines

    def get_lines(self, session_id: str) -> list[CandidateLine]:
        return list(self._session(session_id).offered.values())

    def _line_ids_in_poems(self, session_id: str) -> set[str]:
        used = set()
        for poem in self.poems.values():
            if poem.session_id == session_id:
                used.update(e.line_id for e in poem.entries if e.kind == "line")
        return used

    def update_selection(self, session_id: str, add=(), remove=()) -> Session:
        """Idempotent select/deselect; rejects unknown or poem-bound lines."""
        session = self._session(session_id)
        with self._session_lock(session_id):
            for lid in list(add) + list(remove):
                if lid not in session.offered:
                    raise UnknownLine(lid)
            in_poems = self._line_ids_in_poems(session_id)
            for lid in remove:
                if lid in in_poems:
                    raise LineInUse(f"line {lid} appears in a poem")
            effective_add = [l for l in add if l not in session.selected]
            effective_remove = [l for l in remove if l in session.selected]
            at = _now()
            with self._registry_lock:
                if effective_add:
                    event = {"event": "lines_selected", "session_id": session_id,
                             "ids": effective_add, "at": at}
                    self._record(event)
                    self._apply(event)
                if effective_remove:
                    event = {"event": "lines_deselected", "session_id": session_id,
                             "ids": effective_remove, "at": at}
                    self._record(event)
                    self._apply(event)
            return session

    def select_lines(self, session_id: str, line_ids) -> Session:
        return self.update_selection(session_id, add=line_ids)

    def deselect_lines(self, session_id: str, line_ids) -> Session:
        return self.update_selection(session_id, remove=line_ids)

    def _check_entries(self, session: Session, entries: tuple[PoemEntry, ...]) -> None:
        for entry in entries:
            if entry.kind != "line":
                continue
            if entry.line_id not in session.offered:
                raise UnknownLine(entry.line_id)
            if entry.line_id not in session.selected:
                raise LineNotSelected(entry.line_id)
            original = session.offered[entry.line_id].surface
            check = validate_edit(original, entry.display_text or "")
            if not check.accepted:
                raise EditRuleViolation(
                    f"line {entry.line_id}: {'; '.join(check.changes) or check.summary}"
                )

    def create_poem(self, session_id: str, title: str, entries: list[dict]) -> Poem:
        session = self._session(session_id)
        parsed = _entries_from_wire(entries)
        with self._session_lock(session_id):
            self._check_entries(session, parsed)
            event = {
                "event": "poem_created",
                "poem_id": uuid.uuid4().hex[:12],
                "session_id": session_id,
                "title": title,
                "entries": _entries_to_wire(parsed),
                "at": _now(),
            }
            with self._registry_lock:
                self._record(event)
                self._apply(event)
            return self.poems[event["poem_id"]]

    def update_poem_entries(self, poem_id: str, entries: list[dict],
                            title: str | None = None) -> Poem:
        poem = self._poem(poem_id)
        if poem.status == "final":
            raise PoemFinalized(poem_id)
        session = self._session(poem.session_id)
        parsed = _entries_from_wire(entries)
        with self._session_lock(session.id):
            self._check_entries(session, parsed)
            event = {
                "event": "poem_entries_updated",
                "poem_id": poem_id,
                "entries": _entries_to_wire(parsed),
                "title": title,
                "at": _now(),
            }
            with self._registry_lock:
                self._record(event)
                self._apply(event)
            return self.poems[poem_id]

    def finalize_poem(self, poem_id: str) -> Poem:
        poem = self._poem(poem_id)
        if poem.status == "final":
            raise PoemFinalized(poem_id)
        if not any(e.kind == "line" for e in poem.entries):
            raise EmptyPoem(poem_id)
        event = {"event": "poem_finalized", "poem_id": poem_id, "at": _now()}
        with self._registry_lock:
            self._record(event)
            self._apply(event)
        return self.poems[poem_id]

    def export_poem(self, poem_id: str, fmt: str = "text") -> str | dict:
        poem = self._poem(poem_id)
        if fmt == "text":
            return render_poem_text(poem.title, poem.entries)
        if fmt == "json":
            return {
                "id": poem.id,
                "session_id": poem.session_id,
                "title": poem.title,
                "status": poem.status,
                "entries": _entries_to_wire(poem.entries),
            }
        raise InvalidArgument(f"unknown export format {fmt!r}")

    def poems_for_session(self, session_id: str) -> list[Poem]:
        self._session(session_id)
        return [p for p in self.poems.values() if p.session_id == session_id]

    def line_provenance_ok(self, poem_id: str) -> bool:
        """True iff every poem line normalizes to an offered machine line."""
        poem = self._poem(poem_id)
        session = self._session(poem.session_id)
        offered = {tuple(normalize_for_edit(l.surface)) for l in session.offered.values()}
        return all(
            tuple(normalize_for_edit(e.display_text or "")) in offered
            for e in poem.entries
            if e.kind == "line"
        )
