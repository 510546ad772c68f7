from .service import (
    EditCheck,
    Poem,
    PoemEntry,
    Session,
    Studio,
    normalize_for_edit,
    render_poem_text,
    validate_edit,
)
from .store import EventStore

__all__ = [
    "EditCheck",
    "EventStore",
    "Poem",
    "PoemEntry",
    "Session",
    "Studio",
    "normalize_for_edit",
    "render_poem_text",
    "validate_edit",
]
