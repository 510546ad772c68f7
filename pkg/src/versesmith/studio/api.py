"""HTTP + JSON surface of the studio service.

All errors come back as structured {"code", "message"} payloads; unknown
resources map to 404, invalid requests to 400, state conflicts (finalized
poems, in-use lines, exhausted retry budgets) to 409.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .. import errors
from ..generator import CandidateLine, GenConfig
from .service import Session, Studio, validate_edit

_STATUS_BY_ERROR = {
    errors.UnknownSession: 404,
    errors.UnknownLine: 404,
    errors.UnknownPoem: 404,
    errors.InvalidCount: 400,
    errors.InvalidArgument: 400,
    errors.LineNotSelected: 400,
    errors.EditRuleViolation: 409,
    errors.LineInUse: 409,
    errors.PoemFinalized: 409,
    errors.EmptyPoem: 409,
    errors.RetryBudgetExhausted: 409,
}


class SessionConfigBody(BaseModel):
    temperature: float | None = None
    seed: int | None = None
    max_ngram_overlap: int | None = None
    max_tokens: int | None = None
    allow_unk: bool | None = None


class LinesBody(BaseModel):
    count: int


class SelectionBody(BaseModel):
    add: list[str] = Field(default_factory=list)
    remove: list[str] = Field(default_factory=list)


class ValidateEditBody(BaseModel):
    original: str
    edited: str


class EntryModel(BaseModel):
    kind: Literal["line", "break"]
    line_id: str | None = None
    display_text: str | None = None


class CreatePoemBody(BaseModel):
    title: str = ""
    entries: list[EntryModel] = Field(default_factory=list)


class UpdateEntriesBody(BaseModel):
    entries: list[EntryModel]
    title: str | None = None


def _line_card(line: CandidateLine, session: Session, in_poems: set[str]) -> dict:
    return {
        "id": line.line_id,
        "text": line.surface,
        "tokens": list(line.tokens),
        "log_probs": list(line.log_probs),
        "overlap": line.overlap_score,
        "selected": line.line_id in session.selected,
        "in_poem": line.line_id in in_poems,
    }


def _session_view(session: Session) -> dict:
    return {
        "id": session.id,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "offered_count": len(session.offered),
        "selected": sorted(session.selected),
        "gen": {
            "temperature": session.gen.temperature,
            "seed": session.gen.seed,
            "max_ngram_overlap": session.gen.max_ngram_overlap,
            "max_tokens": session.gen.max_tokens,
            "allow_unk": session.gen.allow_unk,
        },
    }


def _poem_view(studio: Studio, poem_id: str) -> dict:
    return studio.export_poem(poem_id, fmt="json")


def create_app(studio: Studio) -> FastAPI:
    app = FastAPI(title="versesmith studio")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(errors.VersesmithError)
    async def _handle(request, exc: errors.VersesmithError):
        status = _STATUS_BY_ERROR.get(type(exc), 500)
        return JSONResponse(status_code=status,
                            content={"code": exc.code, "message": str(exc)})

    @app.post("/sessions")
    def create_session(body: SessionConfigBody | None = None):
        overrides = {k: v for k, v in (body.model_dump() if body else {}).items()
                     if v is not None}
        gen = GenConfig(**overrides) if overrides else GenConfig()
        session = studio.create_session(gen)
        return _session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(studio._session(session_id))

    @app.post("/sessions/{session_id}/lines")
    def request_lines(session_id: str, body: LinesBody):
        lines = studio.request_lines(session_id, body.count)
        session = studio._session(session_id)
        in_poems = studio._line_ids_in_poems(session_id)
        return {"lines": [_line_card(l, session, in_poems) for l in lines]}

    @app.get("/sessions/{session_id}/lines")
    def get_lines(session_id: str):
        session = studio._session(session_id)
        in_poems = studio._line_ids_in_poems(session_id)
        return {"lines": [_line_card(l, session, in_poems) for l in studio.get_lines(session_id)]}

    @app.post("/sessions/{session_id}/selection")
    def update_selection(session_id: str, body: SelectionBody):
        session = studio.update_selection(session_id, add=body.add, remove=body.remove)
        return _session_view(session)

    @app.post("/validate-edit")
    def validate_edit_endpoint(body: ValidateEditBody):
        check = validate_edit(body.original, body.edited)
        return {"accepted": check.accepted, "summary": check.summary,
                "changes": list(check.changes)}

    @app.get("/sessions/{session_id}/poems")
    def list_poems(session_id: str):
        return {"poems": [_poem_view(studio, p.id) for p in studio.poems_for_session(session_id)]}

    @app.post("/sessions/{session_id}/poems")
    def create_poem(session_id: str, body: CreatePoemBody):
        poem = studio.create_poem(session_id, body.title,
                                  [e.model_dump() for e in body.entries])
        return _poem_view(studio, poem.id)

    @app.get("/poems/{poem_id}")
    def get_poem(poem_id: str):
        return _poem_view(studio, poem_id)

    @app.put("/poems/{poem_id}/entries")
    def update_entries(poem_id: str, body: UpdateEntriesBody):
        poem = studio.update_poem_entries(poem_id, [e.model_dump() for e in body.entries],
                                          title=body.title)
        return _poem_view(studio, poem.id)

    @app.post("/poems/{poem_id}/finalize")
    def finalize(poem_id: str):
        poem = studio.finalize_poem(poem_id)
        return _poem_view(studio, poem.id)

    @app.get("/poems/{poem_id}/export")
    def export(poem_id: str, format: str = "text"):
        if format == "text":
            return PlainTextResponse(studio.export_poem(poem_id, fmt="text"))
        return studio.export_poem(poem_id, fmt=format)

    return app
