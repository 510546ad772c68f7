#!/usr/bin/env python3
"""A complete co-writing session, scripted.

The machine writes every line; the human only selects, arranges (with
stanza breaks), and adjusts capitalisation/punctuation. Word changes are
refused. The session is persisted to an event log and survives restart.
"""

from pathlib import Path

from versesmith import GenConfig
from versesmith.studio import Studio, validate_edit

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "build"
OUT.mkdir(exist_ok=True)
store = OUT / "demo_session.jsonl"
store.unlink(missing_ok=True)

studio = Studio(
    ROOT / "tests" / "fixtures" / "sample_model.ckpt",
    store_path=store,
    corpus_path=ROOT / "fixtures" / "af_sample.txt",
)

session = studio.create_session(GenConfig(seed=31))
batch = studio.request_lines(session.id, 12)
print("the machine offers:")
for line in batch:
    print(f"  [{line.overlap_score}] {line.surface}")

chosen = batch[:3]
studio.select_lines(session.id, [l.line_id for l in chosen])

# capitalisation/punctuation edits pass; word edits are refused
ok = validate_edit(chosen[0].surface, chosen[0].surface.capitalize() + ".")
bad = validate_edit(chosen[0].surface, chosen[0].surface + " ekstra")
print(f"\nedit check: case/punct accepted={ok.accepted}, word change accepted={bad.accepted}")

poem = studio.create_poem(session.id, "Proefdruk", [
    {"kind": "line", "line_id": chosen[0].line_id,
     "display_text": chosen[0].surface.capitalize() + "."},
    {"kind": "line", "line_id": chosen[1].line_id, "display_text": chosen[1].surface},
    {"kind": "break"},
    {"kind": "line", "line_id": chosen[2].line_id, "display_text": chosen[2].surface},
])
studio.finalize_poem(poem.id)

print("\nexported poem:\n")
print(studio.export_poem(poem.id, fmt="text"))

# restart from the log: identical state, no regeneration
replayed = Studio(ROOT / "tests" / "fixtures" / "sample_model.ckpt", store_path=store)
print("replay reproduces state:", replayed.snapshot() == studio.snapshot())
