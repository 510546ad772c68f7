#!/usr/bin/env python3
"""Build the committed binary test fixtures under tests/fixtures/.

    tiny_model.ckpt       6-word-vocabulary model trained on a 3-line
                          fixture text; paired with reference_logits.npy,
                          the frozen forward output for a fixed input.
    sample_model.ckpt     small model trained briefly on the sample
                          corpus; used by generator/studio/frontend tests
                          that need plausible diverse output fast.

Deterministic; rerun only when the model code intentionally changes, and
expect reference-comparison tests to be refrozen then.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from versesmith.checkpoint import save_checkpoint
from versesmith.corpus import Corpus, load_corpus, segment_lines
from versesmith.lstm import forward
from versesmith.trainer import TrainConfig, train

OUT = ROOT / "tests" / "fixtures"

TINY_TEXT = "son see wind\n\nlied droom nag\n\nsee lied son"
TINY_REFERENCE_INPUT = ["son", "see", "wind"]


def build_tiny() -> None:
    corpus = segment_lines(Corpus(source_name="tiny", raw_text=TINY_TEXT))
    config = TrainConfig(embedding_dim=8, hidden=6, dropout=0.0, epochs=30,
                         batch_size=4, seed=2024)
    ckpt, _ = train(corpus, config)
    assert ckpt.vocab.size == 10, ckpt.vocab.size  # 6 words + 4 specials
    save_checkpoint(ckpt.params, ckpt.vocab, ckpt.meta, OUT / "tiny_model.ckpt")
    ids = ckpt.vocab.encode(TINY_REFERENCE_INPUT)
    logits, _ = forward(ckpt.params, ids)
    np.save(OUT / "reference_logits.npy", logits)
    print(f"tiny_model.ckpt: V={ckpt.vocab.size} final_loss={ckpt.meta.final_loss:.4f}")


def build_sample() -> None:
    corpus = segment_lines(load_corpus(ROOT / "fixtures" / "af_sample.txt"))
    config = TrainConfig(embedding_dim=16, hidden=12, epochs=3, seed=42)
    ckpt, report = train(corpus, config)
    save_checkpoint(ckpt.params, ckpt.vocab, ckpt.meta, OUT / "sample_model.ckpt")
    print(f"sample_model.ckpt: V={ckpt.vocab.size} final_loss={ckpt.meta.final_loss:.4f} "
          f"({report.wall_seconds:.1f}s)")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    build_tiny()
    build_sample()
