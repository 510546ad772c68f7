#!/usr/bin/env python3
"""Train a small model end to end and save a checkpoint.

Uses reduced dimensions and epochs so the demo finishes in seconds; drop
the overrides to reproduce the reference configuration (E=100, H=50,
dropout 0.2, lr 0.001, batch 16, 300 epochs).
"""

from pathlib import Path

from versesmith import TrainConfig, load_corpus, save_checkpoint, segment_lines, train

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "build"
OUT.mkdir(exist_ok=True)

corpus = segment_lines(load_corpus(ROOT / "fixtures" / "af_sample.txt"))
config = TrainConfig(embedding_dim=32, hidden=24, epochs=8, seed=7)

print("epoch,loss,perplexity,seconds")
ckpt, report = train(
    corpus, config,
    progress=lambda s: print(f"{s.epoch},{s.mean_loss:.4f},{s.perplexity:.2f},{s.seconds:.2f}"),
)

print(f"\ntrained {ckpt.params.param_count()} parameters "
      f"at {report.token_throughput:.0f} tokens/s")
path = OUT / "demo_model.ckpt"
save_checkpoint(ckpt.params, ckpt.vocab, ckpt.meta, path)
print(f"saved {path} ({path.stat().st_size} bytes)")
