#!/usr/bin/env python3
"""Sample a set of unique candidate lines with the distinctness filter.

Every accepted line shares no n-gram longer than four tokens with the
training corpus — the model recombines, it does not quote. The committed
fixture model is tiny and trained for only three epochs, so its lines are
rough; train with the reference configuration (see demo 02) for better
output.
"""

from pathlib import Path

from versesmith import (
    GenConfig,
    NgramIndex,
    generate_set,
    load_checkpoint,
    load_corpus,
    overlap_report,
    segment_lines,
)

ROOT = Path(__file__).resolve().parents[1]

ckpt = load_checkpoint(ROOT / "tests" / "fixtures" / "sample_model.ckpt")
corpus = segment_lines(load_corpus(ROOT / "fixtures" / "af_sample.txt"))
index = NgramIndex.from_corpus(corpus)

config = GenConfig(count=20, temperature=0.9, seed=2026, max_ngram_overlap=4)
lines = generate_set(ckpt.params, ckpt.vocab, index, config)

print(f"{len(lines)} accepted lines (overlap <= {config.max_ngram_overlap}):\n")
for line in lines:
    print(f"  [{line.overlap_score}] {line.surface}")

report = overlap_report(lines, index)
print(f"\noverlap distribution (mean {report.mean:.2f}):")
for length, count in report.histogram:
    print(f"  {length}-gram: {count} lines")
