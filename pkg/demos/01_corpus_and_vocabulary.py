#!/usr/bin/env python3
"""From raw prose to training lines and a vocabulary.

Loads the sample corpus, segments it into sentence-level lines, builds the
token vocabulary, and writes the vocabulary file (one token per line in id
order, specials first).
"""

from pathlib import Path

from versesmith import build_vocab, load_corpus, save_vocab, segment_lines, tokenize

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "build"
OUT.mkdir(exist_ok=True)

corpus = load_corpus(ROOT / "fixtures" / "af_sample.txt")
print(f"loaded {corpus.source_name}: {len(corpus.raw_text)} characters")

corpus = segment_lines(corpus)
print(f"segmented into {len(corpus.lines)} lines, {corpus.token_count} tokens")
print("first three lines:")
for line in corpus.lines[:3]:
    print("  ", " ".join(line))

# tokenization keeps Afrikaans clitics whole and splits punctuation off
print("tokenize(\"’n Wolk dryf oor die see.\") ->", tokenize("’n Wolk dryf oor die see."))

vocab = build_vocab(corpus, min_count=1)
print(f"vocabulary: {vocab.size} entries (ids 0-3 are the specials)")
print("most frequent ids:", vocab.id_to_token[4:12])

vocab_path = OUT / "vocab.txt"
save_vocab(vocab, vocab_path)
print(f"wrote {vocab_path}")
