#!/usr/bin/env python3
"""Surface analytics: alliteration/assonance detection and word frequencies.

The detectors are grapheme-level heuristics — repeated initial letters and
repeated vowel clusters inside a four-token window.
"""

from pathlib import Path

from versesmith import frequency_table, load_corpus, segment_lines
from versesmith.analysis import analyze_line

ROOT = Path(__file__).resolve().parents[1]

for text in (
    "golwe van gister",
    "maak ’n vraag waarbinne",
    "die wind waai wild vanaand",
    "niks beweeg hier",
):
    report = analyze_line(text)
    print(f"{text!r}")
    for letter, positions in report.alliterations:
        print(f"  alliteration on '{letter}' at tokens {list(positions)}")
    for cluster, positions in report.assonances:
        print(f"  assonance on '{cluster}' at tokens {list(positions)}")
    if not report.alliterations and not report.assonances:
        print("  no devices detected")

corpus = segment_lines(load_corpus(ROOT / "fixtures" / "af_sample.txt"))
table = frequency_table(corpus)  # default Afrikaans stopword list
print(f"\ntop 15 content words of {corpus.source_name} "
      f"({table.stopword_count} stopword tokens removed):")
for token, count in table.entries[:15]:
    print(f"  {count:4d}  {token}")
