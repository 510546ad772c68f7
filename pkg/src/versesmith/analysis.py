"""Literary-surface analytics: alliteration/assonance heuristics, corpus
frequency statistics, and corpus-overlap reports for generated sets.

The device detectors are grapheme-level heuristics: alliteration is a
repeated initial letter, assonance a repeated vowel-grapheme cluster, both
within a sliding window of nearby tokens. No pronunciation data is used.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import Corpus, tokenize
from .generator import CandidateLine, NgramIndex

_WINDOW = 4  # tokens; group members must be at most this far apart


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set from a file, or the packaged Afrikaans default."""
    if path is None:
        text = resources.files("versesmith").joinpath("data").joinpath(
            "stopwords_af.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class DeviceReport:
    line: str
    alliterations: tuple[tuple[str, tuple[int, ...]], ...]
    assonances: tuple[tuple[str, tuple[int, ...]], ...]


@dataclass(frozen=True)
class FrequencyTable:
    """(token, count) pairs sorted by descending count, stopwords removed."""

    entries: tuple[tuple[str, int], ...]
    stopword_count: int

    @property
    def total(self) -> int:
        return sum(c for _, c in self.entries)


@dataclass(frozen=True)
class OverlapReport:
    """Distribution of longest-shared-n-gram lengths for a candidate set."""

    histogram: tuple[tuple[int, int], ...]  # (overlap length, line count)
    total: int

    @property
    def fractions(self) -> tuple[tuple[int, float], ...]:
        return tuple((k, c / self.total) for k, c in self.histogram)

    @property
    def mean(self) -> float:
        return sum(k * c for k, c in self.histogram) / self.total


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def _initial_letter(token: str) -> str | None:
    for ch in token.lower():
        if ch.isalpha():
            return unicodedata.normalize("NFD", ch)[0]
    return None


def _chains(positions: list[int], window: int) -> list[tuple[int, ...]]:
    """Split sorted positions where the gap exceeds the window, keep pairs+."""
    groups: list[tuple[int, ...]] = []
    run: list[int] = []
    for p in positions:
        if run and p - run[-1] > window - 1:
            if len(run) >= 2:
                groups.append(tuple(run))
            run = []
        run.append(p)
    if len(run) >= 2:
        groups.append(tuple(run))
    return groups


def detect_alliteration(
    tokens, stopwords: frozenset[str] | None = None, window: int = _WINDOW
) -> list[tuple[str, tuple[int, ...]]]:
    """Groups of >=2 nearby non-stopword tokens sharing an initial letter."""
    if stopwords is None:
        stopwords = load_stopwords()
    by_letter: dict[str, list[int]] = {}
    for idx, tok in enumerate(tokens):
        if not _is_word(tok) or tok.lower() in stopwords:
            continue
        letter = _initial_letter(tok)
        if letter is not None:
            by_letter.setdefault(letter, []).append(idx)
    groups = []
    for letter in sorted(by_letter):
        for chain in _chains(by_letter[letter], window):
            groups.append((letter, chain))
    groups.sort(key=lambda g: g[1][0])
    return groups


_VOWEL_BASES = set("aeiouy")


def _vowel_clusters(token: str) -> set[str]:
    """Maximal vowel-grapheme runs worth reporting: digraphs and longer,
    plus single vowels carrying a diacritic (stress/quality markers)."""
    clusters = set()
    run = ""
    for ch in token.lower() + " ":
        base = unicodedata.normalize("NFD", ch)[0] if ch.isalpha() else ch
        if base in _VOWEL_BASES:
            run += ch
            continue
        if len(run) >= 2 or (len(run) == 1 and len(unicodedata.normalize("NFD", run)) > 1):
            clusters.add(run)
        run = ""
    return clusters


def detect_assonance(tokens, window: int = _WINDOW) -> list[tuple[str, tuple[int, ...]]]:
    """Groups of >=2 nearby tokens sharing an identical vowel cluster."""
    by_cluster: dict[str, list[int]] = {}
    for idx, tok in enumerate(tokens):
        for cluster in _vowel_clusters(tok):
            by_cluster.setdefault(cluster, []).append(idx)
    groups = []
    for cluster in sorted(by_cluster):
        for chain in _chains(by_cluster[cluster], window):
            groups.append((cluster, chain))
    groups.sort(key=lambda g: g[1][0])
    return groups


def analyze_line(line: str, stopwords: frozenset[str] | None = None) -> DeviceReport:
    """Run both device detectors over one line of text."""
    tokens = tokenize(line)
    return DeviceReport(
        line=line,
        alliterations=tuple(detect_alliteration(tokens, stopwords)),
        assonances=tuple(detect_assonance(tokens)),
    )


def frequency_table(corpus: Corpus, stopwords: frozenset[str] | None = None) -> FrequencyTable:
    """Descending token counts over the segmented corpus, stopwords excluded.

    Ties break lexicographically. Counted entries plus excluded stopword
    occurrences always sum to the corpus token count.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    counts: Counter[str] = Counter()
    stopword_count = 0
    for line in corpus.lines:
        for tok in line:
            if tok in stopwords:
                stopword_count += 1
            else:
                counts[tok] += 1
    entries = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
    return FrequencyTable(entries=entries, stopword_count=stopword_count)


def overlap_report(
    candidates: list[CandidateLine], corpus_index: NgramIndex
) -> OverlapReport:
    """Histogram of longest-shared-n-gram lengths, recomputed from scratch."""
    scores = [corpus_index.longest_overlap(c.tokens) for c in candidates]
    hist = Counter(scores)
    return OverlapReport(histogram=tuple(sorted(hist.items())), total=len(scores))
