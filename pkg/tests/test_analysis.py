from collections import Counter
from pathlib import Path

import pytest

from versesmith.analysis import (
    FrequencyTable,
    analyze_line,
    detect_alliteration,
    detect_assonance,
    frequency_table,
    load_stopwords,
    overlap_report,
)
from versesmith.corpus import Corpus, tokenize
from versesmith.generator import CandidateLine, NgramIndex, line_id_for, render_surface
from versesmith.rng import Rng

FIXTURES = Path(__file__).parent / "fixtures"


def _candidate(tokens) -> CandidateLine:
    surface = render_surface(tuple(tokens))
    return CandidateLine(tokens=tuple(tokens), surface=surface, log_probs=(),
                         overlap_score=-1, line_id=line_id_for(surface))


# -- alliteration -----------------------------------------------------------

def test_alliteration_reference_example():
    groups = detect_alliteration(tokenize("golwe van gister"))
    assert ("g", (0, 2)) in groups


def test_alliteration_requires_repetition():
    assert detect_alliteration(tokenize("die see")) == []


def test_alliteration_empty_input():
    assert detect_alliteration([]) == []


def test_alliteration_ignores_stopwords():
    # "van" starts with v, as does "vuur"; the stopword must not pair with it
    groups = detect_alliteration(tokenize("vuur van gister"))
    assert all(letter != "v" for letter, _ in groups)


def test_alliteration_window_limits_grouping():
    tokens = ["golf", "arm", "bok", "vis", "gister"]  # gap of 4 > window-1
    assert detect_alliteration(tokens, stopwords=frozenset()) == []
    tokens = ["golf", "arm", "bok", "gister"]
    assert detect_alliteration(tokens, stopwords=frozenset()) == [("g", (0, 3))]


def test_alliteration_folds_diacritics_to_base_letter():
    groups = detect_alliteration(["êrens", "eeue"], stopwords=frozenset())
    assert groups == [("e", (0, 1))]


# -- assonance ----------------------------------------------------------------

def test_assonance_reference_example():
    groups = detect_assonance(tokenize("maak ’n vraag waarbinne"))
    assert ("aa", (0, 2, 3)) in groups


def test_assonance_requires_shared_cluster():
    assert detect_assonance(tokenize("die see")) == []


def test_assonance_single_token_never_groups():
    assert detect_assonance(["maak"]) == []


def test_assonance_window_limits_grouping():
    assert detect_assonance(["maak", "b1", "b2", "b3", "vraag"]) == []


def test_assonance_detects_accented_single_vowels():
    assert detect_assonance(["sê", "lê"]) == [("ê", (0, 1))]


def test_detectors_report_valid_positions():
    pool = ["maak", "vraag", "golwe", "gister", "die", "see", "x", ".", "'n"]
    rng = Rng(5)
    for _ in range(200):
        n = 1 + int(rng.raw(1)[0] % 8)
        tokens = [pool[int(k % len(pool))] for k in rng.raw(n)]
        for _, positions in detect_alliteration(tokens) + detect_assonance(tokens):
            assert len(positions) >= 2
            assert all(0 <= p < len(tokens) for p in positions)
            assert list(positions) == sorted(positions)


def test_analyze_line_bundles_both_detectors():
    report = analyze_line("golwe van gister")
    assert report.line == "golwe van gister"
    assert report.alliterations
    assert report.assonances == ()


def test_negative_fixture_has_zero_detections():
    lines = (FIXTURES / "negative_device_lines.txt").read_text("utf-8").splitlines()
    assert len(lines) == 20
    for line in lines:
        report = analyze_line(line)
        assert report.alliterations == (), line
        assert report.assonances == (), line


# -- frequency table ---------------------------------------------------------------

def _lines_corpus(lines) -> Corpus:
    return Corpus(source_name="m", raw_text="x", lines=tuple(tuple(l) for l in lines))


def test_frequency_basic_ordering():
    table = frequency_table(_lines_corpus([["a", "b", "b"]]), stopwords=frozenset())
    assert table.entries == (("b", 2), ("a", 1))


def test_frequency_respects_stopwords():
    table = frequency_table(_lines_corpus([["a", "b", "b"]]), stopwords=frozenset({"b"}))
    assert table.entries == (("a", 1),)
    assert table.stopword_count == 2


def test_frequency_tie_break_is_lexicographic():
    table = frequency_table(_lines_corpus([["b", "a", "c", "a", "b", "c"]]),
                            stopwords=frozenset())
    assert table.entries == (("a", 2), ("b", 2), ("c", 2))


def test_frequency_matches_brute_force_oracle(sample_corpus):
    stopwords = load_stopwords()
    table = frequency_table(sample_corpus, stopwords)
    oracle = Counter()
    for line in sample_corpus.lines:
        for tok in line:
            if tok not in stopwords:
                oracle[tok] += 1
    assert dict(table.entries) == dict(oracle)
    assert table.total + table.stopword_count == sample_corpus.token_count


def test_frequency_table_type_invariants(sample_corpus):
    table = frequency_table(sample_corpus)
    assert isinstance(table, FrequencyTable)
    counts = [c for _, c in table.entries]
    assert all(c > 0 for c in counts)
    assert counts == sorted(counts, reverse=True)
    stopwords = load_stopwords()
    assert all(t not in stopwords for t, _ in table.entries)


def test_default_stopwords_cover_function_words_and_punctuation():
    stopwords = load_stopwords()
    for w in ("die", "van", "’n", "'n", "en", ".", ","):
        assert w in stopwords


def test_stopwords_loadable_from_file(tmp_path):
    p = tmp_path / "stop.txt"
    p.write_text("# comment\nfoo\nbar\n", encoding="utf-8")
    assert load_stopwords(p) == frozenset({"foo", "bar"})


# -- overlap report -------------------------------------------------------------------

HAND_CORPUS = (
    ("die", "see", "praat", "saggies"),
    ("wind", "waai", "oor", "die", "water"),
)


def test_overlap_report_verbatim_mass_at_line_lengths():
    index = NgramIndex(HAND_CORPUS)
    candidates = [_candidate(line) for line in HAND_CORPUS]
    report = overlap_report(candidates, index)
    assert dict(report.histogram) == {4: 1, 5: 1}
    assert report.total == 2


def _brute_force_overlap(tokens, corpus_lines) -> int:
    tokens = tuple(tokens)
    best = 0
    for n in range(1, len(tokens) + 1):
        grams = {tokens[i : i + n] for i in range(len(tokens) - n + 1)}
        for line in corpus_lines:
            for j in range(len(line) - n + 1):
                if tuple(line[j : j + n]) in grams:
                    best = max(best, n)
    return best


def test_overlap_report_matches_brute_force():
    index = NgramIndex(HAND_CORPUS)
    probes = [
        ("die", "see", "x"),
        ("x", "y"),
        ("wind", "waai", "anders"),
        ("die", "see", "praat", "saggies"),
    ]
    candidates = [_candidate(p) for p in probes]
    report = overlap_report(candidates, index)
    oracle = Counter(_brute_force_overlap(p, HAND_CORPUS) for p in probes)
    assert dict(report.histogram) == dict(oracle)
    assert sum(f for _, f in report.fractions) == pytest.approx(1.0)


def test_overlap_report_filtered_set_never_exceeds_cap(sample_model, sample_corpus):
    from versesmith.generator import GenConfig, generate_set

    index = NgramIndex.from_corpus(sample_corpus)
    lines = generate_set(sample_model.params, sample_model.vocab, index,
                         GenConfig(count=8, seed=21))
    report = overlap_report(lines, index)
    assert all(k <= 4 for k, _ in report.histogram)
