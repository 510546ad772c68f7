"""versesmith: a word-level LSTM line generator and co-writing studio.

Train a small language model on any UTF-8 prose corpus, sample large sets
of unique candidate lines, and arrange human-selected lines into poems
under a strict capitalisation/punctuation-only edit rule.
"""

from .analysis import (
    DeviceReport,
    FrequencyTable,
    OverlapReport,
    detect_alliteration,
    detect_assonance,
    frequency_table,
    load_stopwords,
    overlap_report,
)
from .checkpoint import Checkpoint, TrainMeta, load_checkpoint, save_checkpoint
from .corpus import (
    Corpus,
    Vocabulary,
    build_vocab,
    load_corpus,
    load_vocab,
    save_vocab,
    segment_lines,
    tokenize,
)
from .generator import CandidateLine, GenConfig, NgramIndex, generate_set, ngram_overlap, sample_line
from .lstm import ModelParams, backward, forward, lstm_cell_forward
from .trainer import TrainConfig, TrainReport, make_batches, train

__version__ = "0.1.0"

__all__ = [
    "CandidateLine",
    "Checkpoint",
    "Corpus",
    "DeviceReport",
    "FrequencyTable",
    "GenConfig",
    "ModelParams",
    "NgramIndex",
    "OverlapReport",
    "TrainConfig",
    "TrainMeta",
    "TrainReport",
    "Vocabulary",
    "backward",
    "build_vocab",
    "detect_alliteration",
    "detect_assonance",
    "forward",
    "frequency_table",
    "generate_set",
    "load_checkpoint",
    "load_corpus",
    "load_stopwords",
    "load_vocab",
    "lstm_cell_forward",
    "make_batches",
    "ngram_overlap",
    "overlap_report",
    "sample_line",
    "save_checkpoint",
    "save_vocab",
    "segment_lines",
    "tokenize",
    "train",
]
