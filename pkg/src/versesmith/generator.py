"""Candidate line generation: temperature sampling plus distinctness filtering.

Lines are sampled token by token from softmax(logits / temperature)
starting at BOS and stopping at EOL. A set is accepted only if each line
has at least two word tokens, is case-insensitively unique, and shares no
contiguous n-gram longer than the configured cap with the training corpus
(the distinctness filter).
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass, replace

import numpy as np

from .corpus import BOS_ID, Corpus, EOL_ID, PAD_ID, UNK_ID, Vocabulary
from .errors import InvalidArgument, ModelVocabMismatch, RetryBudgetExhausted
from .lstm import ModelParams, initial_state, step
from .numerics import _softmax
from .rng import Rng

_UNK_RESAMPLE_TRIES = 10
_RETRY_FACTOR = 50
_MIN_WORD_TOKENS = 2


@dataclass(frozen=True)
class GenConfig:
    count: int = 200
    temperature: float = 0.9
    max_tokens: int = 24
    seed: int = 0
    max_ngram_overlap: int = 4
    allow_unk: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise InvalidArgument(f"count must be >= 1, got {self.count}")
        if self.temperature <= 0:
            raise InvalidArgument(f"temperature must be > 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise InvalidArgument(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.max_ngram_overlap < 0:
            raise InvalidArgument("max_ngram_overlap must be >= 0")


@dataclass(frozen=True)
class CandidateLine:
    """A generated phrase; overlap_score is -1 until scored against a corpus."""

    tokens: tuple[str, ...]
    surface: str
    log_probs: tuple[float, ...]
    overlap_score: int
    line_id: str


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def render_surface(tokens) -> str:
    """Join word tokens with spaces, attaching punctuation to what precedes."""
    out = ""
    for tok in tokens:
        if not out:
            out = tok
        elif _is_word(tok):
            out += " " + tok
        else:
            out += tok
    return out


def line_id_for(surface: str) -> str:
    """Stable content id: hash of the casefolded NFC surface text."""
    normalized = unicodedata.normalize("NFC", surface).casefold()
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:16]


class NgramIndex:
    """Hashed within-line n-grams of a corpus, up to its longest line."""

    def __init__(self, lines):
        self.max_n = max((len(line) for line in lines), default=0)
        self._grams: dict[int, set[tuple[str, ...]]] = {n: set() for n in range(1, self.max_n + 1)}
        for line in lines:
            for n in range(1, len(line) + 1):
                grams = self._grams[n]
                for i in range(len(line) - n + 1):
                    grams.add(tuple(line[i : i + n]))

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "NgramIndex":
        return cls(corpus.lines)

    def _any_match(self, tokens: tuple[str, ...], n: int) -> bool:
        grams = self._grams.get(n)
        if not grams:
            return False
        return any(tuple(tokens[i : i + n]) in grams for i in range(len(tokens) - n + 1))

    def longest_overlap(self, tokens) -> int:
        """Length of the longest contiguous n-gram shared with the corpus.

        Binary search over n: if an n-gram matches, so does some (n-1)-gram.
        """
        tokens = tuple(tokens)
        lo, hi = 0, min(len(tokens), self.max_n)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._any_match(tokens, mid):
                lo = mid
            else:
                hi = mid - 1
        return lo


def ngram_overlap(tokens, corpus_index: NgramIndex) -> int:
    return corpus_index.longest_overlap(tokens)


def sample_line(
    params: ModelParams,
    vocab: Vocabulary,
    temperature: float,
    max_tokens: int,
    rng: Rng,
    allow_unk: bool = False,
) -> CandidateLine:
    """Draw one unfiltered line from the model.

    temperature 0 selects the argmax at every step (greedy mode). PAD and
    BOS are never emitted; EOL is suppressed at the first step so a line
    always has at least one token. Recorded log-probabilities are the
    model's untempered next-token probabilities.
    """
    if vocab.size != params.vocab_size:
        raise ModelVocabMismatch(
            f"vocabulary size {vocab.size} != model vocabulary {params.vocab_size}"
        )
    if temperature < 0:
        raise InvalidArgument(f"temperature must be >= 0, got {temperature}")
    state = initial_state(params)
    prev = BOS_ID
    token_ids: list[int] = []
    log_probs: list[float] = []
    for position in range(max_tokens):
        logits, state = step(params, state, prev)
        masked = logits.copy()
        masked[PAD_ID] = -np.inf
        masked[BOS_ID] = -np.inf
        if position == 0:
            masked[EOL_ID] = -np.inf
        if temperature == 0.0:
            chosen = int(np.argmax(masked))
        else:
            probs = _softmax(masked / temperature)
            chosen = rng.categorical(probs)
            if chosen == UNK_ID and not allow_unk:
                for _ in range(_UNK_RESAMPLE_TRIES):
                    chosen = rng.categorical(probs)
                    if chosen != UNK_ID:
                        break
                else:
                    probs[UNK_ID] = 0.0
                    chosen = rng.categorical(probs)
        if chosen == EOL_ID:
            break
        model_log_probs = np.log(_softmax(logits))
        token_ids.append(chosen)
        log_probs.append(float(model_log_probs[chosen]))
        prev = chosen
    tokens = tuple(vocab.decode(token_ids))
    surface = render_surface(tokens)
    return CandidateLine(
        tokens=tokens,
        surface=surface,
        log_probs=tuple(log_probs),
        overlap_score=-1,
        line_id=line_id_for(surface),
    )


def generate_set(
    params: ModelParams,
    vocab: Vocabulary,
    corpus_index: NgramIndex | None,
    config: GenConfig,
    exclude_ids: frozenset[str] | set[str] = frozenset(),
) -> list[CandidateLine]:
    """Exactly config.count accepted lines, or RetryBudgetExhausted.

    Accepted lines are pairwise distinct (case-insensitive surface), have
    at least two word tokens, and, when a corpus index is supplied, share
    no n-gram longer than config.max_ngram_overlap with the corpus.
    """
    if vocab.size != params.vocab_size:
        raise ModelVocabMismatch(
            f"vocabulary size {vocab.size} != model vocabulary {params.vocab_size}"
        )
    rng = Rng(config.seed)
    budget = _RETRY_FACTOR * config.count
    accepted: list[CandidateLine] = []
    seen: set[str] = set(exclude_ids)
    for _ in range(budget):
        if len(accepted) >= config.count:
            break
        cand = sample_line(
            params, vocab, config.temperature, config.max_tokens, rng,
            allow_unk=config.allow_unk,
        )
        if sum(1 for t in cand.tokens if _is_word(t)) < _MIN_WORD_TOKENS:
            continue
        if cand.line_id in seen:
            continue
        if corpus_index is not None:
            overlap = corpus_index.longest_overlap(cand.tokens)
            if overlap > config.max_ngram_overlap:
                continue
            cand = replace(cand, overlap_score=overlap)
        seen.add(cand.line_id)
        accepted.append(cand)
    if len(accepted) < config.count:
        raise RetryBudgetExhausted(
            f"accepted {len(accepted)}/{config.count} lines after {budget} samples"
        )
    return accepted
